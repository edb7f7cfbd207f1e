#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "vper/special.hpp"
#include "vper/sphere_measure.hpp"

using namespace vper;

namespace {

constexpr double kPi = 3.14159265358979323846;

// J_n(z) = (1/pi) int_0^pi cos(n tau - z sin tau) d tau, trapezoid (periodic integrand).
double bessel_integral(int n, double z) {
  const int m = 4000 + static_cast<int>(4 * z);
  double s = 0.0;
  for (int i = 0; i < 2 * m; ++i) {
    const double tau = kPi * i / m;
    s += std::cos(n * tau - z * std::sin(tau));
  }
  return s / (2 * m);
}

// d=3 unit sphere: int over S^2 of exp(-2 pi i x.w) with x = r e_3, by
// Gauss-Legendre in cos(theta) (azimuth integrates to 2 pi).
double sphere_quadrature_d3(double r) {
  const int n = 400 + static_cast<int>(8 * r);
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    // midpoint in u = cos theta on small panels
    const double u = -1.0 + (i + 0.5) * 2.0 / n;
    const double h = 2.0 / n;
    // 3-point Gauss on each panel
    const double g = std::sqrt(0.6) * h / 2;
    s += h / 18 * (5 * std::cos(2 * kPi * r * (u - g)) + 8 * std::cos(2 * kPi * r * u) +
                   5 * std::cos(2 * kPi * r * (u + g)));
  }
  return 2 * kPi * s;
}

}  // namespace

TEST(Bessel, MatchesStdLibrary) {
  for (int i = 0; i <= 4000; ++i) {
    const double z = 0.01 + i * 0.25;
    ASSERT_NEAR(special::bessel_j0(z), std::cyl_bessel_j(0.0, z), 1e-12) << z;
    ASSERT_NEAR(special::bessel_j1(z), std::cyl_bessel_j(1.0, z), 1e-12) << z;
    ASSERT_NEAR(special::bessel_y0(z), std::cyl_neumann(0.0, z), 1e-11 * std::max(1.0, std::abs(std::cyl_neumann(0.0, z)))) << z;
    ASSERT_NEAR(special::bessel_y1(z), std::cyl_neumann(1.0, z), 1e-11 * std::max(1.0, std::abs(std::cyl_neumann(1.0, z)))) << z;
  }
}

TEST(Bessel, SwitchoverAgainstIntegralRepresentation) {
  for (double z = special::kAsymptoticSwitch - 3; z <= special::kAsymptoticSwitch + 3; z += 0.125) {
    EXPECT_NEAR(special::bessel_j0(z), bessel_integral(0, z), 1e-12) << z;
    EXPECT_NEAR(special::bessel_j1(z), bessel_integral(1, z), 1e-12) << z;
  }
}

TEST(SigmaHat, Examples) {
  EXPECT_NEAR(sigma_hat(3, 1, 0), 4 * kPi, 1e-14);
  EXPECT_NEAR(sigma_hat(3, 1, 0.5), 0.0, 1e-14);
  EXPECT_NEAR(sigma_hat(2, 1, 0), 2 * kPi, 1e-14);
  for (int d = 2; d <= 5; ++d) EXPECT_NEAR(sigma_hat(d, 2.0, 0.0), std::pow(2.0, d - 1) * unit_sphere_area(d), 1e-12);
  EXPECT_THROW(sigma_hat(6, 1, 1), std::invalid_argument);
  EXPECT_THROW(sigma_hat(3, 0, 1), std::invalid_argument);
}

TEST(SigmaHat, BesselFormAgainstStdLibrary) {
  for (int d = 2; d <= 5; ++d) {
    const double nu = 0.5 * (d - 2);
    for (int i = 1; i <= 3000; ++i) {
      const double r = i * 0.0333;
      const double ref = 2 * kPi * std::pow(r, -nu) * std::cyl_bessel_j(nu, 2 * kPi * r);
      ASSERT_NEAR(sigma_hat(d, 1, r), ref, 1e-9) << d << " " << r;
    }
  }
}

TEST(SigmaHat, ClosedFormMatchesSphereQuadrature) {
  for (double r : {0.1, 0.5, 1.3, 7.7, 42.0, 100.0}) {
    EXPECT_NEAR(sigma_hat(3, 1, r), sphere_quadrature_d3(r), 1e-9) << r;
  }
}

TEST(SigmaHat, ScalingLaw) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ut(0.5, 64.0), ur(0.0, 15.0);
  for (int d = 2; d <= 5; ++d) {
    for (int i = 0; i < 100; ++i) {
      const double t = ut(rng), r = ur(rng);
      const double tp = std::pow(t, d - 1);
      ASSERT_NEAR(sigma_hat(d, t, r), tp * sigma_hat(d, 1, t * r), 1e-9 * tp);
    }
  }
}

TEST(SigmaHat, Radial) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  const SphereFT s(4);
  std::vector<double> x = {0.3, -1.2, 2.0, 0.7};
  double norm = 0;
  for (double v : x) norm += v * v;
  norm = std::sqrt(norm);
  const double ref = s.value(1.3, x);
  for (int i = 0; i < 20; ++i) {
    std::vector<double> y(4);
    double ny = 0;
    for (double& v : y) { v = g(rng); ny += v * v; }
    for (double& v : y) v *= norm / std::sqrt(ny);
    ASSERT_NEAR(s.value(1.3, y), ref, 1e-12);
  }
}

TEST(SigmaHat, FlagsUnvalidatedRange) {
  EXPECT_TRUE(sigma_hat_checked(3, 1, 999).validated);
  EXPECT_FALSE(sigma_hat_checked(3, 2, 999).validated);
}

TEST(Amplitude, DimensionThreeExact) {
  for (double r : {1.0, 2.0, 10.0}) EXPECT_NEAR(std::abs(amplitude(3, r)), 2 / r, 1e-15);
  EXPECT_THROW(amplitude(3, 0.4), std::domain_error);
}

TEST(Amplitude, Reconstruction) {
  for (int d = 2; d <= 5; ++d) {
    for (double r : {0.5, 1.0, 2.4, 5.0, 17.3, 250.0}) {
      const auto a = amplitude(d, r);
      const double rec = (a * std::polar(1.0, 2 * kPi * r)).real();
      EXPECT_NEAR(rec, sigma_hat(d, 1, r), 1e-8 * std::abs(a)) << d << " " << r;
    }
  }
}

TEST(Amplitude, DecayExponents) {
  for (int d = 2; d <= 5; ++d) {
    for (int k = 0; k <= 3; ++k) {
      const DecayFit f = amplitude_derivative_decay(d, k);
      EXPECT_NEAR(f.exponent, 0.5 * (d - 1) + k, 0.05) << d << " " << k;
      EXPECT_TRUE(f.fit_ok);
    }
  }
  EXPECT_THROW(amplitude_derivative_decay(3, 4), std::invalid_argument);
}
