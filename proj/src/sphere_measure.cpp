#include "vper/sphere_measure.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "vper/quadrature.hpp"
#include "vper/special.hpp"

namespace vper {

namespace {

using quad::kPi;
using quad::kTwoPi;

void check_dim(int d) {
  if (d < kMinSphereDim || d > kMaxSphereDim) {
    throw std::invalid_argument("dimension must be in 2..5, got " + std::to_string(d));
  }
}

double order_of(int d) { return 0.5 * (d - 2); }

// (sin z / z - cos z) / z^2 without cancellation near 0.
double j32_core_over_z2(double z) {
  if (z < 0.5) {
    const double z2 = z * z;
    double term = 1.0 / 3.0;  // k = 1: 2 / 3!
    double sum = term;
    for (int k = 2; k < 30; ++k) {
      term *= -z2 * k / ((k - 1.0) * (2.0 * k) * (2.0 * k + 1.0));
      sum += term;
      if (std::abs(term) < 1e-18 * sum) break;
    }
    return sum;
  }
  return (std::sin(z) / z - std::cos(z)) / (z * z);
}

// Unit sphere, t = 1.
double unit_sigma_hat(int d, double r) {
  const double z = kTwoPi * r;
  switch (d) {
    case 3:
      if (z < 1e-4) return 4.0 * kPi * (1.0 - z * z / 6.0);
      return 2.0 * std::sin(z) / r;
    case 5:
      // 2 pi r^{-3/2} J_{3/2}(2 pi r) = 2 r^{-2} (sin z / z - cos z)
      return 2.0 * kTwoPi * kTwoPi * j32_core_over_z2(z);
    case 2:
      return kTwoPi * special::bessel_j0(z);
    case 4:
      if (z < 2.0) return kTwoPi * kTwoPi * special::bessel_j_scaled_series(1.0, z);
      return kTwoPi * special::bessel_j1(z) / r;
    default:
      check_dim(d);
      return 0.0;
  }
}

}  // namespace

double unit_sphere_area(int d) {
  check_dim(d);
  return 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d);
}

double sigma_hat(int d, double t, double r) {
  check_dim(d);
  if (!(t > 0)) throw std::invalid_argument("sigma_hat: radius t must be positive");
  if (!(r >= 0)) throw std::invalid_argument("sigma_hat: r must be nonnegative");
  return std::pow(t, d - 1) * unit_sigma_hat(d, t * r);
}

SigmaValue sigma_hat_checked(int d, double t, double r) {
  return {sigma_hat(d, t, r), t * r <= kSigmaValidatedRange};
}

std::complex<double> amplitude(int d, double r, double r_min) {
  check_dim(d);
  if (!(r >= r_min)) {
    throw std::domain_error("amplitude: r below r_min (" + std::to_string(r_min) + ")");
  }
  const double z = kTwoPi * r;
  switch (d) {
    case 3:
      return {0.0, -2.0 / r};
    case 5:
      return 2.0 / (r * r) * std::complex<double>(-1.0, -1.0 / z);
    default: {
      // 2 pi r^{-nu} H^(1)_nu(2 pi r) exp(-2 pi i r)
      const int n = d == 2 ? 0 : 1;
      return kTwoPi * std::pow(r, -order_of(d)) * special::hankel1_envelope(n, z);
    }
  }
}

DecayFit amplitude_derivative_decay(int d, int k, double r_lo, double r_hi, int points) {
  check_dim(d);
  if (k < 0 || k > 3) throw std::invalid_argument("amplitude_derivative_decay: k must be in 0..3");
  if (!(r_lo >= 1.0) || !(r_hi > r_lo) || points < 3) {
    throw std::invalid_argument("amplitude_derivative_decay: bad grid");
  }
  std::vector<double> rs(static_cast<std::size_t>(points)), mags(rs.size());
  for (int i = 0; i < points; ++i) {
    const double r = r_lo * std::pow(r_hi / r_lo, static_cast<double>(i) / (points - 1));
    const double h = 0.02 * r;
    auto a = [d, r, h](int j) { return amplitude(d, r + j * h, 0.0); };
    std::complex<double> v;
    switch (k) {
      case 0: v = a(0); break;
      case 1: v = (-a(2) + 8.0 * a(1) - 8.0 * a(-1) + a(-2)) / (12.0 * h); break;
      case 2: v = (-a(2) + 16.0 * a(1) - 30.0 * a(0) + 16.0 * a(-1) - a(-2)) / (12.0 * h * h); break;
      default:
        v = (-a(3) + 8.0 * a(2) - 13.0 * a(1) + 13.0 * a(-1) - 8.0 * a(-2) + a(-3)) / (8.0 * h * h * h);
    }
    rs[static_cast<std::size_t>(i)] = r;
    mags[static_cast<std::size_t>(i)] = std::abs(v);
  }
  const quad::LineFit fit = quad::fit_loglog(rs, mags);
  DecayFit out;
  out.dimension = d;
  out.order = k;
  out.exponent = -fit.slope;
  out.expected = 0.5 * (d - 1) + k;
  out.r2 = fit.r2;
  out.fit_ok = fit.r2 >= 0.99;
  return out;
}

SphereFT::SphereFT(int d, double r_min) : d_(d), r_min_(r_min) {
  check_dim(d);
  if (!(r_min > 0)) throw std::invalid_argument("SphereFT: r_min must be positive");
}

double SphereFT::value(double t, std::span<const double> x) const {
  if (static_cast<int>(x.size()) != d_) throw std::invalid_argument("SphereFT: point dimension mismatch");
  double s = 0.0;
  for (double v : x) s += v * v;
  return sigma_hat(d_, t, std::sqrt(s));
}

}  // namespace vper
