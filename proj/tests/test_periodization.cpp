#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <random>

#include "vper/periodization.hpp"
#include "vper/quadrature.hpp"
#include "vper/sphere_measure.hpp"

using namespace vper;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::shared_ptr<const AnnulusProfile> gap_annulus(int d = 4) {
  static auto p4 = std::make_shared<const AnnulusProfile>(4, 0.05, 0.95);
  static auto p3 = std::make_shared<const AnnulusProfile>(3, 0.05, 0.95);
  return d == 4 ? p4 : p3;
}

}  // namespace

TEST(AnnulusProfile, TableMatchesDirectQuadrature) {
  const auto p = gap_annulus();
  EXPECT_NEAR(p->value(0.0), 1.0, 1e-12);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, p->table_radius());
  for (int i = 0; i < 300; ++i) {
    const double r = u(rng);
    ASSERT_NEAR(p->value(r), p->value_direct(r), 2e-15) << r;
  }
}

TEST(AnnulusProfile, ThreeDimensionalClosedFormOracle) {
  // d=3: f(r) = (2/r) int g(rho) rho sin(2 pi rho r) d rho; trapezoid oracle.
  const auto p = gap_annulus(3);
  for (double r : {0.3, 1.7, 4.2, 9.9}) {
    const int n = 20000;
    double s = 0.0;
    for (int i = 1; i < n; ++i) {
      const double rho = 0.05 + 0.9 * i / n;
      s += p->fourier(rho) * rho * std::sin(2 * kPi * rho * r);
    }
    s *= 0.9 / n * 2.0 / r;
    EXPECT_NEAR(p->value(r), s, 1e-12) << r;
  }
}

TEST(AnnulusProfile, EnvelopeAndMajorantHold) {
  const auto p = gap_annulus();
  const auto env = p->envelope();
  EXPECT_GT(env.s, 4.0);
  constexpr double kRefRoundoff = 1e-15;  // cancellation floor of value_direct
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 50.0);
  for (int i = 0; i < 1000; ++i) {
    const double r = u(rng);
    const double v = std::abs(p->value_direct(r));
    ASSERT_LE(v, p->majorant(r) * (1 + 1e-12) + kRefRoundoff) << r;
  }
  // Beyond the table only the envelope is available.
  const double R = p->envelope_radius();
  for (int i = 0; i < 200; ++i) {
    const double r = R + 20.0 * i / 199.0;
    ASSERT_LE(std::abs(p->value_direct(r)), env.A * std::pow(1 + r, -env.s) + kRefRoundoff) << r;
  }
  EXPECT_EQ(p->fourier(0.04), 0.0);
  EXPECT_EQ(p->fourier(0.96), 0.0);
  EXPECT_GT(p->fourier(0.5), 0.0);
}

TEST(TestFunction, TranslationAndModulationIdentities) {
  const TestFunction f(gap_annulus());
  const std::vector<double> tau = {0.3, -0.2, 0.1, 0.7}, theta = {0.01, 0.0, -0.02, 0.005};
  const TestFunction g = f.translated(tau).modulated(theta);
  const std::vector<double> x = {0.4, 1.1, -0.3, 0.2};
  std::vector<double> xm(4);
  double dot = 0;
  for (int i = 0; i < 4; ++i) {
    xm[i] = x[i] - tau[i];
    dot += theta[i] * x[i];
  }
  const auto expect = std::polar(1.0, 2 * kPi * dot) * f.value(xm);
  EXPECT_NEAR(std::abs(g.value(x) - expect), 0.0, 1e-15);
  EXPECT_FALSE(g.is_radial());
  EXPECT_FALSE(g.is_real());
  const auto supp = g.frequency_support();
  ASSERT_EQ(supp.size(), 1u);
  EXPECT_GT(supp[0].hi, 0.95);
}

TEST(Rotation, HaarSampleProperties) {
  for (int d = 2; d <= 5; ++d) {
    for (std::uint64_t seed : {1ULL, 7ULL, 12345ULL}) {
      const Rotation r = sample_rotation(d, seed);
      EXPECT_LE(r.orthogonality_error(), 1e-12);
      EXPECT_NEAR(r.determinant(), 1.0, 1e-12);
      const Rotation again = sample_rotation(d, seed);
      EXPECT_EQ(r.matrix, again.matrix);
      for (int j = 0; j < d; ++j) {
        double s = 0;
        for (int i = 0; i < d; ++i) s += r(i, j) * r(i, j);
        EXPECT_NEAR(std::sqrt(s), 1.0, 1e-12);
      }
    }
  }
  EXPECT_THROW(sample_rotation(1, 0), std::invalid_argument);
}

TEST(Periodize, GaussianMatchesOneDimensionalOracle) {
  const TestFunction f(std::make_shared<GaussianProfile>(2));
  double s1 = 0.0;
  for (int n = -40; n <= 40; ++n) s1 += std::exp(-kPi * n * n);
  const std::vector<double> x = {0.0, 0.0};
  const auto r = periodize(f, identity_rotation(2), x, 1e-14);
  EXPECT_NEAR(r.value.real(), s1 * s1, 1e-13);
  EXPECT_EQ(r.value.imag(), 0.0);
}

TEST(Periodize, PeriodicAndReal) {
  const TestFunction f(std::make_shared<GaussianProfile>(3, 1.3));
  const Rotation rho = sample_rotation(3, 99);
  const double tol = 1e-10;
  std::vector<double> x = {0.21, -0.4, 0.77};
  const auto base = periodize(f, rho, x, tol);
  EXPECT_EQ(base.value.imag(), 0.0);
  for (int j = 0; j < 3; ++j) {
    auto y = x;
    y[j] += 1.0;
    EXPECT_LE(std::abs(periodize(f, rho, y, tol).value - base.value), 2 * tol);
  }
}

TEST(Periodize, TailBoundControlsTruncation) {
  const TestFunction f(gap_annulus(3));
  const Rotation rho = identity_rotation(3);
  std::vector<double> x = {0.1, 0.2, 0.3};
  for (double tol : {1e-3, 1e-5}) {
    const double R = lattice_radius_for(f, tol);
    const double bound = lattice_tail_bound(f, R);
    EXPECT_LE(bound, tol);
    const auto a = periodize_batch(f, rho, x, R, Exec::Serial);
    const auto b = periodize_batch(f, rho, x, 2 * R, Exec::Serial);
    EXPECT_LE(std::abs(a[0] - b[0]), bound) << tol;
  }
}

TEST(Periodize, RejectsSlowDecay) {
  struct Slow final : RadialProfile {
    int dimension() const override { return 2; }
    double value(double r) const override { return 1 / (1 + r * r); }
    double fourier(double) const override { return 0; }
    double majorant(double r) const override { return value(r); }
    DecayEnvelope envelope() const override { return {1.0, 2.0}; }
    std::vector<Interval> frequency_support() const override { return {}; }
    double envelope_radius() const override { return 0; }
    double value_error() const override { return 0; }
    std::string describe() const override { return "slow"; }
  };
  const TestFunction f(std::make_shared<Slow>());
  EXPECT_THROW(lattice_tail_bound(f, 10), std::invalid_argument);
}

TEST(Periodize, SerialAndParallelAgree) {
  const TestFunction f = TestFunction(gap_annulus(3)).translated(std::vector<double>{0.2, 0.1, 0.0});
  const Rotation rho = sample_rotation(3, 5);
  const auto pts = cube_grid(3, 3, 3);
  const auto a = periodize_batch(f, rho, pts, 6.0, Exec::Serial);
  const auto b = periodize_batch(f, rho, pts, 6.0, Exec::Parallel);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]);
}

TEST(FourierCoefficients, GaussianIdentity) {
  const TestFunction f(std::make_shared<GaussianProfile>(2));
  const Rotation rho = sample_rotation(2, 3);
  const std::vector<int> m0 = {0, 0}, m1 = {1, 0};
  const auto c0 = fourier_coeff_check(f, rho, m0, 12, 1e-13);
  EXPECT_NEAR(c0.coefficient.real(), 1.0, 1e-10);  // int f = f_hat(0) = 1
  const auto c1 = fourier_coeff_check(f, rho, m1, 12, 1e-13);
  EXPECT_LE(c1.residual, 1e-8);
  EXPECT_FALSE(c1.resolution_warning);
}

TEST(FourierCoefficients, RefinementReducesResidual) {
  const TestFunction f(std::make_shared<GaussianProfile>(2, 0.7));
  const Rotation rho = sample_rotation(2, 8);
  const std::vector<int> m = {1, 1};
  const double coarse = fourier_coeff_check(f, rho, m, 3, 1e-13).residual;
  const double fine = fourier_coeff_check(f, rho, m, 6, 1e-13).residual;
  EXPECT_TRUE(fine < coarse || fine <= 1e-12) << coarse << " " << fine;
}

TEST(FourierCoefficients, AnnulusCoefficientsVanish) {
  const TestFunction f(gap_annulus(3));
  const Rotation rho = sample_rotation(3, 4);
  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 1; ++b)
      for (int c = -1; c <= 1; ++c) {
        const std::vector<int> m = {a, b, c};
        const auto r = fourier_coeff_check(f, rho, m, 4, 1e-9);
        ASSERT_LE(std::abs(r.coefficient), 1e-8);
        ASSERT_LE(r.residual, 1e-8);
      }
}

TEST(Vanishing, AnnulusPassesGaussianFails) {
  const TestFunction f(gap_annulus());
  std::vector<Rotation> rots;
  for (int i = 0; i < 3; ++i) rots.push_back(sample_rotation(4, 100 + i));
  const auto grid = cube_grid(4, 2, 3);
  const auto rep = check_vanishing(f, rots, grid, 1e-6, 1e-7);
  EXPECT_TRUE(rep.support.certified) << rep.support.detail;
  EXPECT_TRUE(rep.pass) << rep.max_abs << " budget " << rep.budget;
  EXPECT_LT(rep.budget, 1e-6);

  const TestFunction g(std::make_shared<GaussianProfile>(4));
  const auto bad = check_vanishing(g, rots, grid, 1e-6, 1e-7);
  EXPECT_FALSE(bad.pass);
  const std::vector<double> origin(4, 0.0);
  EXPECT_GT(periodize(g, identity_rotation(4), origin, 1e-9).value.real(), 1.0);
}

TEST(Vanishing, RotationIndependentForRadial) {
  const TestFunction f(gap_annulus(3));
  const auto grid = cube_grid(3, 2, 3);
  std::vector<Rotation> a = {sample_rotation(3, 1)}, b = {sample_rotation(3, 2)};
  const auto ra = check_vanishing(f, a, grid, 1e-6, 1e-8);
  const auto rb = check_vanishing(f, b, grid, 1e-6, 1e-8);
  EXPECT_EQ(ra.pass, rb.pass);
  EXPECT_NEAR(ra.max_abs, rb.max_abs, 1e-10);
}

TEST(Vanishing, UncertifiedSupportDetected) {
  // [0.9, 1.1] contains the lattice radius 1.
  const TestFunction f(std::make_shared<AnnulusProfile>(3, 0.9, 1.1));
  const auto c = certify_frequency_support(f);
  EXPECT_FALSE(c.certified);
  std::vector<Rotation> rots = {identity_rotation(3)};
  const auto rep = check_vanishing(f, rots, cube_grid(3, 3, 3), 1e-6, 1e-6);
  EXPECT_FALSE(rep.pass);
  EXPECT_FALSE(rep.violations.empty());
}
