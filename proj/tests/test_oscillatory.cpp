#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include "vper/bump.hpp"
#include "vper/oscillatory.hpp"
#include "vper/quadrature.hpp"
#include "vper/sphere_measure.hpp"

using namespace vper;
using namespace vper::osc;

namespace {

constexpr double kPi = 3.14159265358979323846;

cplx expi(double turns) { return {std::cos(2 * kPi * turns), std::sin(2 * kPi * turns)}; }

TestFunction gaussian(int d, double w = 1.0) { return TestFunction(std::make_shared<const GaussianProfile>(d, w)); }

std::vector<double> random_unit(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<double> v(static_cast<std::size_t>(d));
  double n = 0;
  for (auto& x : v) {
    x = g(rng);
    n += x * x;
  }
  for (auto& x : v) x /= std::sqrt(n);
  return v;
}

}  // namespace

TEST(SphereRules, ZonalMatchesClosedFormD3) {
  for (double r : {0.0, 0.3, 2.0, 7.5}) {
    const cplx v = zonal_integral(3, 60, [r](double u) { return expi(r * u); });
    EXPECT_NEAR(v.real(), sigma_hat(3, 1.0, r), 1e-12) << r;
    EXPECT_NEAR(v.imag(), 0.0, 1e-12);
  }
}

TEST(SphereRules, OffAxisPlaneWave) {
  std::mt19937_64 rng(3);
  for (int d : {3, 4}) {
    const auto v = random_unit(d, rng);
    const double r = 2.5;
    const cplx got = sphere_integral(d, 48, {}, [&](std::span<const double> w) {
      double dot = 0;
      for (int i = 0; i < d; ++i) dot += v[i] * w[i];
      return expi(r * dot);
    });
    EXPECT_NEAR(got.real(), sigma_hat(d, 1.0, r), 1e-10) << d;
    EXPECT_NEAR(got.imag(), 0.0, 1e-10);
  }
}

TEST(SphericalMean, RadialAtOrigin) {
  const auto f = gaussian(3);
  const std::vector<double> y(3, 0.0);
  const auto m = spherical_mean(f, y, 2.0);
  EXPECT_NEAR(m.value.real(), f.profile().fourier(2.0) * 4 * kPi * 4, 1e-14);
  EXPECT_FALSE(m.oscillation_warning);
}

TEST(SphericalMean, VanishesWhereTransformVanishes) {
  const TestFunction f(std::make_shared<const AnnulusProfile>(3, 0.05, 0.95));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int i = 0; i < 5; ++i) {
    const std::vector<double> y{u(rng), u(rng), u(rng)};
    EXPECT_EQ(std::abs(spherical_mean(f, y, 1.0).value), 0.0);
    EXPECT_EQ(std::abs(spherical_mean(f, y, 1.5).value), 0.0);
  }
}

TEST(SphericalMean, WarnsBeyondValidatedBand) {
  const auto f = gaussian(3, 0.01);
  const std::vector<double> y{800.0, 0.0, 0.0};
  EXPECT_TRUE(spherical_mean(f, y, 1.0).oscillation_warning);
}

TEST(SphericalMean, FrequencySideMatchesSpaceSide) {
  const std::vector<double> tau{0.1, -0.2, 0.3}, theta{0.4, 0.0, -0.3};
  for (const auto& f : {gaussian(3), gaussian(3).translated(tau).modulated(theta)}) {
    const std::vector<double> y{0.3, 0.5, -0.2};
    const SpaceSideMeans sm(f, y, 3.0);
    for (double t : {0.5, 1.0, 2.0, 3.0}) {
      const cplx freq = spherical_mean(f, y, t).value;
      EXPECT_LT(std::abs(freq - sm.h(t)), 1e-6) << f.describe() << " t=" << t;
    }
  }
}

TEST(SphericalMean, SplitConsistencyRandom) {
  const auto f = gaussian(3).modulated(std::vector<double>{0.2, 0.1, 0.0});
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uy(-1.5, 1.5), ut(0.2, 2.5);
  int checked = 0;
  for (int j = 0; j < 10; ++j) {
    const std::vector<double> y{uy(rng), uy(rng), uy(rng)};
    const SpaceSideMeans sm(f, y, 2.5);
    for (int i = 0; i < 10; ++i) {
      const double t = ut(rng);
      const auto fm = spherical_mean(f, y, t);
      const double budget = 1e-6 + fm.error_estimate + sm.tail_bound(t);
      EXPECT_LT(std::abs(sm.h1(t) + sm.h2(t) - fm.value), budget);
      ++checked;
    }
  }
  EXPECT_EQ(checked, 100);
}

TEST(StationaryPhase, ZeroPhaseLimit) {
  const Bump q = make_dyadic_cutoff();
  const auto r = stationary_phase_integral(q, 1e-15, 1.0, 1.0);
  EXPECT_NEAR(r.value.real(), integral(q, 256), 1e-12);
  EXPECT_NEAR(r.value.imag(), 0.0, 1e-12);
}

TEST(StationaryPhase, MatchesDenseQuadrature) {
  const Bump q = make_dyadic_cutoff();
  for (double c : {0.4, 1.1, 3.0}) {
    const double lam = 300.0;
    const cplx ref = quad::integrate(
        [&](double t) { return q(t) * expi(-lam * (t - c) * (t - c)); }, 0.5, 2.0, 3000, 20);
    const auto r = stationary_phase_integral(q, lam, 1.0, c);
    EXPECT_LT(std::abs(r.value - ref), 1e-10) << c;
    EXPECT_LE(r.error_bound, 1e-10);
  }
}

TEST(StationaryPhase, ConjugationSymmetry) {
  const Bump q = make_dyadic_cutoff();
  const auto p = stationary_phase_integral(q, 3.0, 2.0, 1.1);
  const auto m = stationary_phase_integral(q, -3.0, 2.0, 1.1);
  EXPECT_LT(std::abs(m.value - std::conj(p.value)), 1e-13);
}

TEST(StationaryPhase, InteriorCriticalPointBand) {
  const Bump q = make_dyadic_cutoff();
  for (double c : {0.75, 1.0, 1.25, 1.5}) {
    double lo = 1e300, hi = 0;
    for (double lam : {1e2, 1e4, 1e6}) {
      const double v = std::abs(stationary_phase_integral(q, lam, 1.0, c).value) * std::sqrt(lam);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    EXPECT_LE(hi / lo, 1.25) << c;
  }
}

TEST(StationaryPhase, FastDecayOffSupport) {
  const Bump q = make_dyadic_cutoff();
  const std::vector<double> lams{1, 1.5, 2, 3, 4, 6, 8, 16};
  const auto fit = stationary_phase_decay(q, 10.0, lams);
  EXPECT_GE(fit.exponent, 2.5);
}

TEST(StationaryPhase, IbpBoundDominates) {
  const Bump q = make_dyadic_cutoff();
  ChirpAmplitude a{0.5, 2.0, [&](double t) { return cplx(q(t), 0.0); },
                   [&](double t) { return std::pair{q.jet(Jet::variable(t)), Jet::constant(0.0)}; }};
  for (double lam : {2.0, 5.0}) {
    const cplx ref = quad::integrate(
        [&](double t) { return q(t) * expi(-lam * (t - 6.0) * (t - 6.0)); }, 0.5, 2.0, 400, 20);
    EXPECT_LE(std::abs(ref), ibp_bound(a, lam, 6.0)) << lam;
  }
}

TEST(Kernel, VanishesInsideUnitBall) {
  const DyadicKernel k{3, 1, 0.125};
  for (double x : {0.0, 0.5, 1.0}) EXPECT_EQ(std::abs(kernel_D(k, 4.0, x).value), 0.0);
}

TEST(Kernel, MatchesIntegrandOracle) {
  for (int d : {2, 3, 4, 5}) {
    for (int nu : {1, -2}) {
      const DyadicKernel k{d, nu, 0.125};
      for (double N : {1.0, 2.0}) {
        for (double x : {1.5, 3.0}) {
          const cplx ref = quad::integrate([&](double t) { return kernel_D_integrand(k, N, x, t); }, 0.5, 2.0,
                                           2000, 20);
          const auto v = kernel_D(k, N, x);
          EXPECT_LT(std::abs(v.value - ref), 1e-9 * std::max(1.0, std::abs(ref)))
              << "d=" << d << " nu=" << nu << " N=" << N << " x=" << x;
        }
      }
    }
  }
}

TEST(Kernel, DyadicWindow) {
  const DyadicKernel k{3, 2, 0.125};
  std::vector<double> mags;
  for (int l = 0; l <= 8; ++l) mags.push_back(std::abs(kernel_D(k, std::ldexp(1.0, l), 8.0).value));
  const double in_window = std::max({mags[0], mags[1], mags[2]});
  for (int l = 0; l <= 8; ++l) EXPECT_LE(mags[l], in_window) << l;
  for (int l = 5; l <= 8; ++l) EXPECT_LT(mags[l], 1e-3 * in_window) << l;
}

TEST(Kernel, PartialSumsConverge) {
  const DyadicKernel k{3, 1, 0.125};
  const auto s = kernel_K_bound(k, 10.0, 12);
  EXPECT_TRUE(s.converged);
  EXPECT_EQ(s.terms.size(), 13u);
  EXPECT_NEAR(s.partial_sums.back(), s.total, 0.0);
  EXPECT_LE(s.window_lo, s.window_hi);
}

TEST(Kernel, SweepMatchesPointwise) {
  const DyadicKernel k{3, 2, 0.125};
  const std::vector<double> xs{1.5, 4.0, 20.0};
  const auto sweep = kernel_sweep(k, xs, 10);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    EXPECT_EQ(sweep[i].total, kernel_K_bound(k, xs[i], 10).total);
  }
}

TEST(Kernel, RejectsBadParameters) {
  EXPECT_THROW(kernel_K_bound({3, 0, 0.125}, 2.0, 5), std::invalid_argument);
  EXPECT_THROW(kernel_K_bound({3, 1, 0.125}, 2.0, 21), std::invalid_argument);
}

TEST(Poisson, GaussianSelfDual) {
  EXPECT_LE(poisson_gaussian(1.0).residual, 1e-12);
  EXPECT_LE(poisson_gaussian(2.0).residual, 1e-10);
}

TEST(Poisson, VanishingFamilyWithinBaseline) {
  const double b = 0.125;
  const auto prof = shifted_gap_annulus(8, b);
  const std::vector<double> y{0.7, 0.2, 0.1, 0.0};
  const auto v = poisson_vanishing(*prof, y, b, 4.0);
  EXPECT_EQ(v.max_abs_F_n, 0.0);
  EXPECT_EQ(std::abs(v.result.lhs), 0.0);
  const auto base = poisson_gaussian_quadrature(1.0);
  EXPECT_LE(v.result.residual, 10 * base.result.residual);
}

TEST(Poisson, QuadraturePathAgreesWithClosedForm) {
  const auto q = poisson_gaussian_quadrature(2.0);
  const auto c = poisson_gaussian(2.0);
  EXPECT_NEAR(std::abs(q.result.rhs), std::abs(c.rhs) / q.l1_norm, 1e-12);
}

TEST(DerivativeGrowth, EnvelopeSlope) {
  const auto f = gaussian(3);
  const std::vector<double> ts{1, 2, 4, 8, 16, 32, 64};
  const std::vector<double> ys{0.1, 0.2, 0.3, 1.3, -0.4, 0.2};
  for (int k : {0, 2}) {
    const auto g = h1_derivative_growth(f, k, ts, ys);
    EXPECT_LE(g.slope, 2.1) << k;
    for (std::size_t i = 0; i < ts.size(); ++i) EXPECT_GT(g.max_abs[i], 0.0);
  }
}

TEST(DerivativeGrowth, Linear) {
  const auto f = gaussian(3);
  const std::vector<double> ts{1, 4, 16};
  const std::vector<double> ys{0.1, 0.2, 0.3};
  const auto g1 = h1_derivative_growth(f, 1, ts, ys);
  const auto g2 = h1_derivative_growth(f.scaled(2.0), 1, ts, ys);
  for (std::size_t i = 0; i < ts.size(); ++i) EXPECT_NEAR(g2.max_abs[i], 2 * g1.max_abs[i], 1e-12 * g1.max_abs[i]);
}

TEST(DerivativeGrowth, ChainRule) {
  const auto f = gaussian(3);
  const std::vector<double> y{0.2, -0.1, 0.4};
  std::vector<double> ts;
  for (int i = 0; i < 50; ++i) ts.push_back(1.0 + 0.37 * i);
  const auto c = chain_rule_check(f, y, 0.125, ts);
  EXPECT_EQ(c.points, 50u);
  EXPECT_LE(c.max_rel_error, 1e-4);
}
