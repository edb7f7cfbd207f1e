#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "vper/counterexamples.hpp"
#include "vper/norms.hpp"
#include "vper/quadrature.hpp"
#include "vper/separable.hpp"
#include "vper/test_function.hpp"

using namespace vper;

namespace {

constexpr double kPi = 3.14159265358979323846;
const double kInf = norms::kInfinity;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Plane-family shape with few frequencies, cheap enough for a full 2-D grid.
SeparableFunction small_d2() {
  const auto b = cex::build_plane_family(256);
  auto freqs = b.f.axis(0).freqs;
  freqs.resize(8);
  return SeparableFunction({SeparableAxis{b.f.axis(0).scale, freqs}, b.f.axis(1)});
}

}  // namespace

TEST(BumpTransform, TableMatchesDirect) {
  const auto phi = counterexample_bump();
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 40.0);
  for (int i = 0; i < 200; ++i) {
    const double x = u(rng);
    EXPECT_NEAR((*phi)(x), phi->direct(x), 1e-13) << x;
    EXPECT_EQ((*phi)(x), (*phi)(-x));
  }
  EXPECT_LT(std::abs((*phi)(40.0)), 1e-13 * phi->at_zero());
}

TEST(BumpTransform, PlancherelAndMass) {
  const auto phi = counterexample_bump();
  const auto& b = phi->bump();
  const double l2 = quad::integrate([&](double x) { return b(x) * b(x); }, b.lo(), b.hi(), 64);
  EXPECT_NEAR(phi->lp_pow(2.0), l2, 1e-12);
  // int phi_check = phi(0) = 1 and phi_check(0) = int phi.
  EXPECT_GE(phi->lp_pow(1.0), 1.0 - 1e-12);
  const double mass = quad::integrate([&](double x) { return b(x); }, b.lo(), b.hi(), 64);
  EXPECT_NEAR(phi->at_zero(), mass, 1e-13);
}

TEST(Separable, ValueMatchesAxisProduct) {
  const auto b = cex::build_plane_family(256);
  const auto& f = b.f;
  const auto& phi = f.phi();
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-30.0, 30.0);
  for (int i = 0; i < 100; ++i) {
    const std::vector<double> y{u(rng), u(rng)};
    std::complex<double> sum = 0.0;
    for (double l : f.axis(0).freqs) sum += std::polar(1.0, 2.0 * kPi * l * y[0]);
    const double s0 = f.axis(0).scale, s1 = f.axis(1).scale;
    const auto ref = s0 * phi.direct(s0 * y[0]) * s1 * phi.direct(s1 * y[1]) * sum;
    EXPECT_LT(std::abs(f.value(y) - ref), 1e-10 * std::max(1.0, std::abs(ref)));
  }
}

TEST(Separable, FourierVanishesOffRectangles) {
  const auto b = cex::build_plane_family(256);
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(-40.0, 40.0);
  int outside = 0;
  for (int i = 0; i < 20000; ++i) {
    const std::vector<double> x{u(rng), u(rng)};
    bool inside = false;
    for (const auto& r : b.rectangles) {
      inside = inside || (x[0] >= r.x_lo && x[0] <= r.x_hi && std::abs(x[1]) <= r.half_widths[0]);
    }
    if (inside) continue;
    ++outside;
    EXPECT_EQ(b.f.fourier(x), 0.0);
  }
  EXPECT_GT(outside, 10000);
}

TEST(Separable, SortedLookupMatchesFullSum) {
  const auto b = cex::build_rectangle_family(64, 3);
  const auto& f = b.f;
  const auto& bump = f.phi().bump();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(7.5, 12.0);
  for (int i = 0; i < 2000; ++i) {
    const double x = u(rng);
    double ref = 0.0;
    for (double l : f.axis(0).freqs) ref += bump((x - l) / f.axis(0).scale);
    EXPECT_EQ(f.axis_fourier(0, x), ref);
  }
}

TEST(SeparableNorm, SingleAxisScaling) {
  const auto phi = counterexample_bump();
  const SeparableFunction f({SeparableAxis{0.3, {0.0}}, SeparableAxis{1.7, {0.0}}});
  // Independent of the table: integrate the direct transform.
  for (double p : {1.0, 1.5, 3.0}) {
    const double one = 2.0 * quad::integrate([&](double x) { return std::pow(std::abs(phi->direct(x)), p); }, 0.0,
                                             40.0, 160, 20);
    const double expect = std::pow(0.3 * 1.7, 1.0 - 1.0 / p) * std::pow(one, 2.0 / p);
    const auto r = norms::lp_norm_separable(f, p);
    EXPECT_LT(rel(r.value, expect), 1e-9) << p;
    EXPECT_GT(r.budget, 0.0);
  }
  const auto sup = norms::lp_norm_separable(f, kInf);
  EXPECT_NEAR(sup.value, 0.3 * 1.7 * phi->at_zero() * phi->at_zero(), 1e-14);
}

TEST(SeparableNorm, PlancherelOnPlaneFamily) {
  for (std::int64_t n : {256, 1024}) {
    const auto b = cex::build_plane_family(n);
    const auto& f = b.f;
    const double phi2 = f.phi().lp_pow(2.0);
    // Disjoint bump supports: ||f_hat||_2^2 = N s_0 int phi^2 * s_1 int phi^2.
    const double fhat2 = static_cast<double>(b.N) * f.axis(0).scale * phi2 * f.axis(1).scale * phi2;
    const auto r = norms::lp_norm_separable(f, 2.0);
    EXPECT_LT(rel(r.value * r.value, fhat2), 1e-6) << n;
  }
}

TEST(SeparableNorm, ModulationInvariance) {
  const auto f = small_d2();
  const std::vector<double> theta{0.37, -1.2};
  const auto g = f.modulated(theta);
  for (double p : {1.0, 1.5, 3.0, kInf}) {
    EXPECT_LT(rel(norms::lp_norm_separable(g, p).value, norms::lp_norm_separable(f, p).value), 1e-8) << p;
  }
}

TEST(SeparableNorm, DirectGridAgrees) {
  const auto f = small_d2();
  for (double p : {1.5, 2.0, 3.0}) {
    const auto a = norms::lp_norm_separable(f, p);
    const auto b = norms::lp_norm_direct_grid(f, p, 16.0);
    EXPECT_EQ(b.method, norms::Method::DirectGrid);
    EXPECT_LT(rel(b.value, a.value), 1e-5) << p;
  }
}

TEST(SeparableNorm, DilationCovariance) {
  const auto f = small_d2();
  const auto g = f.dilated(2.0);
  for (double p : {1.0, 1.5, 2.0, 4.0, kInf}) {
    const double pc = std::isinf(p) ? 1.0 : (p == 1.0 ? kInf : p / (p - 1.0));
    const double factor = std::isinf(pc) ? 1.0 : std::pow(2.0, 2.0 / pc);
    EXPECT_LT(rel(norms::lp_norm_separable(g, p).value, factor * norms::lp_norm_separable(f, p).value), 1e-8) << p;
  }
}

TEST(SeparableNorm, SupAtOriginForPositiveTransform) {
  const auto b = cex::build_plane_family(256);
  const std::vector<double> zero{0.0, 0.0};
  EXPECT_LT(rel(norms::lp_norm_separable(b.f, kInf).value, std::abs(b.f.value(zero))), 1e-9);
}

TEST(SeparableNorm, HolderLogConvexity) {
  const auto f = small_d2();
  const std::vector<double> ps{1.0, 1.5, 2.0, 3.0, kInf};
  std::vector<norms::NormResult> r;
  for (double p : ps) r.push_back(norms::lp_norm_separable(f, p));
  for (std::size_t i = 0; i + 2 < ps.size(); ++i) {
    const double a = 1.0 / ps[i], m = 1.0 / ps[i + 1], c = std::isinf(ps[i + 2]) ? 0.0 : 1.0 / ps[i + 2];
    const double theta = (m - c) / (a - c);
    const double bound = std::pow(r[i].value, theta) * std::pow(r[i + 2].value, 1.0 - theta);
    EXPECT_LE(r[i + 1].value, bound * (1.0 + 1e-9) + r[i + 1].budget) << ps[i + 1];
  }
}

TEST(SeparableNorm, HolderPanelBoundDominates) {
  const auto b = cex::build_plane_family(256);
  for (double p : {1.0, 1.5, 2.0}) {
    const auto r = norms::lp_norm_separable(b.f, p);
    ASSERT_FALSE(std::isnan(r.holder_bound)) << p;
    EXPECT_GE(r.holder_bound, r.value) << p;
  }
}

TEST(SeparableNorm, RejectsBadP) {
  const auto f = small_d2();
  EXPECT_THROW(norms::lp_norm_separable(f, 0.5), std::invalid_argument);
  EXPECT_THROW(norms::lp_norm_direct_grid(f, kInf), std::invalid_argument);
}

TEST(RadialNorm, GaussianClosedForm) {
  for (int d : {2, 3, 4}) {
    for (double w : {1.0, 0.6}) {
      const GaussianProfile g(d, w);
      for (double p : {1.0, 2.0, 3.0}) {
        // int exp(-pi p |x|^2 / w^2) dx = (w^2 / p)^(d/2).
        const double expect = std::pow(w * w / p, d / (2.0 * p));
        const auto r = norms::lp_norm_radial(g, p);
        EXPECT_EQ(r.method, norms::Method::Radial1D);
        EXPECT_LT(rel(r.value, expect), 1e-10) << d << " " << w << " " << p;
      }
      EXPECT_NEAR(norms::lp_norm_radial(g, kInf).value, 1.0, 1e-14);
    }
  }
}

TEST(RadialNorm, DilationScaling) {
  const GaussianProfile a(3, 1.0), b(3, 2.0);
  for (double p : {1.0, 1.5, 4.0}) {
    EXPECT_LT(rel(norms::lp_norm_radial(b, p).value, std::pow(2.0, 3.0 / p) * norms::lp_norm_radial(a, p).value),
              1e-10);
  }
}

TEST(RadialNorm, TestFunctionIgnoresShiftAndModulation) {
  auto g = std::make_shared<const GaussianProfile>(3, 1.0);
  const TestFunction f(g);
  const std::vector<double> tau{0.3, -0.2, 1.0}, theta{2.0, 0.0, -1.0};
  const auto h = f.translated(tau).modulated(theta).scaled({0.0, 2.0});
  EXPECT_LT(rel(norms::lp_norm(h, 1.5).value, 2.0 * norms::lp_norm(f, 1.5).value), 1e-14);
}
