#include "vper/counterexamples.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <stdexcept>

#include "vper/number_theory.hpp"
#include "vper/quadrature.hpp"

namespace vper::cex {

namespace {

using ld = long double;

std::string fmt(const char* pattern, double a) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a);
  return buf;
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

AnnulusRectangle bump_support(const SeparableFunction& f, double center, std::int64_t a2, std::int64_t ap2) {
  AnnulusRectangle r;
  r.d = f.dimension();
  const double h1 = f.half_support(0);
  r.x_lo = center - h1;
  r.x_hi = center + h1;
  for (int j = 1; j < r.d; ++j) r.half_widths.push_back(f.half_support(j));
  r.a2 = a2;
  r.ap2 = ap2;
  return r;
}

double bump_pow_integral(const Bump& b, double q) {
  return quad::integrate([&](double x) { return std::pow(b(x), q); }, b.lo(), b.hi(), 64, 20);
}

}  // namespace

double conjugate(double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("conjugate: p must be >= 1");
  if (p == 1.0) return norms::kInfinity;
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

bool AnnulusRectangle::contained() const {
  if (x_lo < 0) return false;
  ld outer = static_cast<ld>(x_hi) * x_hi;
  for (double h : half_widths) outer += static_cast<ld>(h) * h;
  return static_cast<ld>(x_lo) * x_lo >= static_cast<ld>(a2) && outer <= static_cast<ld>(ap2);
}

bool AnnulusRectangle::strictly_contained() const {
  if (x_lo < 0) return false;
  ld outer = static_cast<ld>(x_hi) * x_hi;
  for (double h : half_widths) outer += static_cast<ld>(h) * h;
  return static_cast<ld>(x_lo) * x_lo > static_cast<ld>(a2) && outer < static_cast<ld>(ap2);
}

PlaneFamilyBuild build_plane_family(std::int64_t n, double c_delta) {
  if (n < 16) throw std::invalid_argument("build_plane_family: n must be >= 16");
  if (!(c_delta > 0.0 && c_delta <= 1.0)) throw std::invalid_argument("build_plane_family: C_delta must lie in (0, 1]");
  const double rn = std::sqrt(static_cast<double>(n));
  const auto dens = nt::density_eps(n);
  const double delta = c_delta / (rn * dens.eps);
  // One radius past 2 sqrt(n) closes the last annulus.
  const auto R = nt::radii(2, 2.0 * rn + 2.0);
  const std::int64_t lo2 = n, hi2 = 4 * n;

  std::vector<double> lambdas;
  std::vector<std::pair<std::int64_t, std::int64_t>> shells;
  PlaneFamilyBuild out{SeparableFunction({SeparableAxis{}})};
  out.n = n;
  out.c_delta = c_delta;
  out.eps_n = dens.eps;
  out.delta = delta;
  const double h = kPlaneHalfWidth;
  for (std::size_t i = 0; i + 1 < R.size(); ++i) {
    const std::int64_t a2 = R.squared[i];
    if (a2 < lo2 || a2 > hi2) continue;
    ++out.radii_in_range;
    const double gap = R.gap(i);
    if (gap < delta) continue;
    ++out.m_count;
    out.sum_delta_M += gap;
    const std::int64_t ap2 = R.squared[i + 1];
    const double a = std::sqrt(static_cast<double>(a2));
    // Widest rectangle of half-height h: [a, sqrt(a'^2 - h^2)].
    const double width = (static_cast<double>(ap2 - a2) - h * h) / (std::sqrt(static_cast<double>(ap2) - h * h) + a);
    const auto J = static_cast<std::size_t>(std::floor(width / delta));
    for (std::size_t k = 0; k < J; ++k) {
      lambdas.push_back(a + (static_cast<double>(k) + 0.5) * delta);
      shells.emplace_back(a2, ap2);
    }
  }
  if (out.m_count == 0) {
    throw std::domain_error("build_plane_family: no annulus of width >= delta = " + std::to_string(delta) +
                            " (n too small or C_delta too large)");
  }
  if (lambdas.empty()) {
    throw std::domain_error("build_plane_family: no annulus holds a full delta-wide rectangle of half-height 1/2");
  }
  out.N = lambdas.size();
  out.f = SeparableFunction({SeparableAxis{kBumpFill * delta, lambdas}, SeparableAxis{kBumpFill * 2.0 * h, {0.0}}});
  out.min_separation = out.f.min_separation(0);
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    out.rectangles.push_back(bump_support(out.f, lambdas[k], shells[k].first, shells[k].second));
    if (!out.rectangles.back().strictly_contained()) {
      throw std::logic_error("build_plane_family: rectangle " + std::to_string(k) + " leaves its annulus");
    }
  }
  out.log.push_back(fmt("eps_n = %.6f (exact count)", dens.eps));
  out.log.push_back(fmt("delta = %.6g", delta));
  out.log.push_back("radii in [sqrt n, 2 sqrt n]: " + std::to_string(out.radii_in_range) +
                    ", annuli with gap >= delta: " + std::to_string(out.m_count));
  out.log.push_back("rectangles: " + std::to_string(out.N) + ", all strictly inside their annuli");
  return out;
}

RectangleFamilyBuild build_rectangle_family(std::int64_t n, int d) {
  if (n < 4) throw std::invalid_argument("build_rectangle_family: n must be >= 4");
  if (d < 2) throw std::invalid_argument("build_rectangle_family: d must be >= 2");
  RectangleFamilyBuild out{SeparableFunction({SeparableAxis{}})};
  out.n = n;
  out.d = d;
  // (d - 1) h^2 = 1/2, so the width fits when (x + w)^2 <= m + 1/2; tightest at m = 2n - 1.
  const double h = std::sqrt(0.5 / (d - 1));
  const double m_top = static_cast<double>(2 * n - 1);
  const double w = 0.5 / (std::sqrt(m_top + 0.5) + std::sqrt(m_top));
  out.width = w;
  out.half_width = h;
  if (!(w > 0) || !(h > 0)) throw std::domain_error("build_rectangle_family: infeasible cross-section");
  std::vector<double> lambdas;
  for (std::int64_t k = 0; k < n; ++k) lambdas.push_back(std::sqrt(static_cast<double>(n + k)) + 0.5 * w);
  std::vector<SeparableAxis> axes{SeparableAxis{kBumpFill * w, lambdas}};
  for (int j = 1; j < d; ++j) axes.push_back(SeparableAxis{kBumpFill * 2.0 * h, {0.0}});
  out.f = SeparableFunction(std::move(axes));
  for (std::int64_t k = 0; k < n; ++k) {
    out.rectangles.push_back(bump_support(out.f, lambdas[static_cast<std::size_t>(k)], n + k, n + k + 1));
    if (!out.rectangles.back().strictly_contained()) {
      throw std::logic_error("build_rectangle_family: rectangle " + std::to_string(k) + " leaves its annulus");
    }
  }
  out.log.push_back(fmt("axis-1 width %.6g", w));
  out.log.push_back(fmt("transverse half-width %.6g", h));
  out.log.push_back("rectangles: " + std::to_string(n) + ", all strictly inside their annuli");
  return out;
}

SmallBallBuild build_small_ball(std::span<const double> x0, double eps) {
  const int d = static_cast<int>(x0.size());
  if (d < 2) throw std::invalid_argument("build_small_ball: d must be >= 2");
  if (!(eps > 0)) throw std::invalid_argument("build_small_ball: eps must be positive");
  ld r2 = 0;
  for (double x : x0) r2 += static_cast<ld>(x) * x;
  const double r = std::sqrt(static_cast<double>(r2));
  const auto R = nt::radii(d, r + 2.0);
  const std::size_t i = R.lower_index(r);
  if (i < R.size() && static_cast<ld>(R.squared[i]) == r2) {
    throw std::domain_error("build_small_ball: center lies on a lattice-radius sphere");
  }
  if (i == 0 || i >= R.size()) throw std::domain_error("build_small_ball: no enclosing annulus found");
  const std::int64_t a2 = R.squared[i - 1], ap2 = R.squared[i];
  const double gap = R.gap(i - 1);
  if (eps > 0.25 * gap) throw std::domain_error("build_small_ball: eps exceeds a quarter of the annulus width");
  const ld inner = static_cast<ld>(r) - eps, outer = static_cast<ld>(r) + eps;
  if (!(inner > 0 && inner * inner > static_cast<ld>(a2) && outer * outer < static_cast<ld>(ap2))) {
    throw std::domain_error("build_small_ball: ball meets a lattice-radius sphere");
  }
  // Cube of half-side eps / sqrt(d) sits inside the ball.
  const double s = 2.0 * eps / std::sqrt(static_cast<double>(d));
  std::vector<SeparableAxis> axes;
  for (double x : x0) axes.push_back(SeparableAxis{s, {x}});
  SmallBallBuild out{SeparableFunction(std::move(axes)), {x0.begin(), x0.end()}, eps, a2, ap2};
  return out;
}

double lattice_sphere_sample(const SeparableFunction& f, double r_max, int points, std::uint64_t seed) {
  const int d = f.dimension();
  const auto R = nt::radii(d, r_max);
  const auto n_sph = static_cast<std::ptrdiff_t>(R.size());
  double worst = 0.0;
#pragma omp parallel for schedule(dynamic, 16) reduction(max : worst)
  for (std::ptrdiff_t i = 0; i < n_sph; ++i) {
    const double a = R.radius(static_cast<std::size_t>(i));
    std::vector<double> x(static_cast<std::size_t>(d));
    if (a == 0.0) {
      worst = std::max(worst, std::abs(f.fourier(x)));
      continue;
    }
    std::mt19937_64 rng(splitmix(seed ^ splitmix(static_cast<std::uint64_t>(i))));
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unit(-0.5, 0.5);
    for (int k = 0; k < points; ++k) {
      // Even k: uniform on the sphere. Odd k: a random support point pushed onto the sphere.
      double norm2 = 0.0;
      for (int j = 0; j < d; ++j) {
        const auto& ax = f.axis(j);
        double v;
        if (k % 2 == 0) {
          v = gauss(rng);
        } else {
          const auto pick = static_cast<std::size_t>(rng() % ax.freqs.size());
          v = ax.freqs[pick] + 2.0 * f.half_support(j) * unit(rng);
        }
        x[static_cast<std::size_t>(j)] = v;
        norm2 += v * v;
      }
      if (norm2 == 0.0) continue;
      const double scale = a / std::sqrt(norm2);
      for (auto& v : x) v *= scale;
      worst = std::max(worst, std::abs(f.fourier(x)));
    }
  }
  return worst;
}

CounterexampleReport norms_report(const SeparableFunction& f, double p, double r, const std::string& family) {
  if (!(p >= 1.0 && r >= 1.0)) throw std::invalid_argument("norms_report: need p, r >= 1");
  CounterexampleReport rep;
  rep.family = family;
  rep.params["p"] = p;
  rep.params["r"] = r;
  rep.params["d"] = f.dimension();
  rep.params["N"] = static_cast<double>(f.axis(0).freqs.size());
  const auto add = [&](const norms::NormResult& n, const std::string& method) {
    rep.norms.push_back({n.p, n.value, method, n.budget});
    if (n.budget_exceeded) {
      rep.partial = true;
      rep.log.push_back(fmt("budget exceeded at p = %g", n.p));
    }
  };
  const auto np = norms::lp_norm_separable(f, p);
  add(np, norms::to_string(np.method));
  if (r != p) {
    const auto nr = norms::lp_norm_separable(f, r);
    add(nr, norms::to_string(nr.method));
  }
  const double q = conjugate(p);
  if (std::isinf(q)) {
    const std::vector<double> zero(static_cast<std::size_t>(f.dimension()), 0.0);
    rep.norms.push_back({q, std::abs(f.value(zero)), "witness-origin", 0.0});
  } else {
    // Window where every term of the sum has phase below 1/50.
    double top = 0.0;
    for (double l : f.axis(0).freqs) top = std::max(top, std::abs(l));
    norms::SeparableOptions opt;
    opt.window = 1.0 / (100.0 * quad::kPi * top);
    const auto w = norms::lp_norm_separable(f, q, opt);
    add(w, "witness-window");
  }
  return rep;
}

PGt2Result build_p_gt_2(std::int64_t n, int d, double p, double r) {
  if (!(p > 2.0)) throw std::invalid_argument("build_p_gt_2: p must exceed 2");
  if (!(r >= p)) throw std::invalid_argument("build_p_gt_2: need r >= p");
  const auto b = build_rectangle_family(n, d);
  const auto& f = b.f;
  const double q = conjugate(p);
  const Bump& phi = f.phi().bump();
  PGt2Result out;

  // Disjoint supports: ||f_hat||_q^q = n s_1 I_q (s_t I_q)^(d-1), I_q = int phi^q.
  const double Iq = bump_pow_integral(phi, q);
  double prod = static_cast<double>(n) * f.axis(0).scale * Iq;
  for (int j = 1; j < d; ++j) prod *= f.axis(j).scale * Iq;
  out.fhat_pnorm_exact = std::pow(prod, 1.0 / q);

  // Frequency side, summing every bump at each node; panels break at support edges.
  std::vector<double> breaks;
  for (double l : f.axis(0).freqs) {
    breaks.push_back(l - f.half_support(0));
    breaks.push_back(l + f.half_support(0));
  }
  std::sort(breaks.begin(), breaks.end());
  double axis1 = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    axis1 += quad::integrate([&](double x) { return std::pow(std::abs(f.axis_fourier(0, x)), q); }, breaks[i],
                             breaks[i + 1], 4, 20);
  }
  double direct = axis1;
  for (int j = 1; j < d; ++j) {
    const double hs = f.half_support(j);
    direct *= quad::integrate([&](double x) { return std::pow(std::abs(f.axis_fourier(j, x)), q); }, -hs, hs, 64, 20);
  }
  out.fhat_pnorm_direct = std::pow(direct, 1.0 / q);

  const auto nr = norms::lp_norm_separable(f, r);
  out.r_norm = nr.value;
  out.ratio = nr.value / out.fhat_pnorm_exact;

  auto& rep = out.report;
  rep.family = "p_gt_2";
  rep.params = {{"n", static_cast<double>(n)}, {"d", d}, {"p", p}, {"r", r}, {"N", static_cast<double>(n)}};
  rep.norms.push_back({r, nr.value, norms::to_string(nr.method), nr.budget});
  rep.norms.push_back({q, out.fhat_pnorm_exact, "fourier-side-exact", 0.0});
  rep.norms.push_back({q, out.fhat_pnorm_direct, "fourier-side-quadrature",
                       std::abs(out.fhat_pnorm_direct - out.fhat_pnorm_exact)});
  rep.partial = nr.budget_exceeded;
  const double rn = std::sqrt(static_cast<double>(n));
  const double e = 1.0 / p - 1.0 / r;
  rep.predicted.push_back({"||f||_r / ||f_hat||_p' >= c (sqrt n)^(1/p - 1/r)", e, out.ratio / std::pow(rn, e)});
  rep.predicted.push_back({"||f_hat||_p' <= C (sqrt n)^(1/p')", 1.0 / q, out.fhat_pnorm_exact / std::pow(rn, 1.0 / q)});
  std::ostringstream v;
  v << "||f||_p <= ||f_hat||_p' = " << out.fhat_pnorm_exact << ", ||f||_r = " << nr.value << ", ratio " << out.ratio;
  rep.verdict = v.str();
  rep.log = b.log;
  return out;
}

CounterexampleReport report_plane_family(const PlaneFamilyBuild& b, double p, double r) {
  auto rep = norms_report(b.f, p, r, "plane");
  const double rn = std::sqrt(static_cast<double>(b.n));
  rep.params["n"] = static_cast<double>(b.n);
  rep.params["delta"] = b.delta;
  rep.params["eps_n"] = b.eps_n;
  rep.params["C_delta"] = b.c_delta;
  const double up = std::pow(rn, 1.0 / p) * std::pow(b.eps_n, (2.0 - p) / (2.0 * p));
  rep.predicted.push_back({"||f||_p <= C (sqrt n)^(1/p) eps_n^((2-p)/(2p))", 1.0 / (2.0 * p), rep.norms[0].value / up});
  const auto& w = rep.norms.back();
  if (std::isinf(w.p)) {
    rep.predicted.push_back({"|f(0)| >= c sqrt n", 0.5, w.value / rn});
  } else {
    rep.predicted.push_back({"||f||_p' >= c (sqrt n)^(1/p)", 1.0 / (2.0 * p), w.value / std::pow(rn, 1.0 / p)});
  }
  std::ostringstream v;
  v << "witness / ||f||_p = " << w.value / rep.norms[0].value << " (predicted growth eps_n^-" << (2.0 - p) / (2.0 * p)
    << ")";
  rep.verdict = v.str();
  rep.log.insert(rep.log.begin(), b.log.begin(), b.log.end());
  return rep;
}

CounterexampleReport report_rectangle_family(const RectangleFamilyBuild& b, double p, double r) {
  auto rep = norms_report(b.f, p, r, "rectangle");
  const double rn = std::sqrt(static_cast<double>(b.n));
  rep.params["n"] = static_cast<double>(b.n);
  rep.params["width"] = b.width;
  const double rc = conjugate(r);
  const double np = rep.norms[0].value, nr = rep.norms.size() > 2 ? rep.norms[1].value : np;
  rep.predicted.push_back({"||f||_p <= C (sqrt n)^(1/p)", 0.5 / p, np / std::pow(rn, 1.0 / p)});
  rep.predicted.push_back({"||f||_r >= c (sqrt n)^(1/r')", 0.5 / rc, nr / std::pow(rn, 1.0 / rc)});
  const double e = 1.0 / conjugate(p) - 1.0 / r;
  rep.predicted.push_back({"||f||_r / ||f||_p ~ (sqrt n)^(1/p' - 1/r)", e, nr / np / std::pow(rn, e)});
  std::ostringstream v;
  v << "||f||_r / ||f||_p = " << nr / np << (r > conjugate(p) ? " (r > p': unbounded in n)" : " (r <= p')");
  rep.verdict = v.str();
  rep.log.insert(rep.log.begin(), b.log.begin(), b.log.end());
  return rep;
}

CounterexampleReport report_small_ball(const SmallBallBuild& b, double p, double r) {
  auto rep = norms_report(b.f, p, r, "small_ball");
  const int d = b.f.dimension();
  rep.params["eps"] = b.eps;
  const double np = rep.norms[0].value, nr = rep.norms.size() > 2 ? rep.norms[1].value : np;
  const double e = d / conjugate(r) - d / conjugate(p);
  rep.predicted.push_back({"||f||_r / ||f||_p ~ eps^(d/r' - d/p')", e, nr / np / std::pow(b.eps, e)});
  std::ostringstream v;
  v << "||f||_r / ||f||_p = " << nr / np;
  rep.verdict = v.str();
  return rep;
}

double fit_exponent(std::span<const double> x, std::span<const double> y) { return quad::fit_loglog(x, y).slope; }

}  // namespace vper::cex
