#include "vper/norms.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "vper/exp_sum.hpp"
#include "vper/number_theory.hpp"
#include "vper/quadrature.hpp"
#include "vper/sphere_measure.hpp"

namespace vper::norms {

namespace {

using cplx = std::complex<double>;
using quad::kTwoPi;

constexpr double kMaxAxisPoints = 4e8;
constexpr double kMaxGridPoints = 5e7;
constexpr double kGolden = 0.6180339887498949;

void check_p(double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("norm: p must be >= 1");
}

struct AxisGrid {
  double lambda_c = 0.0;
  std::vector<double> mu;  // centered frequencies
  expsum::Grid grid;
  double s = 1.0;
};

bool even_integer(double p) { return p == 2.0 * std::round(0.5 * p); }

bool oscillatory(const SeparableAxis& a) {
  const auto [mn, mx] = std::minmax_element(a.freqs.begin(), a.freqs.end());
  return *mx > *mn;
}

// Grid on |y| <= min(window, x_max / s) resolving |F_j|^2 `oversample` times per period.
AxisGrid make_grid(const SeparableFunction& f, int j, double oversample, double window) {
  const auto& a = f.axis(j);
  AxisGrid g;
  g.s = a.scale;
  const auto [mn, mx] = std::minmax_element(a.freqs.begin(), a.freqs.end());
  g.lambda_c = 0.5 * (*mn + *mx);
  g.mu.reserve(a.freqs.size());
  for (double l : a.freqs) g.mu.push_back(l - g.lambda_c);
  const double band = (*mx - *mn) + 2.0 * f.half_support(j);
  const double h = 1.0 / (oversample * band);
  const double Y = std::min(window, f.phi().x_max() / g.s);
  const double half = 2.0 * std::ceil(0.5 * Y / h);  // even, so the 4h rule lands on both ends
  if (2 * half + 1 > kMaxAxisPoints) throw ResourceLimitError("norm: oscillatory axis needs too many grid points");
  // End points land on +-Y.
  g.grid = {-Y, Y / half, static_cast<std::size_t>(2 * half + 1)};
  return g;
}

double golden_max(const std::function<double(double)>& F, double a, double b) {
  double c = b - kGolden * (b - a), d = a + kGolden * (b - a);
  double fc = F(c), fd = F(d);
  for (int it = 0; it < 80 && b - a > 1e-13 * std::max(1.0, std::abs(a)); ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kGolden * (b - a);
      fc = F(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kGolden * (b - a);
      fd = F(d);
    }
  }
  return std::max(fc, fd);
}


// 6-point Lagrange read of complex grid values at fractional index t.
cplx lagrange(const std::vector<cplx>& vals, double t) {
  const auto i = static_cast<std::ptrdiff_t>(std::floor(t));
  const double u = t - static_cast<double>(i);
  cplx out = 0.0;
  for (int a = -2; a <= 3; ++a) {
    double l = 1.0;
    for (int b = -2; b <= 3; ++b) {
      if (b != a) l *= (u - b) / static_cast<double>(a - b);
    }
    out += l * vals[static_cast<std::size_t>(i + a)];
  }
  return out;
}

struct CellSum {
  double hi = 0.0;  // order 10 per piece
  double lo = 0.0;  // order 6 per piece
};

// int amp(y) |E(y)|^p over the grid span, E read by interpolation. Cells holding a sharp dip
// of |E| are split at the refined minimum, where |E|^p has a near-kink.
template <class Amp>
CellSum cell_integral(const std::vector<cplx>& vals, const expsum::Grid& grid, Amp&& amp, double p) {
  const std::size_t n = vals.size();
  const auto q = [&](std::size_t i) { return std::norm(vals[i]); };
  const auto& r10 = quad::gauss_legendre(10);
  const auto& r6 = quad::gauss_legendre(6);
  const auto piece = [&](double t0, double t1, CellSum& acc) {
    const double m = 0.5 * (t0 + t1), r = 0.5 * (t1 - t0);
    const auto F = [&](double t) { return amp(grid.u0 + t * grid.h) * std::pow(std::abs(lagrange(vals, t)), p); };
    double a = 0.0, b = 0.0;
    for (int l = 0; l < r10.size(); ++l) a += r10.weights[l] * F(m + r * r10.nodes[l]);
    for (int l = 0; l < r6.size(); ++l) b += r6.weights[l] * F(m + r * r6.nodes[l]);
    acc.hi += r * a;
    acc.lo += r * b;
  };
  const auto dip = [&](std::size_t i) {
    if (i < 3 || i + 4 > n) return -1.0;
    if (!(q(i) <= q(i - 1) && q(i) <= q(i + 1) && q(i) < 0.5 * std::min(q(i - 2), q(i + 2)))) return -1.0;
    const auto Q = [&](double t) { return -std::norm(lagrange(vals, t)); };
    double lo = static_cast<double>(i) - 1.0, hi = static_cast<double>(i) + 1.0;
    double c = hi - kGolden * (hi - lo), d = lo + kGolden * (hi - lo);
    double fc = Q(c), fd = Q(d);
    for (int it = 0; it < 40; ++it) {
      if (fc > fd) {
        hi = d, d = c, fd = fc, c = hi - kGolden * (hi - lo), fc = Q(c);
      } else {
        lo = c, c = d, fc = fd, d = lo + kGolden * (hi - lo), fd = Q(d);
      }
    }
    return 0.5 * (lo + hi);
  };
  // The stencil needs two cells of margin; the end cells carry only bump tail.
  CellSum total;
  const std::ptrdiff_t first = 2, last = static_cast<std::ptrdiff_t>(n) - 4;
#pragma omp parallel
  {
    CellSum acc;
    std::vector<double> cuts;
#pragma omp for schedule(static)
    for (std::ptrdiff_t c = first; c <= last; ++c) {
      // Cell [c, c + 1]; a dip at c or c + 1 may have its minimum inside.
      cuts.assign(1, static_cast<double>(c));
      for (std::ptrdiff_t i : {c, c + 1}) {
        const double t = dip(static_cast<std::size_t>(i));
        if (t > cuts.back() && t < static_cast<double>(c + 1)) cuts.push_back(t);
      }
      cuts.push_back(static_cast<double>(c + 1));
      for (std::size_t k = 0; k + 1 < cuts.size(); ++k) piece(cuts[k], cuts[k + 1], acc);
    }
#pragma omp critical
    {
      total.hi += acc.hi;
      total.lo += acc.lo;
    }
  }
  total.hi *= grid.h;
  total.lo *= grid.h;
  return total;
}
}  // namespace

const char* to_string(Method m) {
  switch (m) {
    case Method::SeparableProduct: return "separable-product";
    case Method::Radial1D: return "radial-1d";
    case Method::DirectGrid: return "direct-grid";
  }
  return "?";
}

AxisIntegral axis_lp_pow(const SeparableFunction& f, int j, double p, const SeparableOptions& opt) {
  check_p(p);
  if (std::isinf(p)) throw std::invalid_argument("axis_lp_pow: finite p only");
  const auto& a = f.axis(j);
  const double s = a.scale;
  const double window = j == 0 ? opt.window : kInfinity;
  const auto& phi = f.phi();
  const double N = static_cast<double>(a.freqs.size());
  AxisIntegral out;

  if (!oscillatory(a)) {
    // |F| = N s |phi_check(s y)|.
    const double U = std::min(phi.x_max(), s * window);
    const double base = U >= phi.x_max()
                            ? phi.lp_pow(p)
                            : 2.0 * quad::integrate_abs_pow([&](double u) { return phi(u); },
                                                            [](double) { return 1.0; }, 0.0, U, p, 0.5);
    const double k = std::pow(N, p) * std::pow(s, p - 1.0);
    out.value = k * base;
    out.budget = k * (1e-14 * base + (U >= phi.x_max() ? phi.tail_mass(p) : 0.0));
    return out;
  }

  const auto g = make_grid(f, j, even_integer(p) ? std::min(opt.oversample, 4.0) : opt.oversample, window);
  const auto vals = expsum::evaluate(g.mu, {}, g.grid);
  const std::size_t n = vals.size();
  std::vector<double> amp(n);
  quad::CompensatedReal fine, coarse;
  std::vector<double> v(n);  // integrand on the grid
  for (std::size_t i = 0; i < n; ++i) {
    const double y = g.grid.u0 + static_cast<double>(i) * g.grid.h;
    amp[i] = std::pow(std::abs(s * phi(s * y)), p);
    v[i] = amp[i] * std::pow(std::abs(vals[i]), p);
    const double end = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
    fine.add(end * v[i]);
    if (i % 2 == 0) coarse.add(end * v[i]);
  }
  const double Th = g.grid.h * fine.value(), T2h = 2.0 * g.grid.h * coarse.value();
  out.points = n;
  if (even_integer(p)) {
    // |F|^p is band-limited: the trapezoid rule is exact up to aliasing.
    out.value = Th;
    out.budget = std::abs(Th - T2h);
  } else {
    const auto I = cell_integral(vals, g.grid, [&](double y) { return std::pow(std::abs(s * phi(s * y)), p); }, p);
    // Six-point interpolation of a sum with |mu| <= w: relative error about (w h)^6 / 720.
    double w = 0.0;
    for (double m : g.mu) w = std::max(w, kTwoPi * std::abs(m));
    out.value = I.hi;
    out.budget = std::abs(I.hi - I.lo) + p * std::pow(w * g.grid.h, 6) / 720.0 * I.hi;
  }
  if (std::isinf(window) || s * window >= phi.x_max()) {
    out.budget += std::pow(N, p) * std::pow(s, p - 1.0) * phi.tail_mass(p);
  }

  // Panels of length 2 / separation: exact L2 mass per panel, Hoelder for p <= 2.
  const double sep = f.min_separation(j);
  const double Y = -g.grid.u0;
  const double P = 2.0 / sep;
  const double panels = std::ceil(2.0 * Y / P);
  if (p <= 2.0 && 0.5 * N * N * panels <= opt.holder_pair_limit) {
    std::vector<double> ang(g.mu.size());
    for (std::size_t k = 0; k < ang.size(); ++k) ang[k] = kTwoPi * g.mu[k];
    double bound = 0.0;
    for (double lo = -Y; lo < Y; lo += P) {
      const double hi = std::min(lo + P, Y);
      const auto i0 = static_cast<std::size_t>(std::max(0.0, std::floor((lo - g.grid.u0) / g.grid.h)));
      const auto i1 = std::min(n - 1, static_cast<std::size_t>(std::ceil((hi - g.grid.u0) / g.grid.h)));
      double sup = 0.0;
      for (std::size_t i = i0; i <= i1; ++i) sup = std::max(sup, amp[i]);
      const double L2 = expsum::l2_moment(ang, lo, hi);
      bound += sup * std::pow(hi - lo, 1.0 - 0.5 * p) * std::pow(L2, 0.5 * p);
    }
    out.holder_bound = bound;
  }
  return out;
}

double axis_sup(const SeparableFunction& f, int j, double window) {
  const auto& a = f.axis(j);
  const double s = a.scale;
  const double N = static_cast<double>(a.freqs.size());
  if (!oscillatory(a)) return N * s * std::abs(f.phi().at_zero());
  const auto g = make_grid(f, j, 8.0, window);
  const auto vals = expsum::evaluate(g.mu, {}, g.grid);
  std::vector<double> m(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) {
    const double y = g.grid.u0 + static_cast<double>(i) * g.grid.h;
    m[i] = std::abs(s * f.phi()(s * y)) * std::abs(vals[i]);
  }
  std::vector<std::size_t> peaks;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const bool left = i == 0 || m[i] >= m[i - 1];
    const bool right = i + 1 == m.size() || m[i] >= m[i + 1];
    if (left && right) peaks.push_back(i);
  }
  std::sort(peaks.begin(), peaks.end(), [&](auto x, auto y) { return m[x] > m[y]; });
  if (peaks.size() > 8) peaks.resize(8);
  double best = 0.0;
  const std::function<double(double)> F = [&](double y) { return std::abs(f.axis_value(j, y)); };
  for (auto i : peaks) {
    const double y = g.grid.u0 + static_cast<double>(i) * g.grid.h;
    best = std::max({best, m[i], golden_max(F, y - g.grid.h, y + g.grid.h)});
  }
  return best;
}

NormResult lp_norm_separable(const SeparableFunction& f, double p, const SeparableOptions& opt) {
  check_p(p);
  NormResult r;
  r.p = p;
  r.method = Method::SeparableProduct;
  if (std::isinf(p)) {
    double v = 1.0;
    for (int j = 0; j < f.dimension(); ++j) v *= axis_sup(f, j, j == 0 ? opt.window : kInfinity);
    r.value = v;
    r.budget = 1e-9 * v;
    return r;
  }
  double prod = 1.0, rel = 0.0, holder = 1.0;
  bool any_holder = false;
  for (int j = 0; j < f.dimension(); ++j) {
    const auto I = axis_lp_pow(f, j, p, opt);
    prod *= I.value;
    rel += I.value > 0 ? I.budget / I.value : 0.0;
    r.points += I.points;
    if (!std::isnan(I.holder_bound)) {
      holder *= I.holder_bound;
      any_holder = true;
    } else {
      holder *= I.value;
    }
  }
  r.value = std::pow(prod, 1.0 / p);
  r.budget = r.value * rel / p;
  if (any_holder) r.holder_bound = std::pow(holder, 1.0 / p);
  r.budget_exceeded = r.budget > opt.rel_budget * r.value;
  return r;
}

NormResult lp_norm_direct_grid(const SeparableFunction& f, double p, double oversample) {
  check_p(p);
  if (std::isinf(p)) throw std::invalid_argument("lp_norm_direct_grid: finite p only");
  if (f.dimension() > 2) throw std::invalid_argument("lp_norm_direct_grid: d <= 2");
  std::vector<std::vector<cplx>> axis_vals;
  std::vector<expsum::Grid> grids;
  double total = 1.0;
  for (int j = 0; j < f.dimension(); ++j) {
    const auto g = make_grid(f, j, oversample, kInfinity);
    total *= static_cast<double>(g.grid.count);
    std::vector<cplx> v(g.grid.count);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f.axis_value(j, g.grid.u0 + static_cast<double>(i) * g.grid.h);
    axis_vals.push_back(std::move(v));
    grids.push_back(g.grid);
  }
  if (total > kMaxGridPoints) throw ResourceLimitError("lp_norm_direct_grid: grid too large");
  const auto& A = axis_vals[0];
  const std::vector<cplx> one{cplx(1.0, 0.0)};
  const auto& B = f.dimension() == 2 ? axis_vals[1] : one;
  quad::CompensatedReal fine, coarse;
  for (std::size_t i = 0; i < A.size(); ++i) {
    const double wi = (i == 0 || i + 1 == A.size()) ? 0.5 : 1.0;
    for (std::size_t k = 0; k < B.size(); ++k) {
      const double wk = (B.size() > 1 && (k == 0 || k + 1 == B.size())) ? 0.5 : 1.0;
      const double v = wi * wk * std::pow(std::abs(A[i] * B[k]), p);
      fine.add(v);
      if (i % 2 == 0 && (B.size() == 1 || k % 2 == 0)) coarse.add(v);
    }
  }
  double cell = grids[0].h, cell2 = 2 * grids[0].h;
  if (f.dimension() == 2) {
    cell *= grids[1].h;
    cell2 *= 2 * grids[1].h;
  }
  NormResult r;
  r.p = p;
  r.method = Method::DirectGrid;
  const double I = cell * fine.value(), I2 = cell2 * coarse.value();
  r.value = std::pow(I, 1.0 / p);
  r.budget = r.value * std::abs(I - I2) / (p * I);
  r.points = static_cast<std::size_t>(total);
  return r;
}

NormResult lp_norm_radial(const RadialProfile& profile, double p) {
  check_p(p);
  const int d = profile.dimension();
  NormResult r;
  r.p = p;
  r.method = Method::Radial1D;
  const double R = profile.envelope_radius();
  double band = 4.0;
  for (const auto& iv : profile.frequency_support()) band = std::max(band, iv.hi);
  const double step = std::min(0.1, 1.0 / (8.0 * band));
  auto P = [&profile](double x) { return profile.value(x); };

  if (std::isinf(p)) {
    double best = 0.0, arg = 0.0;
    for (double x = 0.0; x <= R; x += step) {
      const double v = std::abs(P(x));
      if (v > best) {
        best = v;
        arg = x;
      }
    }
    const double lo = std::max(0.0, arg - step), hi = std::min(R, arg + step);
    best = std::max(best, golden_max([&](double x) { return std::abs(P(x)); }, lo, hi));
    r.value = best;
    r.budget = profile.value_error() + std::max(0.0, profile.majorant(R) - best);
    return r;
  }

  const auto env = profile.envelope();
  if (!(env.s * p > d)) throw std::domain_error("lp_norm_radial: envelope decay too slow for this p");
  const double area = unit_sphere_area(d);
  auto w = [d](double x) { return std::pow(x, d - 1); };
  const double I = area * quad::integrate_abs_pow(P, w, 0.0, R, p, step);
  const double I2 = area * quad::integrate_abs_pow(P, w, 0.0, R, p, 2 * step, 12);
  // Log space: A^p alone can overflow.
  const double tail = area * std::exp(p * std::log(env.A) + (d - env.s * p) * std::log1p(R)) / (env.s * p - d);
  r.value = std::pow(I, 1.0 / p);
  r.budget = r.value * (std::abs(I - I2) + tail) / (p * I);
  return r;
}

NormResult lp_norm(const TestFunction& f, double p) {
  auto r = lp_norm_radial(f.profile(), p);
  const double c = std::abs(f.coefficient());
  r.value *= c;
  r.budget *= c;
  return r;
}

}  // namespace vper::norms
