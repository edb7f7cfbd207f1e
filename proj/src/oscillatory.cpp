#include "vper/oscillatory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "vper/number_theory.hpp"
#include "vper/quadrature.hpp"
#include "vper/sphere_measure.hpp"

namespace vper::osc {

namespace {

using quad::kPi;
using quad::kTwoPi;

constexpr int kPanelOrder = 20;
constexpr double kPanelPhase = 8.0;
constexpr int kMaxSphereOrder = 256;

double area_any(int k) {  // |S^{k-1}| in R^k, k >= 1
  return 2.0 * std::pow(kPi, 0.5 * k) / std::tgamma(0.5 * k);
}

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

cplx expi(double turns) {  // e^{2 pi i turns}
  const double f = turns - std::nearbyint(turns);
  return {std::cos(kTwoPi * f), std::sin(kTwoPi * f)};
}

// lambda (t - c)^2 modulo 1, carried in double-double so large chirps keep their phase.
double chirp_turns(double lambda, double t, double c) {
  const double u = t - c;
  const double bb = u - t;
  const double e = (t - (u - bb)) + (-c - bb);  // t - c = u + e exactly
  const double p = u * u;
  const double p_err = std::fma(u, u, -p) + 2.0 * u * e;
  const double s = lambda * p;
  const double s_err = std::fma(lambda, p, -s) + lambda * p_err;
  return (s - std::nearbyint(s)) + s_err;
}

// Householder reflection taking e_1 to axis; identity if axis is e_1 or empty.
std::vector<double> frame_vector(int d, std::span<const double> axis) {
  std::vector<double> v(static_cast<std::size_t>(d), 0.0);
  if (axis.empty()) return v;
  const double n = norm(axis);
  if (n == 0.0) return v;
  for (int i = 0; i < d; ++i) v[i] = -axis[i] / n;
  v[0] += 1.0;
  const double vn = norm(v);
  if (vn < 1e-14) return std::vector<double>(static_cast<std::size_t>(d), 0.0);
  for (auto& x : v) x /= vn;
  return v;
}

// Recursive product rule over the polar angles of S^{k-1}.
void sphere_points(int k, int order, double weight, std::vector<double>& partial, int depth,
                   const std::function<void(const std::vector<double>&, double)>& emit) {
  const int d = static_cast<int>(partial.size());
  if (k == 2) {
    const int m = 2 * order;
    const double scale = partial[depth];  // remaining radius stored here
    for (int j = 0; j < m; ++j) {
      const double phi = kTwoPi * j / m;
      partial[depth] = scale * std::cos(phi);
      partial[depth + 1] = scale * std::sin(phi);
      emit(partial, weight * kTwoPi / m);
    }
    partial[depth] = scale;
    partial[depth + 1] = 0.0;
    return;
  }
  const double scale = partial[depth];
  const auto& rule = quad::gauss_legendre(order);
  for (int i = 0; i < order; ++i) {
    double u, w;
    if (k == 3) {  // weight 1 in the polar cosine
      u = rule.nodes[i];
      w = rule.weights[i];
    } else {
      const double theta = 0.5 * kPi * (rule.nodes[i] + 1.0);
      u = std::cos(theta);
      w = 0.5 * kPi * rule.weights[i] * std::pow(std::sin(theta), k - 2);
    }
    const double s = std::sqrt(std::max(0.0, 1.0 - u * u));
    partial[depth] = scale * u;
    partial[depth + 1] = scale * s;
    sphere_points(k - 1, order, weight * w, partial, depth + 1, emit);
  }
  partial[depth] = scale;
  if (depth + 1 < d) partial[depth + 1] = 0.0;
}

template <class T>
struct Sum {
  quad::CompensatedSum<T> s;
  void add(T v) { s.add(v); }
  T value() const { return s.value(); }
};

}  // namespace

cplx zonal_integral(int d, int order, const std::function<cplx(double)>& F) {
  if (d < 2) throw std::invalid_argument("zonal_integral: d >= 2");
  order = std::clamp(order, 2, kMaxSphereOrder);
  const auto& rule = quad::gauss_legendre(order);
  Sum<cplx> s;
  if (d == 3) {
    for (int i = 0; i < order; ++i) s.add(rule.weights[i] * F(rule.nodes[i]));
  } else {
    for (int i = 0; i < order; ++i) {
      const double theta = 0.5 * kPi * (rule.nodes[i] + 1.0);
      s.add(0.5 * kPi * rule.weights[i] * std::pow(std::sin(theta), d - 2) * F(std::cos(theta)));
    }
  }
  return area_any(d - 1) * s.value();
}

cplx sphere_integral(int d, int order, std::span<const double> axis,
                     const std::function<cplx(std::span<const double>)>& F) {
  if (d < 2) throw std::invalid_argument("sphere_integral: d >= 2");
  if (!axis.empty() && static_cast<int>(axis.size()) != d) {
    throw std::invalid_argument("sphere_integral: axis dimension mismatch");
  }
  order = std::clamp(order, 2, kMaxSphereOrder);
  const auto v = frame_vector(d, axis);
  std::vector<double> partial(static_cast<std::size_t>(d), 0.0), world(static_cast<std::size_t>(d));
  partial[0] = 1.0;
  Sum<cplx> s;
  sphere_points(d, order, 1.0, partial, 0, [&](const std::vector<double>& p, double w) {
    double dot = 0.0;
    for (int i = 0; i < d; ++i) dot += v[i] * p[i];
    for (int i = 0; i < d; ++i) world[i] = p[i] - 2.0 * dot * v[i];
    s.add(w * F(world));
  });
  return s.value();
}

double space_bandwidth(const TestFunction& f) {
  const auto supp = f.frequency_support();
  if (supp.empty()) {
    // Unbounded support: radius where |f_hat| falls below 1e-24 of its peak.
    const auto& p = f.profile();
    const double f0 = std::abs(p.fourier(0.0));
    double rho = 0.5;
    while (rho < 1e3 && std::abs(p.fourier(rho)) > 1e-24 * f0) rho *= 1.25;
    return rho + f.modulation_norm();
  }
  double hi = 0.0;
  for (const auto& iv : supp) hi = std::max(hi, iv.hi);
  return hi;
}

// ---------------------------------------------------------------- spherical means

SphereMean spherical_mean(const TestFunction& f, std::span<const double> y, double t, double rel_tol) {
  const int d = f.dimension();
  if (static_cast<int>(y.size()) != d) throw std::invalid_argument("spherical_mean: dimension mismatch");
  if (!(t > 0)) throw std::invalid_argument("spherical_mean: t must be positive");
  std::vector<double> z(y.begin(), y.end());
  const auto& tau = f.shift();
  if (!tau.empty()) {
    for (int i = 0; i < d; ++i) z[i] -= tau[i];
  }
  const double scale_t = std::pow(t, d - 1);
  SphereMean out;
  out.oscillation_warning = kTwoPi * norm(y) * t > kSphereValidatedPhase;

  if (f.modulation_norm() == 0.0) {
    // f_hat(t omega) = c e^{-2 pi i tau.t omega} P_hat(t): zonal about y - tau.
    const double zn = norm(z);
    const cplx pre = f.coefficient() * f.profile().fourier(t) * scale_t;
    const double kappa = t * zn;
    auto F = [kappa](double u) { return expi(kappa * u); };
    int n = 20 + static_cast<int>(std::ceil(0.6 * kTwoPi * kappa));
    cplx prev = zonal_integral(d, n, F);
    for (;;) {
      const int n2 = n + n / 2 + 4;
      const cplx cur = zonal_integral(d, n2, F);
      out.error_estimate = std::abs(cur - prev) * std::abs(pre);
      out.value = pre * cur;
      out.order = n2;
      if (std::abs(cur - prev) <= rel_tol * area_any(d) || n2 >= kMaxSphereOrder) break;
      n = n2;
      prev = cur;
    }
    return out;
  }

  const double B = space_bandwidth(f);
  const std::vector<double> axis = z;
  const bool use_axis = norm(z) > 0.0;
  double fmax = 0.0;
  auto F = [&](std::span<const double> w) {
    std::vector<double> xi(w.size());
    double dot = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      xi[i] = t * w[i];
      dot += y[i] * xi[i];
    }
    const cplx fh = f.fourier(xi);
    fmax = std::max(fmax, std::abs(fh));
    return fh * expi(dot);
  };
  int n = 16 + static_cast<int>(std::ceil(0.6 * kTwoPi * t * (norm(y) + norm(tau) + B)));
  std::span<const double> ax = use_axis ? std::span<const double>(axis) : std::span<const double>();
  cplx prev = sphere_integral(d, n, ax, F);
  for (;;) {
    const int n2 = n + n / 2 + 4;
    const cplx cur = sphere_integral(d, n2, ax, F);
    out.error_estimate = std::abs(cur - prev) * scale_t;
    out.value = cur * scale_t;
    out.order = n2;
    if (std::abs(cur - prev) <= rel_tol * area_any(d) * std::max(fmax, 1e-300) || n2 >= kMaxSphereOrder) break;
    n = n2;
    prev = cur;
  }
  return out;
}

SpaceSideMeans::SpaceSideMeans(TestFunction f, std::vector<double> y, double t_max)
    : f_(std::move(f)), y_(std::move(y)), t_max_(t_max) {
  if (static_cast<int>(y_.size()) != f_.dimension()) {
    throw std::invalid_argument("SpaceSideMeans: dimension mismatch");
  }
  if (!(t_max > 0)) throw std::invalid_argument("SpaceSideMeans: t_max must be positive");
  const double m0 = f_.majorant(0.0);
  double rho = 0.25;
  const double cap = f_.envelope_radius();
  while (rho < cap && f_.majorant(rho) > 1e-17 * m0) rho += 0.25;
  outer_ = norm(y_) + std::max(rho, 1.0) + 1.0;
  // 20 Gauss nodes per panel; at most ~1.5 turns of sigma_hat_t or of A_y per panel.
  const double panel = std::min(0.25, 1.5 / (t_max_ + space_bandwidth(f_) + f_.shift_norm()));
  fill(inner_, 0.0, 1.0, panel);
  fill(outer_nodes_, 1.0, outer_, panel);
}

void SpaceSideMeans::fill(Nodes& n, double lo, double hi, double panel) const {
  const int d = f_.dimension();
  const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / panel)));
  const auto set = quad::composite(lo, hi, panels, kPanelOrder);
  n.r = set.x;
  n.w = set.w;
  n.avg.resize(n.r.size());
  const double B = space_bandwidth(f_);
  const bool zonal = f_.modulation_norm() == 0.0;
  std::vector<double> z = y_;
  const auto& tau = f_.shift();
  if (!tau.empty()) {
    for (int i = 0; i < d; ++i) z[i] -= tau[i];
  }
  const double zn = norm(z);
  const auto count = static_cast<std::ptrdiff_t>(n.r.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const double r = n.r[static_cast<std::size_t>(i)];
    const int order = 16 + static_cast<int>(std::ceil(0.6 * kTwoPi * r * (B + zn)));
    cplx v;
    if (zonal) {
      // f(y - r omega) = c P(|z - r omega|), u = omega . z/|z|.
      const auto& P = f_.profile();
      auto F = [&](double u) {
        const double s2 = zn * zn + r * r - 2.0 * r * zn * u;
        return cplx(P.value(std::sqrt(std::max(s2, 0.0))), 0.0);
      };
      v = f_.coefficient() * zonal_integral(d, order, F);
    } else {
      std::vector<double> x(static_cast<std::size_t>(d));
      auto F = [&](std::span<const double> w) {
        for (int j = 0; j < d; ++j) x[j] = y_[j] - r * w[j];
        return f_.value(x);
      };
      v = sphere_integral(d, order, z, F);
    }
    n.avg[static_cast<std::size_t>(i)] = v;
  }
}

cplx SpaceSideMeans::radial_sum(const Nodes& n, double t) const {
  if (t > t_max_ * (1 + 1e-12)) throw std::invalid_argument("SpaceSideMeans: t exceeds t_max");
  const int d = f_.dimension();
  Sum<cplx> s;
  for (std::size_t i = 0; i < n.r.size(); ++i) {
    const double r = n.r[i];
    s.add(n.w[i] * std::pow(r, d - 1) * sigma_hat(d, t, r) * n.avg[i]);
  }
  return s.value();
}

cplx SpaceSideMeans::h1(double t) const { return radial_sum(inner_, t); }
cplx SpaceSideMeans::h2(double t) const { return radial_sum(outer_nodes_, t); }

double SpaceSideMeans::tail_bound(double t) const {
  // |sigma_hat_t| <= |S| t^{d-1}; |A_y(r)| <= |S| M(r - |y|).
  const int d = f_.dimension();
  const double S = area_any(d);
  const double yn = norm(y_);
  const double env_r = f_.envelope_radius() + yn;
  double total = 0.0;
  constexpr double kCell = 0.05;
  for (double a = outer_; a < env_r; a += kCell) {
    const double b = std::min(a + kCell, env_r);
    total += f_.majorant(std::max(a - yn, 0.0)) * (std::pow(b, d) - std::pow(a, d)) / d;
  }
  const auto env = f_.envelope();
  const double a0 = std::max(outer_, env_r);
  total += env.A * std::pow(1.0 + yn, d - 1) * std::pow(1.0 + a0 - yn, d - env.s) / (env.s - d);
  return S * S * std::pow(t, d - 1) * total;
}

// ---------------------------------------------------------------- chirp integrals

double ibp_bound(const ChirpAmplitude& phi, double lambda, double c) {
  if (!phi.jet) throw std::invalid_argument("ibp_bound: amplitude has no jet");
  if (c >= phi.lo && c <= phi.hi) throw std::invalid_argument("ibp_bound: stationary point inside the support");
  if (lambda == 0.0) return std::numeric_limits<double>::infinity();
  const double k4 = 4.0 * kPi * std::abs(lambda);
  auto integrand = [&](double t) {
    auto [re, im] = phi.jet(t);
    const Jet v = reciprocal(Jet::variable(t - c)) * (1.0 / k4);
    for (int step = 0; step < kMaxDerivative; ++step) {
      const Jet pr = re * v, pi = im * v;
      for (int i = 0; i < kMaxDerivative; ++i) {
        re.c[i] = (i + 1) * pr.c[i + 1];
        im.c[i] = (i + 1) * pi.c[i + 1];
      }
      re.c[kMaxDerivative] = 0.0;
      im.c[kMaxDerivative] = 0.0;
    }
    return std::hypot(re.c[0], im.c[0]);
  };
  return 2.0 * quad::integrate(integrand, phi.lo, phi.hi, 64, kPanelOrder);
}

ChirpResult chirp_integral(const ChirpAmplitude& phi, double lambda, double c) {
  if (!(phi.hi > phi.lo)) throw std::invalid_argument("chirp_integral: empty support");
  if (!phi.value) throw std::invalid_argument("chirp_integral: amplitude has no value");
  ChirpResult out;
  const double L = std::abs(lambda);
  const double dlo = phi.lo - c, dhi = phi.hi - c;
  const double dmin = (c >= phi.lo && c <= phi.hi) ? 0.0 : std::min(std::abs(dlo), std::abs(dhi));
  const double dmax = std::max(std::abs(dlo), std::abs(dhi));
  const double phase = kTwoPi * L * (dmax * dmax - dmin * dmin);
  if (phase > kDirectPhase && dmin > 0.0 && phi.jet) {
    const double bound = ibp_bound(phi, lambda, c);
    out.evaluations = 64 * kPanelOrder;
    if (bound <= kNegligible) {
      out.value = 0.0;
      out.error_bound = bound;
      out.negligible = true;
      return out;
    }
  }
  if (phase > kMaxPhase) {
    std::ostringstream os;
    os << "chirp_integral: phase " << phase << " rad exceeds budget " << kMaxPhase;
    throw ResourceLimitError(os.str());
  }
  const auto& rule = quad::gauss_legendre(kPanelOrder);
  const double wmax = (phi.hi - phi.lo) / 64.0;
  const double q = L > 0 ? kPanelPhase / (kTwoPi * L) : 0.0;
  Sum<cplx> s;
  double mass = 0.0;
  double t = phi.lo;
  while (t < phi.hi) {
    double w = wmax;
    if (L > 0) {
      const double a = std::abs(t - c);
      w = std::min(w, -a + std::sqrt(a * a + q));
    }
    const double b = std::min(t + w, phi.hi);
    const double half = 0.5 * (b - t), mid = 0.5 * (b + t);
    cplx panel = 0.0;
    for (int i = 0; i < kPanelOrder; ++i) {
      const double x = mid + half * rule.nodes[i];
      const cplx v = phi.value(x);
      mass += half * rule.weights[i] * std::abs(v);
      panel += rule.weights[i] * v * expi(-chirp_turns(lambda, x, c));
    }
    s.add(half * panel);
    out.evaluations += kPanelOrder;
    t = b;
  }
  out.value = s.value();
  out.error_bound = 64.0 * std::numeric_limits<double>::epsilon() * mass;
  return out;
}

ChirpResult stationary_phase_integral(const Bump& phi, double nu, double N, double c) {
  if (nu == 0.0) throw std::invalid_argument("stationary_phase_integral: nu must be nonzero");
  if (!(N >= 1.0)) throw std::invalid_argument("stationary_phase_integral: N must be >= 1");
  if (phi.lo() < 0.5 - 1e-12 || phi.hi() > 2.0 + 1e-12) {
    throw std::invalid_argument("stationary_phase_integral: bump must be supported in [1/2, 2]");
  }
  ChirpAmplitude a;
  a.lo = phi.lo();
  a.hi = phi.hi();
  a.value = [&phi](double t) { return cplx(phi(t), 0.0); };
  a.jet = [&phi](double t) { return std::make_pair(phi.jet(Jet::variable(t)), Jet{}); };
  return chirp_integral(a, nu * N * N, c);
}

DecayFitResult stationary_phase_decay(const Bump& phi, double c, std::span<const double> lambdas, double floor) {
  DecayFitResult out;
  for (double lam : lambdas) {
    const double m = std::abs(stationary_phase_integral(phi, lam, 1.0, c).value);
    if (m > floor) {
      out.lambdas.push_back(lam);
      out.magnitudes.push_back(m);
    }
  }
  if (out.lambdas.size() < 2) throw std::domain_error("stationary_phase_decay: fewer than two values above the floor");
  const auto fit = quad::fit_loglog(out.lambdas, out.magnitudes);
  out.exponent = -fit.slope;
  out.r2 = fit.r2;
  return out;
}

// ---------------------------------------------------------------- dyadic kernels

namespace {

const Bump& cutoff() {
  static const Bump q = make_dyadic_cutoff();
  return q;
}

// Jets of a(r) at r = s t in the dimensions with closed forms.
std::function<std::pair<Jet, Jet>(double)> amplitude_jet(int d, double s, bool conj) {
  const double sign = conj ? -1.0 : 1.0;
  if (d == 3) {  // a = -2i / r
    return [=](double t) {
      const Jet r = Jet::variable(t) * s;
      return std::make_pair(Jet{}, reciprocal(r) * (-2.0 * sign));
    };
  }
  if (d == 5) {  // a = 2/r^2 (-1 - i/(2 pi r))
    return [=](double t) {
      const Jet ir = reciprocal(Jet::variable(t) * s);
      const Jet ir2 = ir * ir;
      return std::make_pair(ir2 * -2.0, ir2 * ir * (-sign / kPi));
    };
  }
  return {};
}

}  // namespace

cplx kernel_D_integrand(const DyadicKernel& k, double N, double x_norm, double t) {
  const double q = cutoff()(t);
  if (q == 0.0 || x_norm <= 1.0) return 0.0;
  const double Nt = N * t;
  const cplx pre = 2.0 * expi(k.nu * k.b) * N * q * std::pow(Nt, k.d - 1) * sigma_hat(k.d, 1.0, Nt * x_norm);
  return pre * expi(-chirp_turns(k.nu * N * N, t, 0.0));
}

KernelValue kernel_D(const DyadicKernel& k, double N, double x_norm) {
  if (k.nu == 0) throw std::invalid_argument("kernel_D: nu must be nonzero");
  if (k.d < kMinSphereDim || k.d > kMaxSphereDim) throw std::invalid_argument("kernel_D: d must be in 2..5");
  if (!(N >= 1.0)) throw std::invalid_argument("kernel_D: N must be >= 1");
  KernelValue out;
  if (x_norm <= 1.0) return out;
  const Bump& q = cutoff();
  const double s = N * x_norm;
  const double nu = k.nu;
  const double lambda = nu * N * N;
  const double c = x_norm / (2.0 * nu * N);
  auto make = [&](bool conj) {
    ChirpAmplitude a;
    a.lo = q.lo();
    a.hi = q.hi();
    const int d = k.d;
    a.value = [&q, s, d, conj](double t) {
      const double qt = q(t);
      if (qt == 0.0) return cplx(0.0);
      const cplx amp = amplitude(d, s * t);
      return qt * std::pow(t, d - 1) * (conj ? std::conj(amp) : amp);
    };
    auto aj = amplitude_jet(d, s, conj);
    if (aj) {
      a.jet = [&q, d, aj](double t) {
        const Jet tj = Jet::variable(t);
        Jet w = q.jet(tj);
        for (int i = 0; i < d - 1; ++i) w = w * tj;
        auto [re, im] = aj(t);
        return std::make_pair(w * re, w * im);
      };
    }
    return a;
  };
  const ChirpResult plus = chirp_integral(make(false), lambda, c);
  const ChirpResult minus = chirp_integral(make(true), lambda, -c);
  const double Nd = std::pow(N, k.d);
  const cplx pre = expi(nu * k.b + x_norm * x_norm / (4.0 * nu)) * Nd;
  out.value = pre * (plus.value + minus.value);
  out.error_bound = Nd * (plus.error_bound + minus.error_bound);
  out.negligible_plus = plus.negligible;
  out.negligible_minus = minus.negligible;
  return out;
}

KernelSum kernel_K_bound(const DyadicKernel& k, double x_norm, int L) {
  if (L < 0 || L > kMaxKernelLevels) throw std::invalid_argument("kernel_K_bound: L must be in 0..20");
  KernelSum out;
  out.x_norm = x_norm;
  const double anu = std::abs(static_cast<double>(k.nu));
  out.window_lo = std::max(0, static_cast<int>(std::ceil(std::log2(x_norm / (4.0 * anu)) - 1e-12)));
  out.window_hi = static_cast<int>(std::floor(std::log2(x_norm / anu) + 1e-12));
  double run = 0.0;
  for (int l = 0; l <= L; ++l) {
    const KernelValue v = kernel_D(k, std::ldexp(1.0, l), x_norm);
    const double m = std::abs(v.value);
    run += m;
    out.terms.push_back(m);
    out.partial_sums.push_back(run);
    out.error_bound += v.error_bound;
    if (l < L && l > out.window_hi && m < kKernelIncrement) out.converged = true;
  }
  out.total = run;
  return out;
}

std::vector<KernelSum> kernel_sweep(const DyadicKernel& k, std::span<const double> x_norms, int L) {
  std::vector<KernelSum> out(x_norms.size());
  const auto n = static_cast<std::ptrdiff_t>(x_norms.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = kernel_K_bound(k, x_norms[static_cast<std::size_t>(i)], L);
  }
  return out;
}

// ---------------------------------------------------------------- Poisson summation

PoissonResult poisson_check(const std::function<cplx(double)>& F, const std::function<cplx(double)>& F_hat,
                            int n_cap, int nu_cap, double tail_budget) {
  if (n_cap < 0 || nu_cap < 0) throw std::invalid_argument("poisson_check: caps must be nonnegative");
  PoissonResult out;
  out.n_cap = n_cap;
  out.nu_cap = nu_cap;
  Sum<cplx> l, r;
  double scale = 0.0;
  for (int n = -n_cap; n <= n_cap; ++n) {
    const cplx v = F(n);
    l.add(v);
    scale += std::abs(v);
  }
  for (int v = -nu_cap; v <= nu_cap; ++v) {
    const cplx w = F_hat(v);
    r.add(w);
    scale += std::abs(w);
  }
  out.lhs = l.value();
  out.rhs = r.value();
  out.difference = std::abs(out.lhs - out.rhs);
  out.tail_budget = tail_budget;
  out.residual = out.difference + tail_budget;
  out.scale = scale;
  return out;
}

PoissonResult poisson_gaussian(double a, int n_cap, int nu_cap) {
  if (!(a > 0)) throw std::invalid_argument("poisson_gaussian: a must be positive");
  auto F = [a](double t) { return cplx(std::exp(-kPi * a * t * t), 0.0); };
  auto Fh = [a](double v) { return cplx(std::exp(-kPi * v * v / a) / std::sqrt(a), 0.0); };
  // sum_{|n| > K} e^{-pi a n^2} <= 2 e^{-pi a (K+1)^2} / (1 - e^{-pi a (2K+3)})
  auto tail = [](double alpha, int K) {
    return 2.0 * std::exp(-kPi * alpha * (K + 1.0) * (K + 1.0)) / (1.0 - std::exp(-kPi * alpha * (2.0 * K + 3.0)));
  };
  const double budget = tail(a, n_cap) + tail(1.0 / a, nu_cap) / std::sqrt(a);
  return poisson_check(F, Fh, n_cap, nu_cap, budget);
}

std::shared_ptr<const AnnulusProfile> shifted_gap_annulus(int n0, double b, double margin, double taper) {
  if (n0 < 0 || !(b > 0) || !(b < 1)) throw std::invalid_argument("shifted_gap_annulus: need n0 >= 0, 0 < b < 1");
  const double lo = std::sqrt(n0 + b) + margin, hi = std::sqrt(n0 + 1.0) - margin;
  if (!(hi > lo)) throw std::invalid_argument("shifted_gap_annulus: margin leaves no room");
  return std::make_shared<const AnnulusProfile>(4, lo, hi, taper);
}

QuadraturePoisson poisson_quadrature(const std::function<double(double)>& F, double lo, double hi, int n_cap,
                                     int nu_cap) {
  if (!(hi > lo)) throw std::invalid_argument("poisson_quadrature: empty support");
  if (n_cap < 0 || nu_cap < 0) throw std::invalid_argument("poisson_quadrature: caps must be nonnegative");
  if (lo < -n_cap || hi > n_cap) throw std::invalid_argument("poisson_quadrature: n_cap does not cover the support");
  QuadraturePoisson out;
  out.support_lo = lo;
  out.support_hi = hi;
  const int top = 4 * nu_cap;
  const int panels = 64 + static_cast<int>(std::ceil(2.0 * top * (hi - lo)));
  const auto set = quad::composite(lo, hi, panels, kPanelOrder);
  std::vector<double> vals(set.x.size());
  double l1 = 0.0;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    vals[i] = F(set.x[i]);
    l1 += set.w[i] * std::abs(vals[i]);
  }
  if (!(l1 > 0)) throw std::domain_error("poisson_quadrature: F vanishes identically");
  out.l1_norm = l1;
  auto Fhat = [&](double v) {
    Sum<cplx> s;
    for (std::size_t i = 0; i < vals.size(); ++i) s.add(set.w[i] * vals[i] * expi(-v * set.x[i]));
    return s.value() / l1;
  };
  double tail = 0.0;
  for (int v = nu_cap + 1; v <= top; ++v) tail += std::abs(Fhat(v)) + std::abs(Fhat(-v));
  auto Fn = [&](double t) {
    const double v = (t < lo || t > hi) ? 0.0 : F(t) / l1;
    out.max_abs_F_n = std::max(out.max_abs_F_n, std::abs(v));
    return cplx(v, 0.0);
  };
  out.result = poisson_check(Fn, Fhat, n_cap, nu_cap, tail);
  return out;
}

QuadraturePoisson poisson_gaussian_quadrature(double a, int n_cap, int nu_cap) {
  if (!(a > 0)) throw std::invalid_argument("poisson_gaussian_quadrature: a must be positive");
  const double R = 8.0 / std::sqrt(a);
  return poisson_quadrature([a](double t) { return std::exp(-kPi * a * t * t); }, -R, R, n_cap, nu_cap);
}

QuadraturePoisson poisson_vanishing(const AnnulusProfile& profile, std::span<const double> y, double b, double N,
                                    int n_cap, int nu_cap) {
  const int d = profile.dimension();
  if (static_cast<int>(y.size()) != d) throw std::invalid_argument("poisson_vanishing: dimension mismatch");
  if (!(N >= 1)) throw std::invalid_argument("poisson_vanishing: N must be >= 1");
  const Bump& q = cutoff();
  const double yn = norm(y);
  auto F = [&](double t) {
    const double u = t + b;
    if (u <= 0.0) return 0.0;
    const double s = std::sqrt(u);
    const double g = profile.fourier(s);
    if (g == 0.0) return 0.0;
    return q(s / N) * g * sigma_hat(d, s, yn) / s;
  };
  const double slo = std::max(profile.lo(), 0.5 * N), shi = std::min(profile.hi(), 2.0 * N);
  if (!(shi > slo)) throw std::domain_error("poisson_vanishing: F vanishes identically");
  return poisson_quadrature(F, slo * slo - b, shi * shi - b, n_cap, nu_cap);
}

// ---------------------------------------------------------------- derivative growth

namespace {

cplx central_difference(const std::function<cplx(double)>& g, double t, double h, int k) {
  switch (k) {
    case 0: return g(t);
    case 1: return (-g(t + 2 * h) + 8.0 * g(t + h) - 8.0 * g(t - h) + g(t - 2 * h)) / (12.0 * h);
    case 2:
      return (-g(t + 2 * h) + 16.0 * g(t + h) - 30.0 * g(t) + 16.0 * g(t - h) - g(t - 2 * h)) / (12.0 * h * h);
    case 3:
      return (-g(t + 3 * h) + 8.0 * g(t + 2 * h) - 13.0 * g(t + h) + 13.0 * g(t - h) - 8.0 * g(t - 2 * h) +
              g(t - 3 * h)) /
             (8.0 * h * h * h);
    default: throw std::invalid_argument("derivative order must be in 0..3");
  }
}

constexpr double kTimeStep = 0.01;

}  // namespace

GrowthFit h1_derivative_growth(const TestFunction& f, int k, std::span<const double> t_grid,
                               std::span<const double> y_points) {
  if (k < 0 || k > 3) throw std::invalid_argument("h1_derivative_growth: k must be in 0..3");
  const auto d = static_cast<std::size_t>(f.dimension());
  if (y_points.empty() || y_points.size() % d != 0) throw std::invalid_argument("h1_derivative_growth: bad y sample");
  if (t_grid.size() < 2) throw std::invalid_argument("h1_derivative_growth: need at least two t values");
  double t_max = 0.0;
  for (double t : t_grid) {
    if (t < 1.0 || t > 64.0) throw std::invalid_argument("h1_derivative_growth: t_grid must lie in [1, 64]");
    t_max = std::max(t_max, t);
  }
  GrowthFit out;
  out.k = k;
  out.t.assign(t_grid.begin(), t_grid.end());
  out.max_abs.assign(t_grid.size(), 0.0);
  for (std::size_t j = 0; j < y_points.size() / d; ++j) {
    std::vector<double> y(y_points.begin() + static_cast<std::ptrdiff_t>(j * d),
                          y_points.begin() + static_cast<std::ptrdiff_t>((j + 1) * d));
    const SpaceSideMeans sm(f, y, t_max + 4 * kTimeStep);
    std::function<cplx(double)> g = [&sm](double t) { return sm.h1(t); };
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
      const double m = std::abs(central_difference(g, t_grid[i], kTimeStep, k));
      out.max_abs[i] = std::max(out.max_abs[i], m);
    }
  }
  const auto fit = quad::fit_loglog(out.t, out.max_abs);
  out.slope = fit.slope;
  out.r2 = fit.r2;
  out.fit_ok = fit.r2 >= 0.9;
  return out;
}

ChainRuleCheck chain_rule_check(const TestFunction& f, std::span<const double> y, double b,
                                std::span<const double> t_points) {
  double s_max = 0.0;
  for (double t : t_points) {
    if (!(t + b > 0.25)) throw std::invalid_argument("chain_rule_check: need t + b > 1/4");
    s_max = std::max(s_max, std::sqrt(t + b));
  }
  const SpaceSideMeans sm(f, std::vector<double>(y.begin(), y.end()), s_max + 0.1);
  std::function<cplx(double)> h1 = [&sm](double s) { return sm.h1(s); };
  std::function<cplx(double)> G = [&sm, b](double t) {
    const double s = std::sqrt(t + b);
    return sm.h1(s) / s;
  };
  ChainRuleCheck out;
  constexpr double h = 1e-3;
  for (double t : t_points) {
    const double s = std::sqrt(t + b);
    const cplx direct = central_difference(G, t, h, 1);
    const cplx dh = central_difference(h1, s, h, 1);
    const cplx chain = (dh * s - h1(s)) / (s * s) / (2.0 * s);
    const double rel = std::abs(direct - chain) / std::max(std::abs(direct), 1e-300);
    out.max_rel_error = std::max(out.max_rel_error, rel);
    ++out.points;
  }
  return out;
}

}  // namespace vper::osc
