#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "vper/bump.hpp"
#include "vper/taylor.hpp"
#include "vper/test_function.hpp"

namespace vper::osc {

using cplx = std::complex<double>;

// ---------------------------------------------------------------- sphere rules

/// int over S^{d-1} of F(u) where F depends only on u = axis . omega.
cplx zonal_integral(int d, int order, const std::function<cplx(double)>& F);

/// int over S^{d-1} of F(omega), product rule in polar angles measured from
/// `axis` (unit; empty means e_1). order = GL nodes per polar angle; the last
/// azimuth uses 2*order trapezoid points.
cplx sphere_integral(int d, int order, std::span<const double> axis,
                     const std::function<cplx(std::span<const double>)>& F);

/// Highest radial frequency carried by f (frequency support, or a Gaussian reach).
double space_bandwidth(const TestFunction& f);

// ---------------------------------------------------------------- spherical means

struct SphereMean {
  cplx value;
  double error_estimate = 0.0;
  int order = 0;
  /// 2 pi |y| t beyond the validated band.
  bool oscillation_warning = false;
};

inline constexpr double kSphereValidatedPhase = 4000.0;

/// h(y, t) = int f_hat(xi) e^{2 pi i y.xi} d sigma_t(xi), frequency side.
/// Refines the order until two rules agree to rel_tol * area * t^{d-1} * max|f_hat|.
SphereMean spherical_mean(const TestFunction& f, std::span<const double> y, double t, double rel_tol = 1e-8);

/// Space-side split at fixed y: h1 over |x| <= 1, h2 over |x| > 1, both from
/// int r^{d-1} sigma_hat_t(r) A_y(r) dr with A_y(r) = int_S f(y - r omega).
/// A_y is tabulated once on radial Gauss nodes resolving t <= t_max.
class SpaceSideMeans {
 public:
  SpaceSideMeans(TestFunction f, std::vector<double> y, double t_max);

  cplx h1(double t) const;
  cplx h2(double t) const;
  cplx h(double t) const { return h1(t) + h2(t); }
  /// Upper radius of the h2 integral and the bound on what lies beyond it.
  double outer_radius() const { return outer_; }
  double tail_bound(double t) const;
  const std::vector<double>& y() const { return y_; }

 private:
  struct Nodes {
    std::vector<double> r;
    std::vector<double> w;
    std::vector<cplx> avg;
  };
  cplx radial_sum(const Nodes& n, double t) const;
  void fill(Nodes& n, double lo, double hi, double panel) const;

  TestFunction f_;
  std::vector<double> y_;
  double t_max_;
  double outer_ = 0.0;
  Nodes inner_;
  Nodes outer_nodes_;
};

// ---------------------------------------------------------------- chirp integrals

/// Amplitude phi on [lo, hi] for int phi(t) e^{-2 pi i lambda (t - c)^2} dt.
/// `jet` returns Taylor jets (real, imaginary) at t; optional, enables the
/// non-stationary cutoff.
struct ChirpAmplitude {
  double lo = 0.5;
  double hi = 2.0;
  std::function<cplx(double)> value;
  std::function<std::pair<Jet, Jet>(double)> jet;
};

struct ChirpResult {
  cplx value;
  double error_bound = 0.0;
  /// Value replaced by 0 because the integration-by-parts bound is below kNegligible.
  bool negligible = false;
  std::size_t evaluations = 0;
};

/// Phase budget (radians) below which quadrature is always used.
inline constexpr double kDirectPhase = 2e4;
/// Hard cap on the total phase swept by quadrature.
inline constexpr double kMaxPhase = 4e7;
/// Threshold for dropping a non-stationary integral.
inline constexpr double kNegligible = 1e-13;

/// int phi(t) e^{-2 pi i lambda (t - c)^2} dt by Gauss panels whose phase
/// increment is bounded; when c lies outside [lo, hi] and the phase is large,
/// 8-fold integration by parts bounds the integral instead.
ChirpResult chirp_integral(const ChirpAmplitude& phi, double lambda, double c);

/// |int phi(t) e^{-2 pi i lambda (t - c)^2} dt| <= int |T^8 phi|, T g = (g / (4 pi lambda (t - c)))'.
double ibp_bound(const ChirpAmplitude& phi, double lambda, double c);

/// int phi(t) e^{-2 pi i nu N^2 (t - c)^2} dt for a bump supported in [1/2, 2].
ChirpResult stationary_phase_integral(const Bump& phi, double nu, double N, double c);

struct DecayFitResult {
  std::vector<double> lambdas;
  std::vector<double> magnitudes;
  double exponent = 0.0;
  double r2 = 0.0;
};

/// Fits |I| ~ lambda^{-exponent} over the given lambda values (nu = lambda, N = 1),
/// skipping values below the floor.
DecayFitResult stationary_phase_decay(const Bump& phi, double c, std::span<const double> lambdas,
                                      double floor = 1e-13);

// ---------------------------------------------------------------- dyadic kernels

struct DyadicKernel {
  int d = 3;
  int nu = 1;
  double b = 0.125;
};

struct KernelValue {
  cplx value;
  double error_bound = 0.0;
  bool negligible_plus = false;
  bool negligible_minus = false;
};

/// D_{N,nu}(x) for |x| = x_norm: the dyadic piece of the kernel with cutoff q,
/// evaluated through sigma_hat = (B + conj B)/2, B(r) = a(r) e^{2 pi i r}.
KernelValue kernel_D(const DyadicKernel& k, double N, double x_norm);

struct KernelSum {
  double x_norm = 0.0;
  std::vector<double> terms;         // |D(2^l, x)|
  std::vector<double> partial_sums;  // running sums
  double total = 0.0;
  double error_bound = 0.0;
  /// Increment below kKernelIncrement at some l < L after the window.
  bool converged = false;
  int window_lo = 0;  // dyadic indices with N in [|x|/(4|nu|), |x|/|nu|]
  int window_hi = -1;
};

inline constexpr double kKernelIncrement = 1e-8;
inline constexpr int kMaxKernelLevels = 20;

/// Running sums sum_{l <= L} |D(2^l, x)|.
KernelSum kernel_K_bound(const DyadicKernel& k, double x_norm, int L);
/// kernel_K_bound at every x_norm, OpenMP over the sample.
std::vector<KernelSum> kernel_sweep(const DyadicKernel& k, std::span<const double> x_norms, int L);

/// Integrand of the defining t-integral, used as an independent oracle:
/// 2 e^{2 pi i nu b} N q(t) e^{-2 pi i nu (N t)^2} (N t)^{d-1} sigma_hat(N t |x|).
cplx kernel_D_integrand(const DyadicKernel& k, double N, double x_norm, double t);

// ---------------------------------------------------------------- Poisson summation

struct PoissonResult {
  cplx lhs;                  // sum_{|n| <= n_cap} F(n)
  cplx rhs;                  // sum_{|nu| <= nu_cap} F_hat(nu)
  double difference = 0.0;   // |lhs - rhs|
  double tail_budget = 0.0;  // omitted terms, both sides
  double residual = 0.0;     // difference + tail_budget
  double scale = 0.0;        // sum of |terms| on both sides
  int n_cap = 0;
  int nu_cap = 0;
};

inline constexpr int kDefaultPoissonCap = 64;

PoissonResult poisson_check(const std::function<cplx(double)>& F, const std::function<cplx(double)>& F_hat,
                            int n_cap, int nu_cap, double tail_budget);

/// F(t) = exp(-pi a t^2), F_hat(nu) = a^{-1/2} exp(-pi nu^2 / a).
PoissonResult poisson_gaussian(double a, int n_cap = kDefaultPoissonCap, int nu_cap = kDefaultPoissonCap);

/// Poisson check with F_hat computed by Gauss panels on [lo, hi] (F = 0 outside),
/// F normalized to int |F| = 1. The tail budget is the sum of |F_hat| over
/// nu_cap < |nu| <= 4 nu_cap, which also absorbs the quadrature noise floor.
struct QuadraturePoisson {
  PoissonResult result;
  double l1_norm = 0.0;     // int |F| before normalization
  double support_lo = 0.0;
  double support_hi = 0.0;
  double max_abs_F_n = 0.0;  // max |F(n)| over the sampled integers, normalized
};

QuadraturePoisson poisson_quadrature(const std::function<double(double)>& F, double lo, double hi,
                                     int n_cap = kDefaultPoissonCap, int nu_cap = kDefaultPoissonCap);

/// The Gaussian exp(-pi a t^2) pushed through poisson_quadrature on |t| <= 8/sqrt(a):
/// the resolution floor of the quadrature pipeline at the given caps.
QuadraturePoisson poisson_gaussian_quadrature(double a, int n_cap = kDefaultPoissonCap,
                                              int nu_cap = kDefaultPoissonCap);

/// F(t) = (t+b)^{-1/2} q(sqrt(t+b)/N) h(y, sqrt(t+b)) for a radial annulus profile,
/// with h(y, s) = f_hat(s) sigma_hat_s(y).
QuadraturePoisson poisson_vanishing(const AnnulusProfile& profile, std::span<const double> y, double b, double N,
                                    int n_cap = kDefaultPoissonCap, int nu_cap = kDefaultPoissonCap);

/// Radial annulus in d = 4 strictly inside (sqrt(n0 + b), sqrt(n0 + 1)), so it
/// avoids both the lattice radii sqrt(m) and the shifted radii sqrt(m + b).
/// The taper defaults above the space-side default: the t-transform of the
/// profile then reaches the rounding floor before |nu| = 48.
inline constexpr double kPoissonTaper = 10.0;
std::shared_ptr<const AnnulusProfile> shifted_gap_annulus(int n0, double b, double margin = 0.01,
                                                          double taper = kPoissonTaper);

// ---------------------------------------------------------------- derivative growth

struct GrowthFit {
  int k = 0;
  std::vector<double> t;
  std::vector<double> max_abs;
  double slope = 0.0;
  double r2 = 0.0;
  bool fit_ok = false;
};

/// Max over the y sample of |d^k/dt^k h1(y, t)| (central differences) on
/// t_grid, fitted as a power of t.
GrowthFit h1_derivative_growth(const TestFunction& f, int k, std::span<const double> t_grid,
                               std::span<const double> y_points);

struct ChainRuleCheck {
  std::size_t points = 0;
  double max_rel_error = 0.0;
};

/// d/dt [h1(y, sqrt(t+b)) / sqrt(t+b)] by direct differences vs. the chain rule
/// applied to differences of h1 in its radius argument.
ChainRuleCheck chain_rule_check(const TestFunction& f, std::span<const double> y, double b,
                                std::span<const double> t_points);

}  // namespace vper::osc
