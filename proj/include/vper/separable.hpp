#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "vper/bump.hpp"

namespace vper {

/// Inverse transform of an even bump, tabulated on [0, x_max] and read with
/// 6-point Lagrange interpolation; zero beyond x_max.
class BumpTransform {
 public:
  BumpTransform(Bump bump, double x_max, double step);

  double operator()(double x) const;
  /// Direct quadrature of the inverse transform; reference for the table.
  double direct(double x) const;

  const Bump& bump() const { return bump_; }
  double x_max() const { return x_max_; }
  double at_zero() const { return values_[0]; }
  /// Estimated bound on int_{|x| > x_max} |b_check|^p, from the decay over the last table tenth.
  double tail_mass(double p) const;
  /// int_R |b_check|^p with breakpoints at the sign changes (cached per p).
  double lp_pow(double p) const;
  /// Sign changes of b_check on (0, x_max], refined by bisection.
  const std::vector<double>& zeros() const { return zeros_; }

 private:
  Bump bump_;
  double x_max_;
  double step_;
  std::vector<double> values_;
  std::vector<double> zeros_;
  double tail_peak_ = 0.0;
};

/// phi(x) = exp(1 - 1/(1 - 4x^2)) exp(-18 (2x)^2), support [-1/2, 1/2].
/// The taper makes the transform fall below 1e-13 of its peak by |x| = 40.
inline constexpr double kCounterexampleTaper = 6.0;
std::shared_ptr<const BumpTransform> counterexample_bump();

/// f_hat(x) = prod_j sum_k phi((x_j - lambda_{j,k}) / s_j), so that
/// f(y) = prod_j s_j phi_check(s_j y_j) sum_k exp(2 pi i lambda_{j,k} y_j).
struct SeparableAxis {
  double scale = 1.0;
  std::vector<double> freqs{0.0};
};

class SeparableFunction {
 public:
  using cplx = std::complex<double>;

  explicit SeparableFunction(std::vector<SeparableAxis> axes,
                             std::shared_ptr<const BumpTransform> phi = counterexample_bump());

  int dimension() const { return static_cast<int>(axes_.size()); }
  const SeparableAxis& axis(int j) const { return axes_[static_cast<std::size_t>(j)]; }
  const std::vector<SeparableAxis>& axes() const { return axes_; }
  const BumpTransform& phi() const { return *phi_; }
  const std::shared_ptr<const BumpTransform>& phi_ptr() const { return phi_; }

  double fourier(std::span<const double> x) const;
  double axis_fourier(int j, double x) const;
  cplx value(std::span<const double> y) const;
  /// s phi_check(s y) sum_k exp(2 pi i lambda_k y).
  cplx axis_value(int j, double y) const;
  /// sum_k exp(2 pi i lambda_k y) on axis j.
  cplx exp_sum(int j, double y) const;

  /// min_{k != l} |lambda_k - lambda_l| on axis j (infinity for one frequency).
  double min_separation(int j) const;
  /// Half-width of one bump's support on axis j.
  double half_support(int j) const { return 0.5 * axis(j).scale * (phi_->bump().hi() - phi_->bump().lo()); }
  std::size_t term_count() const;

  /// All frequency data scaled by t: f_t(y) = t^d f(t y).
  SeparableFunction dilated(double t) const;
  /// lambda_{j,k} += theta_j, i.e. f(y) exp(2 pi i theta . y).
  SeparableFunction modulated(std::span<const double> theta) const;

 private:
  std::vector<SeparableAxis> axes_;
  std::vector<std::vector<double>> sorted_;  // per-axis frequencies, ascending
  std::shared_ptr<const BumpTransform> phi_;
};

}  // namespace vper
