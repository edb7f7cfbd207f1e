#pragma once

#include <limits>
#include <string>

#include "vper/separable.hpp"
#include "vper/test_function.hpp"

namespace vper::norms {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Method { SeparableProduct, Radial1D, DirectGrid };
const char* to_string(Method m);

struct NormResult {
  double p = 1.0;
  double value = 0.0;
  Method method = Method::SeparableProduct;
  /// Estimated absolute error of value.
  double budget = 0.0;
  /// Panel Hoelder bound on the oscillatory axis (NaN when not computed).
  double holder_bound = std::numeric_limits<double>::quiet_NaN();
  bool budget_exceeded = false;
  std::size_t points = 0;
};

struct SeparableOptions {
  /// Grid points per shortest period of |f|^2 on an oscillatory axis; even p uses at most 4.
  double oversample = 16.0;
  /// Flag the result when budget > rel_budget * value.
  double rel_budget = 1e-4;
  /// Skip the Hoelder cross-check when it would need more frequency pairs than this.
  double holder_pair_limit = 2e8;
  /// Restrict axis 0 to |y_0| <= window (infinity = whole line).
  double window = kInfinity;
};

/// int |F_j|^p over the line (or the window), F_j(y) = s phi_check(s y) sum_k e^{2 pi i lambda_k y}.
struct AxisIntegral {
  double value = 0.0;
  double budget = 0.0;
  std::size_t points = 0;
  double holder_bound = std::numeric_limits<double>::quiet_NaN();
};

AxisIntegral axis_lp_pow(const SeparableFunction& f, int j, double p, const SeparableOptions& opt = {});
/// sup |F_j| by a grid search followed by golden-section refinement.
double axis_sup(const SeparableFunction& f, int j, double window = kInfinity);

/// ||f||_p as the product of one-dimensional integrals; p = infinity gives the sup.
NormResult lp_norm_separable(const SeparableFunction& f, double p, const SeparableOptions& opt = {});

/// ||f||_p by tensor trapezoid quadrature of direct values (d <= 2, finite p). Second order
/// unless p is even, since |f|^p has near-kinks.
NormResult lp_norm_direct_grid(const SeparableFunction& f, double p, double oversample = 4.0);

/// ||P(|.|)||_p on R^d: radial integral with zeros as panel breaks, envelope tail.
NormResult lp_norm_radial(const RadialProfile& profile, double p);
/// |c| * ||P||_p: translation and modulation leave the norm unchanged.
NormResult lp_norm(const TestFunction& f, double p);

}  // namespace vper::norms
