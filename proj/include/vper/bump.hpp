#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "vper/taylor.hpp"

namespace vper {

/// Smooth compactly supported real function on R with derivative access.
///
/// Values are exactly zero outside [lo, hi]. Derivatives up to order 8 are
/// propagated through Taylor arithmetic, so they share the closed form of the
/// value evaluator instead of being differenced.
class Bump {
 public:
  using ValueFn = std::function<double(double)>;
  using JetFn = std::function<Jet(const Jet&)>;

  Bump(std::string name, double lo, double hi, ValueFn value, JetFn jet, bool nonnegative,
       bool even);

  double operator()(double t) const { return (t <= lo_ || t >= hi_) ? 0.0 : value_(t); }
  double derivative(double t, int k) const;
  Jet jet(const Jet& t) const;

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  bool nonnegative() const { return nonnegative_; }
  /// Symmetric about 0; inverse transform is then real.
  bool even() const { return even_; }
  const std::string& name() const { return name_; }

  /// x -> b((x - center) / scale), scale > 0.
  Bump affine(double center, double scale) const;
  Bump scaled_by(double factor) const;

 private:
  std::string name_;
  double lo_;
  double hi_;
  ValueFn value_;
  JetFn jet_;
  bool nonnegative_;
  bool even_;
};

/// Monotone smooth step: 0 for u <= 0, 1 for u >= 1, built from exp(-1/u).
double smooth_step(double u);
Jet smooth_step(const Jet& u);

/// Version tag of the q construction; recorded in reports that fit constants.
inline constexpr const char* kCutoffVersion = "q=s(t)-s(2t),s=S(2-t),S=E(u)/(E(u)+E(1-u)),E=exp(-1/u);v1";

/// q: support [1/2, 2], q >= 0, q(t) + q(t/2) = 1 on [1, 2].
Bump make_dyadic_cutoff();
/// q0(t) = 1 - sum_{l>=0} q(|t|/2^l): equals 1 on |t| <= 1/2, 0 for |t| >= 1.
Bump make_dyadic_complement();
/// psi_k(t) = q0(t) + sum_{l=0..k} q(|t|/2^l): 1 on |t| <= 2^k, 0 beyond 2^{k+1}.
Bump psi_truncation(int k);

/// phi(x) = exp(1 - 1/(1 - u^2)) * exp(-taper^2 u^2 / 2), u = x / halfwidth.
/// phi(0) = 1; taper = 0 is the plain bump.
Bump make_bump(double halfwidth, double taper = 0.0);

/// Integral of b over its support.
double integral(const Bump& b, int panels = 64);
/// Integral of |b|^p over its support.
double lp_norm_pow(const Bump& b, double p, int panels = 64);

/// int b(t) exp(2 pi i x t) dt, absolute error <= 1e-10 for the bumps above.
std::complex<double> inverse_ft_1d(const Bump& b, double x);

/// Tabulated inverse transform of an even bump on [0, x_max] with cubic
/// interpolation; zero beyond x_max. tail_bound() is max |b_check| over the last
/// tenth of the table, a proxy for the truncation error.
class TransformTable {
 public:
  TransformTable(const Bump& even_bump, double x_max, double step);

  double operator()(double x) const;
  double x_max() const { return x_max_; }
  double tail_bound() const { return tail_bound_; }
  double at_zero() const { return values_.front(); }

 private:
  double x_max_;
  double step_;
  double tail_bound_ = 0.0;
  std::vector<double> values_;
};

struct PartitionCheck {
  std::vector<double> grid;
  int terms = 0;
  double max_deviation = 0.0;
  double worst_t = 0.0;
  /// max over t > 1 of |q0(t)|
  double complement_max = 0.0;
};

/// Deviation of sum_{l=0..terms-1} q(t/2^l) from 1 on a uniform grid in [1, t_max].
PartitionCheck partition_check(int points, double t_max, int terms);

}  // namespace vper
