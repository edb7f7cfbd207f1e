#include "vper/bump.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>

#include "vper/quadrature.hpp"

namespace vper {

namespace {

// exp(-1/w) is below the smallest normal double once w < 1/708; derivatives of
// order <= 8 are still negligible there.
constexpr double kMollifierFloor = 1.0 / 700.0;

double value_of(double x) { return x; }
double value_of(const Jet& x) { return x.c[0]; }

double inv(double x) { return 1.0 / x; }
Jet inv(const Jet& x) { return reciprocal(x); }

template <class T>
T constant(double v) {
  if constexpr (std::is_same_v<T, double>) {
    return v;
  } else {
    return T::constant(v);
  }
}

template <class T>
T exp_of(const T& x) {
  using std::exp;
  return exp(x);
}

template <class T>
T abs_of(const T& x) {
  return value_of(x) < 0 ? -x : x;
}

// exp(-1/u) for u > 0, 0 otherwise.
template <class T>
T mollifier(const T& u) {
  if (value_of(u) <= kMollifierFloor) return constant<T>(0.0);
  return exp_of(-inv(u));
}

template <class T>
T step(const T& u) {
  const double v = value_of(u);
  if (v <= kMollifierFloor) return constant<T>(0.0);
  if (v >= 1.0 - kMollifierFloor) return constant<T>(1.0);
  const T a = mollifier(u);
  const T b = mollifier(1.0 - u);
  return a / (a + b);
}

// 1 on t <= 1, 0 on t >= 2.
template <class T>
T plateau(const T& t) {
  return step(2.0 - t);
}

template <class T>
T cutoff_q(const T& t) {
  return plateau(t) - plateau(2.0 * t);
}

template <class T>
T complement_q0(const T& t) {
  return plateau(2.0 * abs_of(t));
}

template <class T>
T truncation_psi(const T& t, int k) {
  const T a = abs_of(t);
  T sum = complement_q0(a);
  double scale = 1.0;
  for (int l = 0; l <= k; ++l) {
    sum += cutoff_q(a * scale);
    scale *= 0.5;
  }
  return sum;
}

template <class T>
T bump_profile(const T& x, double halfwidth, double taper) {
  const T u = x * (1.0 / halfwidth);
  const T w = 1.0 - u * u;
  if (value_of(w) <= kMollifierFloor) return constant<T>(0.0);
  return exp_of(1.0 - inv(w) - (0.5 * taper * taper) * (u * u));
}

}  // namespace

Bump::Bump(std::string name, double lo, double hi, ValueFn value, JetFn jet, bool nonnegative,
           bool even)
    : name_(std::move(name)),
      lo_(lo),
      hi_(hi),
      value_(std::move(value)),
      jet_(std::move(jet)),
      nonnegative_(nonnegative),
      even_(even) {
  if (!(hi > lo)) throw std::invalid_argument("Bump: empty support");
}

double Bump::derivative(double t, int k) const {
  if (k < 0 || k > kMaxDerivative) throw std::invalid_argument("Bump: derivative order must be in 0..8");
  if (t <= lo_ || t >= hi_) return 0.0;
  if (k == 0) return value_(t);
  return jet_(Jet::variable(t)).derivative(k);
}

Jet Bump::jet(const Jet& t) const {
  if (t.c[0] <= lo_ || t.c[0] >= hi_) return Jet::constant(0.0);
  return jet_(t);
}

Bump Bump::affine(double center, double scale) const {
  if (!(scale > 0)) throw std::invalid_argument("Bump::affine: scale must be positive");
  auto value = value_;
  auto jet = jet_;
  const double inv_scale = 1.0 / scale;
  return Bump(
      name_ + "@affine", center + scale * lo_, center + scale * hi_,
      [value, center, inv_scale](double x) { return value((x - center) * inv_scale); },
      [jet, center, inv_scale](const Jet& x) { return jet((x - center) * inv_scale); }, nonnegative_,
      even_ && center == 0.0);
}

Bump Bump::scaled_by(double factor) const {
  auto value = value_;
  auto jet = jet_;
  return Bump(
      name_ + "*k", lo_, hi_, [value, factor](double x) { return factor * value(x); },
      [jet, factor](const Jet& x) { return factor * jet(x); }, nonnegative_ && factor >= 0, even_);
}

double smooth_step(double u) { return step(u); }
Jet smooth_step(const Jet& u) { return step(u); }

Bump make_dyadic_cutoff() {
  return Bump(
      "q", 0.5, 2.0, [](double t) { return cutoff_q(t); }, [](const Jet& t) { return cutoff_q(t); },
      true, false);
}

Bump make_dyadic_complement() {
  return Bump(
      "q0", -1.0, 1.0, [](double t) { return complement_q0(t); },
      [](const Jet& t) { return complement_q0(t); }, true, true);
}

Bump psi_truncation(int k) {
  if (k < 0) throw std::invalid_argument("psi_truncation: k must be >= 0");
  const double edge = std::ldexp(1.0, k + 1);
  return Bump(
      "psi_" + std::to_string(k), -edge, edge, [k](double t) { return truncation_psi(t, k); },
      [k](const Jet& t) { return truncation_psi(t, k); }, true, true);
}

Bump make_bump(double halfwidth, double taper) {
  if (!(halfwidth > 0)) throw std::invalid_argument("make_bump: halfwidth must be positive");
  if (taper < 0) throw std::invalid_argument("make_bump: taper must be nonnegative");
  return Bump(
      "phi", -halfwidth, halfwidth,
      [halfwidth, taper](double x) { return bump_profile(x, halfwidth, taper); },
      [halfwidth, taper](const Jet& x) { return bump_profile(x, halfwidth, taper); }, true, true);
}

double integral(const Bump& b, int panels) {
  return quad::integrate([&b](double t) { return b(t); }, b.lo(), b.hi(), panels, 20);
}

double lp_norm_pow(const Bump& b, double p, int panels) {
  return quad::integrate([&b, p](double t) { return std::pow(std::abs(b(t)), p); }, b.lo(), b.hi(),
                         panels, 20);
}

std::complex<double> inverse_ft_1d(const Bump& b, double x) {
  const double width = b.hi() - b.lo();
  const int panels = 8 + static_cast<int>(std::ceil(2.0 * std::abs(x) * width));
  const double omega = quad::kTwoPi * x;
  if (b.even()) {
    const double re = quad::integrate([&](double t) { return b(t) * std::cos(omega * t); }, b.lo(),
                                      b.hi(), panels, 24);
    return {re, 0.0};
  }
  return quad::integrate(
      [&](double t) { return b(t) * std::complex<double>(std::cos(omega * t), std::sin(omega * t)); },
      b.lo(), b.hi(), panels, 24);
}

TransformTable::TransformTable(const Bump& even_bump, double x_max, double step)
    : x_max_(x_max), step_(step) {
  if (!even_bump.even()) throw std::invalid_argument("TransformTable: bump must be even");
  if (!(x_max > 0) || !(step > 0)) throw std::invalid_argument("TransformTable: bad grid");
  const auto n = static_cast<std::size_t>(std::ceil(x_max / step)) + 3;
  values_.resize(n);
  for (std::size_t i = 0; i < n; ++i) values_[i] = inverse_ft_1d(even_bump, i * step).real();
  const std::size_t tail_start = n - n / 10 - 1;
  for (std::size_t i = tail_start; i < n; ++i) tail_bound_ = std::max(tail_bound_, std::abs(values_[i]));
}

double TransformTable::operator()(double x) const {
  x = std::abs(x);
  if (x > x_max_) return 0.0;
  const double s = x / step_;
  const auto i = static_cast<std::ptrdiff_t>(s);
  const double u = s - static_cast<double>(i);
  auto at = [this](std::ptrdiff_t j) { return values_[static_cast<std::size_t>(j < 0 ? -j : j)]; };
  const double f0 = at(i - 1), f1 = at(i), f2 = at(i + 1), f3 = at(i + 2);
  // Cubic Lagrange through nodes -1, 0, 1, 2.
  return -u * (u - 1) * (u - 2) / 6.0 * f0 + (u + 1) * (u - 1) * (u - 2) / 2.0 * f1 -
         (u + 1) * u * (u - 2) / 2.0 * f2 + (u + 1) * u * (u - 1) / 6.0 * f3;
}

PartitionCheck partition_check(int points, double t_max, int terms) {
  if (points < 2 || !(t_max > 1.0) || terms < 1) throw std::invalid_argument("partition_check: bad grid");
  const Bump q = make_dyadic_cutoff();
  const Bump q0 = make_dyadic_complement();
  PartitionCheck out;
  out.terms = terms;
  out.grid.resize(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double t = 1.0 + (t_max - 1.0) * i / (points - 1);
    out.grid[static_cast<std::size_t>(i)] = t;
    double sum = 0.0;
    double scale = 1.0;
    for (int l = 0; l < terms; ++l) {
      sum += q(t * scale);
      scale *= 0.5;
    }
    const double dev = std::abs(sum - 1.0);
    if (dev > out.max_deviation) {
      out.max_deviation = dev;
      out.worst_t = t;
    }
    if (t > 1.0) out.complement_max = std::max(out.complement_max, std::abs(q0(t)));
  }
  return out;
}

}  // namespace vper
