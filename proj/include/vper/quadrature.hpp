#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <type_traits>
#include <vector>

namespace vper::quad {

/// Gauss-Legendre rule on [-1, 1].
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int size() const { return static_cast<int>(nodes.size()); }
};

/// Cached n-point rule, 1 <= n <= 256. Thread safe.
const Rule& gauss_legendre(int n);

/// Composite Gauss-Legendre on [lo, hi] split into equal panels.
template <class F>
auto integrate(F&& f, double lo, double hi, int panels, int order = 20) {
  const Rule& rule = gauss_legendre(order);
  using R = decltype(f(lo));
  R sum{};
  const double h = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (p + 0.5) * h;
    R part{};
    for (int i = 0; i < rule.size(); ++i) part += rule.weights[i] * f(mid + 0.5 * h * rule.nodes[i]);
    sum += part * (0.5 * h);
  }
  return sum;
}

/// Composite Gauss-Legendre over explicit panel breakpoints.
template <class F>
auto integrate_breaks(F&& f, std::span<const double> breaks, int order = 20) {
  const Rule& rule = gauss_legendre(order);
  using R = decltype(f(breaks[0]));
  R sum{};
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double h = breaks[p + 1] - breaks[p];
    const double mid = 0.5 * (breaks[p] + breaks[p + 1]);
    R part{};
    for (int i = 0; i < rule.size(); ++i) part += rule.weights[i] * f(mid + 0.5 * h * rule.nodes[i]);
    sum += part * (0.5 * h);
  }
  return sum;
}

/// Nodes and weights of a composite rule, flattened.
struct NodeSet {
  std::vector<double> x;
  std::vector<double> w;
};
NodeSet composite(double lo, double hi, int panels, int order = 20);

/// Least-squares slope and intercept of y against x, with R^2.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Log-log fit of y against x (both positive).
LineFit fit_loglog(std::span<const double> x, std::span<const double> y);

/// Neumaier compensated sum; complex values are compensated per component.
class CompensatedReal {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) comp_ += (sum_ - t) + v;
    else comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

template <class T>
class CompensatedSum {
 public:
  void add(T v) {
    if constexpr (std::is_same_v<T, double>) {
      re_.add(v);
    } else {
      re_.add(v.real());
      im_.add(v.imag());
    }
  }
  T value() const {
    if constexpr (std::is_same_v<T, double>) return re_.value();
    else return T(re_.value(), im_.value());
  }

 private:
  CompensatedReal re_;
  CompensatedReal im_;
};

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Sign changes of a real f on a grid of the given step over [lo, hi], each
/// refined by bisection to roundoff.
template <class F>
std::vector<double> sign_changes(F&& f, double lo, double hi, double step) {
  std::vector<double> roots;
  const int n = std::max(1, static_cast<int>(std::ceil((hi - lo) / step)));
  double x0 = lo, f0 = f(lo);
  for (int i = 1; i <= n; ++i) {
    const double x1 = i == n ? hi : lo + (hi - lo) * i / n;
    const double f1 = f(x1);
    if ((f0 < 0 && f1 > 0) || (f0 > 0 && f1 < 0)) {
      double a = x0, b = x1, fa = f0;
      for (int it = 0; it < 80 && b - a > 4e-16 * std::max(1.0, std::abs(a)); ++it) {
        const double m = 0.5 * (a + b), fm = f(m);
        if ((fm < 0) == (fa < 0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    x0 = x1;
    f0 = f1;
  }
  return roots;
}

/// int_lo^hi w(x) |f(x)|^p dx for real f; the zeros of f become panel breaks,
/// so the integrand is smooth on every panel. Panels are at most `step` wide.
template <class F, class W>
double integrate_abs_pow(F&& f, W&& w, double lo, double hi, double p, double step, int order = 20) {
  std::vector<double> cuts{lo};
  for (double r : sign_changes(f, lo, hi, step)) cuts.push_back(r);
  cuts.push_back(hi);
  std::vector<double> breaks{lo};
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const int k = std::max(1, static_cast<int>(std::ceil((cuts[i + 1] - cuts[i]) / step)));
    for (int j = 1; j <= k; ++j) breaks.push_back(j == k ? cuts[i + 1] : cuts[i] + (cuts[i + 1] - cuts[i]) * j / k);
  }
  return integrate_breaks([&](double x) { return w(x) * std::pow(std::abs(f(x)), p); }, breaks, order);
}

}  // namespace vper::quad
