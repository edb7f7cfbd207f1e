#include "vper/separable.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>

#include "vper/quadrature.hpp"

namespace vper {

namespace {

using quad::kTwoPi;
using cplx = std::complex<double>;

constexpr int kLagrange = 6;

cplx expi_turns(double turns) {
  const double a = kTwoPi * (turns - std::floor(turns));
  return {std::cos(a), std::sin(a)};
}

}  // namespace

BumpTransform::BumpTransform(Bump bump, double x_max, double step)
    : bump_(std::move(bump)), x_max_(x_max), step_(step) {
  if (!bump_.even()) throw std::invalid_argument("BumpTransform: bump must be even");
  if (!(x_max > 0) || !(step > 0)) throw std::invalid_argument("BumpTransform: bad grid");
  const auto n = static_cast<std::size_t>(std::ceil(x_max / step)) + kLagrange;
  values_.resize(n);
  for (std::size_t i = 0; i < n; ++i) values_[i] = direct(static_cast<double>(i) * step);
  const std::size_t tail_start = n - n / 10;
  for (std::size_t i = tail_start; i < n; ++i) tail_peak_ = std::max(tail_peak_, std::abs(values_[i]));
  zeros_ = quad::sign_changes([this](double x) { return (*this)(x); }, step, x_max, step);
}

double BumpTransform::direct(double x) const { return inverse_ft_1d(bump_, x).real(); }

double BumpTransform::operator()(double x) const {
  x = std::abs(x);
  if (x > x_max_) return 0.0;
  const double s = x / step_;
  // Nodes i-2 .. i+3 around s; the table is even, so negative nodes reflect.
  const auto i = static_cast<std::ptrdiff_t>(s);
  const double u = s - static_cast<double>(i);
  double out = 0.0;
  for (int a = -2; a <= 3; ++a) {
    double l = 1.0;
    for (int b = -2; b <= 3; ++b) {
      if (b != a) l *= (u - b) / static_cast<double>(a - b);
    }
    const std::ptrdiff_t j = i + a;
    out += l * values_[static_cast<std::size_t>(j < 0 ? -j : j)];
  }
  return out;
}

double BumpTransform::tail_mass(double p) const {
  // Beyond x_max the transform keeps decaying; charge the last-tenth peak over one more x_max.
  return 2.0 * x_max_ * std::pow(tail_peak_, p);
}

double BumpTransform::lp_pow(double p) const {
  if (!(p > 0)) throw std::invalid_argument("BumpTransform::lp_pow: p must be positive");
  static std::mutex mutex;
  static std::map<std::pair<const BumpTransform*, double>, double> cache;
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find({this, p});
    if (it != cache.end()) return it->second;
  }
  const double half = quad::integrate_abs_pow([this](double x) { return (*this)(x); }, [](double) { return 1.0; },
                                              0.0, x_max_, p, 0.5);
  const double v = 2.0 * half;
  std::lock_guard<std::mutex> lock(mutex);
  cache[{this, p}] = v;
  return v;
}

std::shared_ptr<const BumpTransform> counterexample_bump() {
  static const auto phi =
      std::make_shared<const BumpTransform>(make_bump(0.5, kCounterexampleTaper), 48.0, 0.01);
  return phi;
}

SeparableFunction::SeparableFunction(std::vector<SeparableAxis> axes, std::shared_ptr<const BumpTransform> phi)
    : axes_(std::move(axes)), phi_(std::move(phi)) {
  if (axes_.empty()) throw std::invalid_argument("SeparableFunction: need at least one axis");
  if (!phi_) throw std::invalid_argument("SeparableFunction: missing bump");
  for (const auto& a : axes_) {
    if (!(a.scale > 0)) throw std::invalid_argument("SeparableFunction: scales must be positive");
    if (a.freqs.empty()) throw std::invalid_argument("SeparableFunction: every axis needs a frequency");
    sorted_.push_back(a.freqs);
    std::sort(sorted_.back().begin(), sorted_.back().end());
  }
}

double SeparableFunction::axis_fourier(int j, double x) const {
  const auto& a = axis(j);
  const Bump& b = phi_->bump();
  // Only bumps whose support reaches x contribute.
  const auto& f = sorted_[static_cast<std::size_t>(j)];
  double s = 0.0;
  for (auto it = std::lower_bound(f.begin(), f.end(), x - a.scale * b.hi()); it != f.end() && *it <= x - a.scale * b.lo(); ++it) {
    s += b((x - *it) / a.scale);
  }
  return s;
}

double SeparableFunction::fourier(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dimension()) throw std::invalid_argument("SeparableFunction: dimension mismatch");
  double v = 1.0;
  for (int j = 0; j < dimension() && v != 0.0; ++j) v *= axis_fourier(j, x[j]);
  return v;
}

SeparableFunction::cplx SeparableFunction::exp_sum(int j, double y) const {
  cplx s = 0.0;
  for (double l : axis(j).freqs) s += expi_turns(l * y);
  return s;
}

SeparableFunction::cplx SeparableFunction::axis_value(int j, double y) const {
  const double s = axis(j).scale;
  return s * (*phi_)(s * y) * exp_sum(j, y);
}

SeparableFunction::cplx SeparableFunction::value(std::span<const double> y) const {
  if (static_cast<int>(y.size()) != dimension()) throw std::invalid_argument("SeparableFunction: dimension mismatch");
  cplx v = 1.0;
  for (int j = 0; j < dimension(); ++j) v *= axis_value(j, y[j]);
  return v;
}

double SeparableFunction::min_separation(int j) const {
  const auto& f = sorted_[static_cast<std::size_t>(j)];
  if (f.size() < 2) return std::numeric_limits<double>::infinity();
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < f.size(); ++i) m = std::min(m, f[i + 1] - f[i]);
  return m;
}

std::size_t SeparableFunction::term_count() const {
  std::size_t n = 1;
  for (const auto& a : axes_) n *= a.freqs.size();
  return n;
}

SeparableFunction SeparableFunction::dilated(double t) const {
  if (!(t > 0)) throw std::invalid_argument("SeparableFunction::dilated: t must be positive");
  auto axes = axes_;
  for (auto& a : axes) {
    a.scale *= t;
    for (auto& l : a.freqs) l *= t;
  }
  return SeparableFunction(std::move(axes), phi_);
}

SeparableFunction SeparableFunction::modulated(std::span<const double> theta) const {
  if (static_cast<int>(theta.size()) != dimension()) throw std::invalid_argument("SeparableFunction: dimension mismatch");
  auto axes = axes_;
  for (std::size_t j = 0; j < axes.size(); ++j) {
    for (auto& l : axes[j].freqs) l += theta[j];
  }
  return SeparableFunction(std::move(axes), phi_);
}

}  // namespace vper
