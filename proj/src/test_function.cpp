#include "vper/test_function.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "vper/bump.hpp"
#include "vper/number_theory.hpp"
#include "vper/quadrature.hpp"
#include "vper/sphere_measure.hpp"

namespace vper {

namespace {

using quad::kPi;
using quad::kTwoPi;

constexpr int kInterpPoints = 12;
constexpr int kInterpLeft = kInterpPoints / 2 - 1;  // nodes -5..6
constexpr std::size_t kMaxTablePoints = 8'000'000;

// Lagrange weights for nodes -kInterpLeft.. at offset u in [0, 1].
void lagrange_weights(double u, double w[kInterpPoints]) {
  for (int k = 0; k < kInterpPoints; ++k) {
    const double xk = k - kInterpLeft;
    double num = 1.0, den = 1.0;
    for (int j = 0; j < kInterpPoints; ++j) {
      if (j == k) continue;
      const double xj = j - kInterpLeft;
      num *= u - xj;
      den *= xk - xj;
    }
    w[k] = num / den;
  }
}

// max over u in [0,1] of |prod_k (u - x_k)| / kInterpPoints!
double interp_remainder() {
  double best = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    double prod = 1.0;
    for (int k = 0; k < kInterpPoints; ++k) prod *= i / 1000.0 - (k - kInterpLeft);
    best = std::max(best, std::abs(prod));
  }
  return best * 1.001 / std::tgamma(kInterpPoints + 1.0);
}

double lebesgue_constant() {
  double best = 0.0;
  double w[kInterpPoints];
  for (int i = 0; i <= 1000; ++i) {
    lagrange_weights(i / 1000.0, w);
    double s = 0.0;
    for (double v : w) s += std::abs(v);
    best = std::max(best, s);
  }
  return best * 1.001;
}

std::size_t first_node(std::size_t i) { return i > kInterpLeft ? i - kInterpLeft : 0; }

double envelope_tail(const DecayEnvelope& e, int d, double r0) {
  // int_{r0}^inf r^{d-1} A (1+r)^{-s} dr <= A (1+r0)^{d-s} / (s-d)
  return e.A * std::pow(1.0 + r0, d - e.s) / (e.s - d);
}

}  // namespace

// ---------------------------------------------------------------- Gaussian

GaussianProfile::GaussianProfile(int d, double width) : d_(d), w_(width) {
  if (d < 1) throw std::invalid_argument("GaussianProfile: bad dimension");
  if (!(width > 0)) throw std::invalid_argument("GaussianProfile: width must be positive");
  env_.s = 4.0 * d + 40.0;
  // max_r (1+r)^s exp(-pi r^2/w^2): stationary where 2 pi r (1+r) = s w^2.
  const double a = 2.0 * kPi, c = -env_.s * w_ * w_;
  const double r = (-a + std::sqrt(a * a - 4.0 * a * c)) / (2.0 * a);
  env_.A = std::pow(1.0 + r, env_.s) * value(r) * (1.0 + 1e-12);
}

double GaussianProfile::value(double r) const { return std::exp(-kPi * r * r / (w_ * w_)); }

double GaussianProfile::fourier(double rho) const {
  return std::pow(w_, d_) * std::exp(-kPi * w_ * w_ * rho * rho);
}

std::string GaussianProfile::describe() const {
  std::ostringstream os;
  os << "gaussian(d=" << d_ << ",w=" << w_ << ")";
  return os.str();
}

// ---------------------------------------------------------------- Annulus

AnnulusProfile::AnnulusProfile(int d, double lo, double hi, double taper)
    : d_(d), lo_(lo), hi_(hi), taper_(taper) {
  if (d < kMinSphereDim || d > kMaxSphereDim) throw std::invalid_argument("AnnulusProfile: dimension must be in 2..5");
  if (!(lo >= 0) || !(hi > lo)) throw std::invalid_argument("AnnulusProfile: need 0 <= lo < hi");
  if (taper < 0) throw std::invalid_argument("AnnulusProfile: taper must be nonnegative");
  const double mass = quad::integrate([&](double rho) { return shape(rho) * std::pow(rho, d_ - 1); },
                                      lo_, hi_, 16, 24);
  scale_ = 1.0 / (unit_sphere_area(d_) * mass);
  fourier_l1_ = 1.0;  // f_hat >= 0, so int f_hat = f(0) = 1
}

double AnnulusProfile::shape(double rho) const {
  const double hw = 0.5 * (hi_ - lo_);
  const double u = (rho - 0.5 * (lo_ + hi_)) / hw;
  const double w = 1.0 - u * u;
  if (w <= 1.0 / 700.0) return 0.0;
  return std::exp(1.0 - 1.0 / w - 0.5 * taper_ * taper_ * u * u);
}

double AnnulusProfile::fourier(double rho) const {
  return (rho <= lo_ || rho >= hi_) ? 0.0 : scale_ * shape(rho);
}

double AnnulusProfile::value_direct(double r) const {
  const int panels = 4 + static_cast<int>(std::ceil((hi_ - lo_) * r));
  return scale_ * quad::integrate([&](double rho) { return shape(rho) * sigma_hat(d_, rho, r); }, lo_,
                                  hi_, panels, 20);
}

void AnnulusProfile::build_table() const {
  Table t;
  const double omega = kTwoPi * hi_;
  // |f^(k)| <= omega^k int |f_hat|.
  static const double remainder = interp_remainder();
  t.step = std::pow(kInterpTarget / (remainder * fourier_l1_), 1.0 / kInterpPoints) / omega;
  t.interp_error = remainder * std::pow(omega * t.step, kInterpPoints) * fourier_l1_;
  constexpr std::size_t kBlock = 512;
  // Gaussian-tapered profiles decay roughly like exp(-2 pi^2 sigma^2 r^2).
  const double sigma = 0.5 * (hi_ - lo_) / std::max(taper_, 1.0);
  const double min_radius = 1.0 / sigma;
  for (;;) {
    const std::size_t start = t.values.size();
    double block_max = 0.0;
    for (std::size_t i = start; i < start + kBlock; ++i) {
      const double v = value_direct(static_cast<double>(i) * t.step);
      t.values.push_back(v);
      block_max = std::max(block_max, std::abs(v));
    }
    const double r_end = static_cast<double>(t.values.size()) * t.step;
    if (r_end >= min_radius && block_max < kTableFloor) break;
    if (t.values.size() > kMaxTablePoints) {
      throw ResourceLimitError("AnnulusProfile: space-side table exceeds point cap");
    }
  }
  // Guard nodes so interpolation near the end stays inside the table.
  const std::size_t n = t.values.size();
  t.radius = static_cast<double>(n - kInterpPoints + kInterpLeft - 1) * t.step;
  t.suffix_max.assign(n, 0.0);
  double run = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    run = std::max(run, std::abs(t.values[i]));
    t.suffix_max[i] = run;
  }
  // Envelope exponent chosen to minimize the tail it implies beyond the table.
  const double lambda = lebesgue_constant();
  double best_tail = INFINITY;
  for (double s = d_ + 1.0; s <= 4.0 * d_ + 40.0; s += 1.0) {
    double A = (kTableFloor + t.interp_error) * std::pow(1.0 + t.radius, s);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double bound = lambda * t.suffix_max[first_node(i)] + t.interp_error;
      A = std::max(A, bound * std::pow(1.0 + (i + 1) * t.step, s));
      if (t.suffix_max[first_node(i)] < 1e-300) break;
    }
    const DecayEnvelope e{A * (1.0 + 1e-9), s};
    const double tail = envelope_tail(e, d_, t.radius);
    if (tail < best_tail) {
      best_tail = tail;
      t.env = e;
    }
  }
  table_ = std::move(t);
}

const AnnulusProfile::Table& AnnulusProfile::table() const {
  std::call_once(once_, [this] { build_table(); });
  return table_;
}

double AnnulusProfile::value(double r) const {
  r = std::abs(r);
  const Table& t = table();
  if (r >= t.radius) return 0.0;
  const double s = r / t.step;
  const auto i = static_cast<std::ptrdiff_t>(s);
  double w[kInterpPoints];
  lagrange_weights(s - static_cast<double>(i), w);
  double v = 0.0;
  for (int k = 0; k < kInterpPoints; ++k) {
    const std::ptrdiff_t j = i + k - kInterpLeft;
    v += w[k] * t.values[static_cast<std::size_t>(j < 0 ? -j : j)];
  }
  return v;
}

double AnnulusProfile::majorant(double r) const {
  r = std::max(r, 0.0);
  const Table& t = table();
  if (r >= t.radius) return t.env.A * std::pow(1.0 + r, -t.env.s);
  static const double lambda = lebesgue_constant();
  const auto i = static_cast<std::size_t>(r / t.step);
  const double beyond = t.env.A * std::pow(1.0 + t.radius, -t.env.s);
  return lambda * t.suffix_max[first_node(i)] + t.interp_error + beyond;
}

DecayEnvelope AnnulusProfile::envelope() const { return table().env; }
double AnnulusProfile::envelope_radius() const { return table().radius; }
double AnnulusProfile::interpolation_error() const { return table().interp_error; }
double AnnulusProfile::table_radius() const { return table().radius; }

std::string AnnulusProfile::describe() const {
  std::ostringstream os;
  os.precision(10);
  os << "annulus(d=" << d_ << ",lo=" << lo_ << ",hi=" << hi_ << ",taper=" << taper_ << ")";
  return os.str();
}

// ---------------------------------------------------------------- Combination

CombinationProfile::CombinationProfile(std::vector<ProfilePtr> parts, std::vector<double> coeffs)
    : parts_(std::move(parts)), coeffs_(std::move(coeffs)) {
  if (parts_.empty() || parts_.size() != coeffs_.size()) {
    throw std::invalid_argument("CombinationProfile: need matching nonempty parts and coefficients");
  }
  for (const auto& p : parts_) {
    if (!p || p->dimension() != parts_.front()->dimension()) {
      throw std::invalid_argument("CombinationProfile: dimension mismatch");
    }
  }
}

double CombinationProfile::value(double r) const {
  double s = 0.0;
  for (std::size_t i = 0; i < parts_.size(); ++i) s += coeffs_[i] * parts_[i]->value(r);
  return s;
}

double CombinationProfile::fourier(double rho) const {
  double s = 0.0;
  for (std::size_t i = 0; i < parts_.size(); ++i) s += coeffs_[i] * parts_[i]->fourier(rho);
  return s;
}

double CombinationProfile::majorant(double r) const {
  double s = 0.0;
  for (std::size_t i = 0; i < parts_.size(); ++i) s += std::abs(coeffs_[i]) * parts_[i]->majorant(r);
  return s;
}

DecayEnvelope CombinationProfile::envelope() const {
  DecayEnvelope out{0.0, INFINITY};
  for (const auto& p : parts_) out.s = std::min(out.s, p->envelope().s);
  for (std::size_t i = 0; i < parts_.size(); ++i) out.A += std::abs(coeffs_[i]) * parts_[i]->envelope().A;
  return out;
}

std::vector<Interval> CombinationProfile::frequency_support() const {
  std::vector<Interval> out;
  for (const auto& p : parts_) {
    auto s = p->frequency_support();
    if (s.empty()) return {};
    out.insert(out.end(), s.begin(), s.end());
  }
  return out;
}

double CombinationProfile::envelope_radius() const {
  double r = 0.0;
  for (const auto& p : parts_) r = std::max(r, p->envelope_radius());
  return r;
}

double CombinationProfile::value_error() const {
  double e = 0.0;
  for (std::size_t i = 0; i < parts_.size(); ++i) e += std::abs(coeffs_[i]) * parts_[i]->value_error();
  return e;
}

std::string CombinationProfile::describe() const {
  std::ostringstream os;
  os << "sum[";
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (i) os << " + ";
    os << coeffs_[i] << "*" << parts_[i]->describe();
  }
  os << "]";
  return os.str();
}

// ---------------------------------------------------------------- TestFunction

TestFunction::TestFunction(ProfilePtr profile) : profile_(std::move(profile)) {
  if (!profile_) throw std::invalid_argument("TestFunction: null profile");
  shift_.assign(static_cast<std::size_t>(dimension()), 0.0);
  mod_.assign(static_cast<std::size_t>(dimension()), 0.0);
}

namespace {
double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}
}  // namespace

TestFunction TestFunction::translated(std::span<const double> tau) const {
  if (static_cast<int>(tau.size()) != dimension()) throw std::invalid_argument("translated: dimension mismatch");
  TestFunction out = *this;
  // f(x - tau) with f = c e(theta.x) P(|x - s|): new shift s + tau, phase e(-theta.tau).
  double dot = 0.0;
  for (std::size_t i = 0; i < tau.size(); ++i) {
    out.shift_[i] += tau[i];
    dot += mod_[i] * tau[i];
  }
  out.coeff_ *= std::polar(1.0, -kTwoPi * dot);
  out.shift_norm_ = norm(out.shift_);
  return out;
}

TestFunction TestFunction::modulated(std::span<const double> theta) const {
  if (static_cast<int>(theta.size()) != dimension()) throw std::invalid_argument("modulated: dimension mismatch");
  TestFunction out = *this;
  for (std::size_t i = 0; i < theta.size(); ++i) out.mod_[i] += theta[i];
  out.mod_norm_ = norm(out.mod_);
  return out;
}

TestFunction TestFunction::scaled(std::complex<double> c) const {
  TestFunction out = *this;
  out.coeff_ *= c;
  return out;
}

std::complex<double> TestFunction::value(std::span<const double> x) const {
  double r2 = 0.0, phase = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double y = x[i] - shift_[i];
    r2 += y * y;
    phase += mod_[i] * x[i];
  }
  const double p = profile_->value(std::sqrt(r2));
  if (mod_norm_ == 0.0) return coeff_ * p;
  return coeff_ * p * std::polar(1.0, kTwoPi * phase);
}

std::complex<double> TestFunction::fourier(std::span<const double> xi) const {
  // c e^{-2 pi i tau.(xi - theta)} P_hat(|xi - theta|)
  double r2 = 0.0, phase = 0.0;
  for (std::size_t i = 0; i < xi.size(); ++i) {
    const double e = xi[i] - mod_[i];
    r2 += e * e;
    phase += shift_[i] * e;
  }
  const double p = profile_->fourier(std::sqrt(r2));
  if (shift_norm_ == 0.0) return coeff_ * p;
  return coeff_ * p * std::polar(1.0, -kTwoPi * phase);
}

double TestFunction::majorant(double r) const {
  return std::abs(coeff_) * profile_->majorant(std::max(0.0, r - shift_norm_));
}

DecayEnvelope TestFunction::envelope() const {
  DecayEnvelope e = profile_->envelope();
  e.A *= std::abs(coeff_) * std::pow(1.0 + shift_norm_, e.s);
  return e;
}

double TestFunction::envelope_radius() const { return profile_->envelope_radius() + shift_norm_; }

std::vector<Interval> TestFunction::frequency_support() const {
  auto s = profile_->frequency_support();
  for (auto& iv : s) {
    iv.lo = std::max(0.0, iv.lo - mod_norm_);
    iv.hi += mod_norm_;
  }
  return s;
}

std::string TestFunction::describe() const {
  std::ostringstream os;
  os << profile_->describe();
  if (shift_norm_ > 0) os << " shifted|" << shift_norm_ << "|";
  if (mod_norm_ > 0) os << " modulated|" << mod_norm_ << "|";
  if (coeff_ != std::complex<double>(1.0, 0.0)) os << " x" << coeff_;
  return os.str();
}

}  // namespace vper
