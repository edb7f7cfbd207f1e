#pragma once

#include <complex>
#include <span>

namespace vper {

// Fourier convention throughout: f_hat(xi) = int f(x) exp(-2 pi i x.xi) dx.

inline constexpr int kMinSphereDim = 2;
inline constexpr int kMaxSphereDim = 5;
/// Largest t*r for which sigma_hat accuracy (1e-9 absolute) is validated.
inline constexpr double kSigmaValidatedRange = 1e3;
inline constexpr double kDefaultAmplitudeRmin = 0.5;

/// Surface area of the unit sphere S^{d-1}.
double unit_sphere_area(int d);

/// Fourier transform of surface measure on the radius-t sphere in R^d, at
/// any point of norm r.
double sigma_hat(int d, double t, double r);

struct SigmaValue {
  double value = 0.0;
  /// false once t*r exceeds kSigmaValidatedRange.
  bool validated = true;
};
SigmaValue sigma_hat_checked(int d, double t, double r);

/// a(r) with sigma_hat(d, 1, r) = Re(a(r) exp(2 pi i r)); throws for r < r_min.
std::complex<double> amplitude(int d, double r, double r_min = kDefaultAmplitudeRmin);

struct DecayFit {
  int dimension = 0;
  int order = 0;
  /// Fitted beta in |a^{(k)}(r)| ~ C r^{-beta}.
  double exponent = 0.0;
  double expected = 0.0;
  double r2 = 0.0;
  bool fit_ok = true;  ///< r2 >= 0.99
};

/// Decay exponent of the k-th derivative of a(r), k <= 3, from finite
/// differences on a log-spaced grid over [r_lo, r_hi].
DecayFit amplitude_derivative_decay(int d, int k, double r_lo = 10.0, double r_hi = 1000.0,
                                    int points = 41);

/// Radial evaluator bound to a dimension and radius.
class SphereFT {
 public:
  explicit SphereFT(int d, double r_min = kDefaultAmplitudeRmin);

  int dimension() const { return d_; }
  double r_min() const { return r_min_; }
  double value(double t, std::span<const double> x) const;
  double value_radial(double t, double r) const { return sigma_hat(d_, t, r); }
  std::complex<double> amp(double r) const { return amplitude(d_, r, r_min_); }

 private:
  int d_;
  double r_min_;
};

}  // namespace vper
