#pragma once

#include <complex>

namespace vper::special {

/// Argument at which integer-order Bessel evaluation switches from the power
/// series to the Hankel asymptotic expansion. Validated against direct
/// quadrature of the integral representation in the unit tests.
inline constexpr double kAsymptoticSwitch = 15.0;

/// Coefficient sums of the Hankel expansion:
/// H^(1)_nu(z) = sqrt(2/(pi z)) (P + iQ) exp(i (z - nu pi/2 - pi/4)).
struct HankelPQ {
  double p = 1.0;
  double q = 0.0;
};
HankelPQ hankel_pq(double nu, double z);

/// J_nu(z) / z^nu for nu in {0, 1/2, 1, 3/2} by power series; intended for
/// z below kAsymptoticSwitch.
double bessel_j_scaled_series(double nu, double z);

double bessel_j0(double z);
double bessel_j1(double z);
double bessel_y0(double z);
double bessel_y1(double z);

/// H^(1)_n(z) exp(-iz) for n in {0, 1}, z > 0; smooth and non-oscillating.
std::complex<double> hankel1_envelope(int n, double z);

}  // namespace vper::special
