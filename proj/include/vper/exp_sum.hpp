#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "vper/periodization.hpp"

namespace vper::expsum {

using cplx = std::complex<double>;

/// g(u_j) = sum_k c_k exp(2 pi i mu_k u_j) on u_j = u0 + j h, j < count.
/// Empty c means all weights 1.
struct Grid {
  double u0 = 0.0;
  double h = 1.0;
  std::size_t count = 0;
};

/// Reference: one complex exponential per (k, j). Parallel splits j across threads.
std::vector<cplx> direct(std::span<const double> mu, std::span<const cplx> c, const Grid& grid,
                         Exec exec = Exec::Parallel);

/// Gaussian-gridding NUFFT (oversampling 2) on FFTW, processed in chunks of
/// at most chunk points. Absolute error about 1e-12 * sum |c_k|, plus the
/// rounding of the phases mu_k u_j that direct evaluation shares.
std::vector<cplx> nufft(std::span<const double> mu, std::span<const cplx> c, const Grid& grid,
                        std::size_t chunk = std::size_t{1} << 20);

/// Picks direct when |mu| * count is small, nufft otherwise.
std::vector<cplx> evaluate(std::span<const double> mu, std::span<const cplx> c, const Grid& grid);

/// int_lo^hi |sum_k exp(i mu_k xi)|^2 d xi in closed form (angular frequencies).
/// Coincident frequencies contribute their diagonal limit.
double l2_moment(std::span<const double> mu, double lo, double hi, Exec exec = Exec::Parallel);

/// Same integral by Gauss panels resolving the largest frequency gap; oracle for l2_moment.
double l2_moment_quadrature(std::span<const double> mu, double lo, double hi);

}  // namespace vper::expsum
