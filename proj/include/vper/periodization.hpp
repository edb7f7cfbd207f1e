#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vper/test_function.hpp"

namespace vper {

/// d x d rotation, row-major.
struct Rotation {
  int dimension = 0;
  std::vector<double> matrix;
  std::uint64_t seed = 0;
  bool identity = false;

  double operator()(int i, int j) const { return matrix[static_cast<std::size_t>(i * dimension + j)]; }
  void apply(const double* in, double* out) const;
  /// max |rho^T rho - I|
  double orthogonality_error() const;
  double determinant() const;
};

Rotation identity_rotation(int d);
/// Haar-distributed rotation from the QR factorization of a seeded Gaussian matrix.
Rotation sample_rotation(int d, std::uint64_t seed);

/// Upper bound on sum over nu in Z^d with |x - nu| > R of |f(rho(x - nu))|, any x.
double lattice_tail_bound(const TestFunction& f, double R);
/// Smallest R (on a 1/64 grid) with lattice_tail_bound(f, R) <= tail_tol.
double lattice_radius_for(const TestFunction& f, double tail_tol);

struct PeriodizeResult {
  std::complex<double> value;
  double radius = 0.0;
  double tail_bound = 0.0;
  /// Accumulated per-term evaluation error bound.
  double evaluation_error = 0.0;
  std::size_t terms = 0;
};

/// g_rho(x) = sum_{nu in Z^d} f(rho(x - nu)), truncated to |x - nu| <= R.
PeriodizeResult periodize(const TestFunction& f, const Rotation& rho, std::span<const double> x,
                          double tail_tol);

enum class Exec { Serial, Parallel };

/// Batched lattice sums at fixed radius. points holds x_0, x_1, ... each of length d.
/// Serial is the reference kernel; Parallel distributes points over OpenMP threads.
std::vector<std::complex<double>> periodize_batch(const TestFunction& f, const Rotation& rho,
                                                  std::span<const double> points, double radius,
                                                  Exec exec = Exec::Parallel,
                                                  std::size_t* terms_out = nullptr);

struct CoefficientCheck {
  std::vector<int> m;
  std::complex<double> coefficient;
  std::complex<double> expected;
  double residual = 0.0;
  int grid = 0;
  double tail_bound = 0.0;
  /// True when |m| is too large for the grid to resolve e^{-2 pi i m.x}.
  bool resolution_warning = false;
};

/// int_{[0,1]^d} g_rho(x) e^{-2 pi i m.x} dx by the tensor trapezoid rule on
/// grid^d points, compared with f_hat(rho m).
CoefficientCheck fourier_coeff_check(const TestFunction& f, const Rotation& rho, std::span<const int> m,
                                     int grid, double tail_tol, Exec exec = Exec::Parallel);

struct SupportCertificate {
  bool certified = false;
  std::string detail;
};

/// Every declared frequency-support interval is free of lattice radii.
SupportCertificate certify_frequency_support(const TestFunction& f);

struct VanishingViolation {
  std::size_t rotation = 0;
  std::vector<double> point;
  double abs_value = 0.0;
};

struct VanishingReport {
  double max_abs = 0.0;
  double budget = 0.0;
  double tol = 0.0;
  bool pass = false;
  std::size_t rotations_used = 0;
  std::size_t points = 0;
  double lattice_radius = 0.0;
  std::size_t terms_per_point = 0;
  /// Radial f: the lattice sums were evaluated once and shared by all rotations.
  bool rotation_invariant = false;
  SupportCertificate support;
  std::size_t worst_rotation = 0;
  std::vector<double> worst_point;
  std::vector<VanishingViolation> violations;
};

/// Evaluates g_rho on the grid for every rotation. PASS iff max |g_rho| <= tol + budget.
VanishingReport check_vanishing(const TestFunction& f, std::span<const Rotation> rotations,
                                std::span<const double> grid_points, double tol, double tail_tol,
                                Exec exec = Exec::Parallel);

/// per_axis^k points on the first k axes of [0,1)^d, offset by half a cell;
/// remaining axes fixed at `rest`.
std::vector<double> cube_grid(int d, int per_axis, int varying_axes, double rest = 0.3183098861837907);

}  // namespace vper
