#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "vper/norms.hpp"
#include "vper/separable.hpp"

namespace vper::cex {

/// [x_lo, x_hi] x [-h_2, h_2] x ... between the spheres of squared radii a2 < ap2.
struct AnnulusRectangle {
  int d = 2;
  double x_lo = 0.0;
  double x_hi = 0.0;
  std::vector<double> half_widths;  // axes 2..d
  std::int64_t a2 = 0;
  std::int64_t ap2 = 0;

  /// x_lo^2 >= a2 and x_hi^2 + sum h^2 <= ap2, in long double.
  bool contained() const;
  /// Same test, strict.
  bool strictly_contained() const;
};

/// Bumps fill this fraction of their rectangle on every axis.
inline constexpr double kBumpFill = 0.9;
/// Transverse half-width of the d = 2 rectangles.
inline constexpr double kPlaneHalfWidth = 0.5;
inline constexpr double kDefaultCDelta = 0.25;

struct PlaneFamilyBuild {
  SeparableFunction f;
  std::int64_t n = 0;
  double c_delta = 0.0;
  double eps_n = 0.0;
  double delta = 0.0;
  std::size_t radii_in_range = 0;  // a_m in [sqrt n, 2 sqrt n]
  std::size_t m_count = 0;         // |M|
  std::size_t N = 0;               // number of small rectangles
  double sum_delta_M = 0.0;        // sum over M of delta_m
  double min_separation = 0.0;
  std::vector<AnnulusRectangle> rectangles{};  // bump supports, one per lambda_k
  std::vector<std::string> log{};
};

/// d = 2 family with frequencies in the annuli between consecutive sums of two squares.
/// Throws std::domain_error when M is empty.
PlaneFamilyBuild build_plane_family(std::int64_t n, double c_delta = kDefaultCDelta);

struct RectangleFamilyBuild {
  SeparableFunction f;
  std::int64_t n = 0;
  int d = 0;
  double width = 0.0;       // common axis-1 rectangle width
  double half_width = 0.0;  // transverse half-width
  std::vector<AnnulusRectangle> rectangles{};
  std::vector<std::string> log{};
};

/// n parallel rectangles between sqrt(n + k) and sqrt(n + k + 1), k < n.
RectangleFamilyBuild build_rectangle_family(std::int64_t n, int d);

struct SmallBallBuild {
  SeparableFunction f;
  std::vector<double> x0;
  double eps = 0.0;
  std::int64_t a2 = 0;   // squared inner lattice radius
  std::int64_t ap2 = 0;  // squared outer lattice radius
};

/// f_hat = phi_d((x - x0) / eps) with phi_d a product bump inside the unit ball.
/// Rejects balls that meet a lattice-radius sphere or eps > gap / 4.
SmallBallBuild build_small_ball(std::span<const double> x0, double eps);

/// Samples f_hat on every lattice-radius sphere of radius <= r_max (points per
/// sphere) and returns max |f_hat| seen; 0 certifies the sample.
double lattice_sphere_sample(const SeparableFunction& f, double r_max, int points, std::uint64_t seed = 1);

struct NormEntry {
  double p = 0.0;
  double value = 0.0;
  std::string method;
  double budget = 0.0;
};

struct Prediction {
  std::string formula;
  double exponent = 0.0;
  double fitted_constant = 0.0;
};

struct CounterexampleReport {
  std::string family;  // plane | rectangle | small_ball | p_gt_2
  std::map<std::string, double> params;
  std::vector<NormEntry> norms;
  std::vector<Prediction> predicted;
  std::string verdict;
  bool partial = false;
  std::vector<std::string> log{};
};

/// ||f||_p, ||f||_r and the lower-bound witness for ||f||_{p'}: |f(0)| when
/// p' = infinity, otherwise the p'-norm over the window |y_1| <= 1/(100 pi max|lambda|).
CounterexampleReport norms_report(const SeparableFunction& f, double p, double r, const std::string& family);

/// Rectangle family reused for p > 2: ||f_hat||_{p'} two ways, ||f||_r measured.
struct PGt2Result {
  CounterexampleReport report;
  double fhat_pnorm_exact = 0.0;   // disjoint supports
  double fhat_pnorm_direct = 0.0;  // frequency-side quadrature
  double r_norm = 0.0;
  double ratio = 0.0;              // ||f||_r / ||f_hat||_{p'}
};
PGt2Result build_p_gt_2(std::int64_t n, int d, double p, double r);

/// norms_report plus the family's predicted bounds, each with its fitted constant.
CounterexampleReport report_plane_family(const PlaneFamilyBuild& b, double p, double r);
CounterexampleReport report_rectangle_family(const RectangleFamilyBuild& b, double p, double r);
CounterexampleReport report_small_ball(const SmallBallBuild& b, double p, double r);

/// 1/p + 1/p' = 1.
double conjugate(double p);

/// Least-squares slope of log y against log x.
double fit_exponent(std::span<const double> x, std::span<const double> y);

}  // namespace vper::cex
