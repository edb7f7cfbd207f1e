#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "report.hpp"

namespace vper::tools {

/// One pass/fail experiment: a short summary line plus machine-readable detail.
struct Check {
  std::string name;
  bool pass = false;
  std::string summary;
  Json detail = Json::object();
  std::vector<std::string> notes;
  double seconds = 0.0;
};

struct SquaresOptions {
  std::int64_t three_limit = 1'000'000;
  std::int64_t four_limit = 100'000;
  /// Every stride-th value is also checked by the per-value exact test.
  std::int64_t oracle_stride = 997;
};
Check three_squares_progression(const SquaresOptions& o = {});
Check four_squares(const SquaresOptions& o = {});

struct DensityOptions {
  std::vector<std::int64_t> ns{1'000, 10'000, 100'000, 1'000'000};
  double band = 1.5;
};
Check density_trend(const DensityOptions& o = {});

struct PartitionOptions {
  int points = 10'000;
  double t_max = 1024.0;
  int terms = 13;
  double tol = 1e-10;
};
Check partition_of_unity(const PartitionOptions& o = {});

struct DecayOptions {
  std::vector<int> dims{2, 3, 4};
  std::vector<int> orders{0, 1};
  double r_lo = 10.0;
  double r_hi = 1000.0;
  double tol = 0.05;
};
Check amplitude_decay(const DecayOptions& o = {});

struct StationaryOptions {
  std::vector<double> centers{0.75, 1.0, 1.25, 1.5};
  double lambda_lo = 1e2;
  double lambda_hi = 1e6;
  int lambda_points = 9;
  std::vector<double> Ns{1.0, 8.0};
  double band = 1.25;
  double far_center = 10.0;
  double min_decay = 2.5;
};
Check stationary_phase(const StationaryOptions& o = {});

struct KernelOptions {
  int d = 3;
  std::vector<int> nus{1, 2, 4, 8, 16};
  int levels = 12;
  double x_lo = 1.0;
  double x_hi = 256.0;
  int samples = 48;
  double band = 3.0;
  double b = 0.125;
};
Check kernel_bounds(const KernelOptions& o = {});

struct PoissonOptions {
  double gaussian_a = 1.0;
  double gaussian_tol = 1e-12;
  int gap_index = 8;
  double shift = 0.125;
  double N = 4.0;
  std::vector<double> y{0.7, 0.2, 0.1, 0.0};
  double factor = 10.0;
};
Check poisson_identity(const PoissonOptions& o = {});

struct VanishingOptions {
  /// Annuli (lo, hi) in d = 4, each strictly between consecutive lattice radii.
  std::vector<std::pair<double, double>> annuli{{0.05, 0.95}, {0.1, 0.9}};
  /// Steeper taper than the profile default: shorter space-side tail, fewer lattice terms.
  double taper = 8.0;
  int rotations = 20;
  int grid_per_axis = 5;
  double tol = 1e-6;
  double tail_tol = 1e-7;
  std::uint64_t seed = 1;
};
Check vanishing_periodization(const VanishingOptions& o = {});

struct PlaneFamilyOptions {
  std::vector<std::int64_t> ns{256, 1024, 4096, 16384};
  double c_delta = 0.25;
  double slope_lo = 0.35;
  double slope_hi = 0.65;
  double band = 1.5;
};
Check plane_family_rates(const PlaneFamilyOptions& o = {});

struct RectangleFamilyOptions {
  int d = 3;
  double p = 1.2;
  double r = 6.0;
  std::vector<std::int64_t> ns{64, 128, 256, 512, 1024, 2048, 4096};
  double rel_tol = 0.15;
  /// Informative second exponent, reported but not judged.
  double r_informative = 12.0;
};
Check rectangle_family_rates(const RectangleFamilyOptions& o = {});

struct SmallBallOptions {
  int d = 3;
  double p = 1.5;
  double r = 1.2;
  std::vector<double> eps{1e-3, 3e-3, 1e-2, 3e-2, 1e-1};
  double rel_tol = 0.05;
};
Check small_ball_exponent(const SmallBallOptions& o = {});

struct PGt2Options {
  int d = 3;
  double p = 3.0;
  double r = 6.0;
  std::vector<std::int64_t> ns{64, 256, 1024, 4096};
  double rel_tol = 0.15;
};
Check p_gt_2_exponent(const PGt2Options& o = {});

struct ProbeCheckOptions {
  int d = 4;
  double p = 1.0;
  int m_lo = 10;
  int m_hi = 30;
  std::size_t dilates = 3;
  std::size_t translates = 5;
  std::size_t modulations = 5;
  std::size_t combinations = 5;
  std::size_t min_members = 30;
  std::uint64_t seed = 1;
};
Check theorem_probe(const ProbeCheckOptions& o = {});

struct MomentOptions {
  int max_terms = 50;
  double tol = 1e-8;
  std::uint64_t seed = 1;
};
Check exp_sum_moment(const MomentOptions& o = {});

}  // namespace vper::tools
