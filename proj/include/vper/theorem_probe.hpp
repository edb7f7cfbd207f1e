#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vper/norms.hpp"
#include "vper/test_function.hpp"

namespace vper::probe {

/// alpha_p = (d/2)(2 - p)/p for 1 <= p <= 2.
double alpha_exponent(int d, double p);

/// 2d / (d + 2): the open upper end of the admissible p range.
double p_limit(int d);

struct RangeCheck {
  bool in_range = false;
  /// Empty in range; otherwise the reason and, for r outside [p, p'], the family witnessing sharpness.
  std::string annotation;
};

/// d >= 3, 1 <= p < 2d/(d+2), p <= r <= p'.
RangeCheck admissible_range(int d, double p, double r);
bool admissible_range_check(int d, double p, double r);

enum class MemberKind { Annulus, Dilate, Translate, Modulation, Combination };
const char* to_string(MemberKind k);

struct ProbeMember {
  std::string label;
  MemberKind kind = MemberKind::Annulus;
  TestFunction f;
  /// Total width of the radial frequency support.
  double support_width = 0.0;
  bool certified = false;
  std::string certificate{};
  /// check_vanishing is run only when its lattice sum is affordable.
  bool numeric_checked = false;
  bool numeric_pass = false;
  double numeric_max = 0.0;
  norms::NormResult norm_p{};
  norms::NormResult norm_pc{};
  double ratio = 0.0;
  /// Ratio after dilating f_hat to unit support width: ratio * width^(-d(1/p - 1/p')).
  double normalized_ratio = 0.0;
};

struct ProbeOptions {
  int m_lo = 10;
  int m_hi = 30;
  /// Gap kept between each annulus and the lattice spheres around it.
  double margin = 0.01;
  /// Dilates t with t * support still inside the lattice gap.
  std::size_t dilates = 3;
  std::size_t translates = 5;
  std::size_t modulations = 5;
  std::size_t combinations = 5;
  std::uint64_t seed = 1;
  /// Run check_vanishing when lattice terms per point stay below this.
  double numeric_term_cap = 2e5;
  int rotations = 4;
  int grid_per_axis = 3;
  double vanishing_tol = 1e-6;
};

struct ProbeFamily {
  int d = 4;
  double p = 1.0;
  std::vector<ProbeMember> members;
};

/// Annuli between consecutive lattice radii sqrt m, sqrt(m + 1) (d = 4) or between
/// consecutive sums of three squares (d = 3), plus dilates, translates, modulations and combinations.
/// Throws std::invalid_argument quoting the admissible range when p is outside it.
ProbeFamily build_family(int d, double p, const ProbeOptions& opt = {});

struct ProbeReport {
  int d = 0;
  double p = 0.0;
  double p_conjugate = 0.0;
  double max_ratio = 0.0;
  double median_ratio = 0.0;
  double max_normalized = 0.0;
  double median_normalized = 0.0;
  std::size_t certified = 0;
  std::size_t numeric_checked = 0;
  bool pass = false;
  std::vector<std::string> log;
};

/// ||f||_p' / ||f||_p per member; PASS iff every member is certified, every numeric
/// check passes and max <= 10 * median. Throws std::runtime_error naming the first
/// member whose support certification fails.
ProbeReport probe_ratio(ProbeFamily& family);

/// Slope of log(||f_t||_p' / ||f_t||_p) against log t for f_t(x) = f(t x).
double dilation_slope(const ProfilePtr& base, double p, std::span<const double> t);

}  // namespace vper::probe
