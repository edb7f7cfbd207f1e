#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace vper {

/// Thrown when an enumeration would exceed its configured element cap.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace nt {

/// Largest integer r with r*r <= s.
std::int64_t isqrt(std::int64_t s);
bool is_square(std::int64_t s);

/// Exact test for s = x1^2 + ... + xk^2 with nonnegative integers xi, 1 <= k <= 4.
bool is_sum_of_squares(std::int64_t s, int k);

/// Sieve of sums of two squares up to a bound. Three and four squares are
/// answered by scanning the last square against the two-square table.
class SquareSumTable {
 public:
  explicit SquareSumTable(std::int64_t bound);

  std::int64_t bound() const { return bound_; }
  bool representable(std::int64_t s, int k) const;
  bool two_squares(std::int64_t s) const { return two_[static_cast<std::size_t>(s)] != 0; }

 private:
  std::int64_t bound_;
  std::vector<std::uint8_t> two_;
};

/// Sorted distinct radii |m|, m in Z^d, up to r_max. Squared radii are exact.
struct LatticeRadii {
  int dimension = 0;
  double r_max = 0.0;
  std::vector<std::int64_t> squared;

  std::size_t size() const { return squared.size(); }
  double radius(std::size_t i) const;
  /// a_{i+1} - a_i, computed without cancellation.
  double gap(std::size_t i) const;
  std::vector<double> gaps() const;

  /// Index of the first radius >= r (size() if none).
  std::size_t lower_index(double r) const;
  /// True when no lattice radius lies in the closed interval [lo, hi].
  bool interval_is_free(double lo, double hi) const;
};

inline constexpr std::size_t kDefaultRadiiCap = 50'000'000;

LatticeRadii radii(int d, double r_max, std::size_t element_cap = kDefaultRadiiCap);

struct DensityRecord {
  std::int64_t n = 0;
  std::int64_t count = 0;
  double eps = 0.0;
};

/// Number of sums of two squares in the closed interval [n, 2n], divided by n.
DensityRecord density_eps(std::int64_t n, std::size_t element_cap = 400'000'000);

/// Band recorded for eps(n) * sqrt(ln n) on n in {1e3, ..., 1e7}.
inline constexpr double kDensityBandLow = 0.70;
inline constexpr double kDensityBandHigh = 0.82;

}  // namespace nt
}  // namespace vper
