#include "vper/number_theory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace vper::nt {

std::int64_t isqrt(std::int64_t s) {
  if (s < 0) throw std::invalid_argument("isqrt: negative argument");
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(s)));
  while (r * r > s) --r;
  while ((r + 1) * (r + 1) <= s) ++r;
  return r;
}

bool is_square(std::int64_t s) {
  if (s < 0) return false;
  const std::int64_t r = isqrt(s);
  return r * r == s;
}

namespace {

bool two_squares_scan(std::int64_t s) {
  for (std::int64_t x = 0; 2 * x * x <= s; ++x) {
    if (is_square(s - x * x)) return true;
  }
  return false;
}

bool scan(std::int64_t s, int k) {
  if (k == 1) return is_square(s);
  if (k == 2) return two_squares_scan(s);
  for (std::int64_t x = 0; x * x <= s; ++x) {
    if (scan(s - x * x, k - 1)) return true;
  }
  return false;
}

void check_k(int k) {
  if (k < 1 || k > 4) {
    throw std::invalid_argument("number of squares must be in 1..4, got " + std::to_string(k));
  }
}

}  // namespace

bool is_sum_of_squares(std::int64_t s, int k) {
  check_k(k);
  if (s < 0) throw std::invalid_argument("is_sum_of_squares: s must be nonnegative");
  return scan(s, k);
}

SquareSumTable::SquareSumTable(std::int64_t bound) : bound_(bound) {
  if (bound < 0) throw std::invalid_argument("SquareSumTable: negative bound");
  two_.assign(static_cast<std::size_t>(bound) + 1, 0);
  for (std::int64_t x = 0; x * x <= bound; ++x) {
    for (std::int64_t y = x; x * x + y * y <= bound; ++y) {
      two_[static_cast<std::size_t>(x * x + y * y)] = 1;
    }
  }
}

bool SquareSumTable::representable(std::int64_t s, int k) const {
  check_k(k);
  if (s < 0 || s > bound_) throw std::out_of_range("SquareSumTable: argument outside sieve bound");
  switch (k) {
    case 1:
      return is_square(s);
    case 2:
      return two_squares(s);
    case 3:
      for (std::int64_t z = 0; z * z <= s; ++z) {
        if (two_squares(s - z * z)) return true;
      }
      return false;
    default:
      for (std::int64_t z = 0; z * z <= s; ++z) {
        for (std::int64_t w = z; z * z + w * w <= s; ++w) {
          if (two_squares(s - z * z - w * w)) return true;
        }
      }
      return false;
  }
}

double LatticeRadii::radius(std::size_t i) const {
  return std::sqrt(static_cast<double>(squared.at(i)));
}

double LatticeRadii::gap(std::size_t i) const {
  const auto lo = static_cast<double>(squared.at(i));
  const auto hi = static_cast<double>(squared.at(i + 1));
  return (hi - lo) / (std::sqrt(hi) + std::sqrt(lo));
}

std::vector<double> LatticeRadii::gaps() const {
  std::vector<double> out;
  if (squared.size() < 2) return out;
  out.reserve(squared.size() - 1);
  for (std::size_t i = 0; i + 1 < squared.size(); ++i) out.push_back(gap(i));
  return out;
}

std::size_t LatticeRadii::lower_index(double r) const {
  if (r <= 0.0) return 0;
  const double r2 = r * r;
  auto it = std::lower_bound(squared.begin(), squared.end(), r2,
                             [](std::int64_t s, double v) { return static_cast<double>(s) < v; });
  // Exact comparison against the squared radius.
  while (it != squared.begin() && std::sqrt(static_cast<double>(*(it - 1))) >= r) --it;
  while (it != squared.end() && std::sqrt(static_cast<double>(*it)) < r) ++it;
  return static_cast<std::size_t>(it - squared.begin());
}

bool LatticeRadii::interval_is_free(double lo, double hi) const {
  if (hi > r_max) throw std::out_of_range("LatticeRadii: interval extends past r_max");
  const std::size_t i = lower_index(lo);
  return i == squared.size() || radius(i) > hi;
}

LatticeRadii radii(int d, double r_max, std::size_t element_cap) {
  if (d < 1) throw std::invalid_argument("radii: dimension must be >= 1");
  if (!(r_max >= 1.0)) throw std::invalid_argument("radii: r_max must be >= 1");
  const long double r2 = static_cast<long double>(r_max) * r_max;
  auto s_max = static_cast<std::int64_t>(std::floor(r2));
  if (static_cast<std::size_t>(s_max) + 1 > element_cap) {
    throw ResourceLimitError("radii: enumeration up to " + std::to_string(s_max) +
                             " exceeds element cap " + std::to_string(element_cap));
  }
  LatticeRadii out;
  out.dimension = d;
  out.r_max = r_max;
  if (d >= 4) {
    out.squared.resize(static_cast<std::size_t>(s_max) + 1);
    for (std::int64_t s = 0; s <= s_max; ++s) out.squared[static_cast<std::size_t>(s)] = s;
    return out;
  }
  if (d == 1) {
    for (std::int64_t x = 0; x * x <= s_max; ++x) out.squared.push_back(x * x);
    return out;
  }
  const SquareSumTable table(s_max);
  for (std::int64_t s = 0; s <= s_max; ++s) {
    if (table.representable(s, d)) out.squared.push_back(s);
  }
  return out;
}

DensityRecord density_eps(std::int64_t n, std::size_t element_cap) {
  if (n < 1) throw std::invalid_argument("density_eps: n must be >= 1");
  if (static_cast<std::size_t>(2 * n) + 1 > element_cap) {
    throw ResourceLimitError("density_eps: sieve bound exceeds element cap");
  }
  const SquareSumTable table(2 * n);
  DensityRecord rec;
  rec.n = n;
  for (std::int64_t s = n; s <= 2 * n; ++s) rec.count += table.two_squares(s) ? 1 : 0;
  rec.eps = static_cast<double>(rec.count) / static_cast<double>(n);
  return rec;
}

}  // namespace vper::nt
