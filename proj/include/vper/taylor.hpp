#pragma once

#include <array>
#include <cmath>

namespace vper {

/// Truncated Taylor series c_0 + c_1 h + ... + c_K h^K of a function at a point.
/// Arithmetic propagates derivatives through +, -, *, / and exp; the k-th
/// derivative is c_k * k!.
template <int K>
struct Taylor {
  std::array<double, K + 1> c{};

  static constexpr int order = K;

  static Taylor constant(double v) {
    Taylor t;
    t.c[0] = v;
    return t;
  }
  static Taylor variable(double v) {
    Taylor t;
    t.c[0] = v;
    if constexpr (K >= 1) t.c[1] = 1.0;
    return t;
  }

  double value() const { return c[0]; }
  double derivative(int k) const {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return c[k] * f;
  }

  Taylor& operator+=(const Taylor& o) {
    for (int i = 0; i <= K; ++i) c[i] += o.c[i];
    return *this;
  }
  Taylor& operator-=(const Taylor& o) {
    for (int i = 0; i <= K; ++i) c[i] -= o.c[i];
    return *this;
  }
  Taylor& operator*=(double s) {
    for (auto& v : c) v *= s;
    return *this;
  }
  Taylor& operator+=(double s) {
    c[0] += s;
    return *this;
  }

  friend Taylor operator+(Taylor a, const Taylor& b) { return a += b; }
  friend Taylor operator-(Taylor a, const Taylor& b) { return a -= b; }
  friend Taylor operator+(Taylor a, double s) { return a += s; }
  friend Taylor operator+(double s, Taylor a) { return a += s; }
  friend Taylor operator-(Taylor a, double s) { return a += -s; }
  friend Taylor operator-(double s, const Taylor& a) {
    Taylor r = -a;
    r.c[0] += s;
    return r;
  }
  friend Taylor operator*(Taylor a, double s) { return a *= s; }
  friend Taylor operator*(double s, Taylor a) { return a *= s; }
  friend Taylor operator/(Taylor a, double s) { return a *= 1.0 / s; }
  Taylor operator-() const {
    Taylor r = *this;
    for (auto& v : r.c) v = -v;
    return r;
  }

  friend Taylor operator*(const Taylor& a, const Taylor& b) {
    Taylor r;
    for (int k = 0; k <= K; ++k) {
      double s = 0.0;
      for (int i = 0; i <= k; ++i) s += a.c[i] * b.c[k - i];
      r.c[k] = s;
    }
    return r;
  }

  friend Taylor reciprocal(const Taylor& a) {
    Taylor r;
    r.c[0] = 1.0 / a.c[0];
    for (int k = 1; k <= K; ++k) {
      double s = 0.0;
      for (int i = 1; i <= k; ++i) s += a.c[i] * r.c[k - i];
      r.c[k] = -s * r.c[0];
    }
    return r;
  }

  friend Taylor operator/(const Taylor& a, const Taylor& b) { return a * reciprocal(b); }

  friend Taylor exp(const Taylor& a) {
    Taylor r;
    r.c[0] = std::exp(a.c[0]);
    for (int k = 1; k <= K; ++k) {
      double s = 0.0;
      for (int i = 1; i <= k; ++i) s += i * a.c[i] * r.c[k - i];
      r.c[k] = s / k;
    }
    return r;
  }
};

inline constexpr int kMaxDerivative = 8;
using Jet = Taylor<kMaxDerivative>;

}  // namespace vper
