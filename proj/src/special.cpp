#include "vper/special.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "vper/quadrature.hpp"

namespace vper::special {

namespace {

using quad::kPi;
constexpr double kEulerGamma = 0.57721566490153286061;

double digamma_int(int n) {  // psi(n) for integer n >= 1
  double s = -kEulerGamma;
  for (int k = 1; k < n; ++k) s += 1.0 / k;
  return s;
}

double j_small(int n, double z);

// J_n(z) by power series, n in {0, 1}.
double j_series(int n, double z) {
  const double x = 0.25 * z * z;
  double term = (n == 0) ? 1.0 : 0.5 * z;
  double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= -x / (static_cast<double>(k) * (k + n));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

// Y_n(z) by the logarithmic series, n in {0, 1}.
double y_series(int n, double z) {
  const double half = 0.5 * z;
  const double x = half * half;
  double head = 0.0;
  if (n == 1) head = -1.0 / (kPi * half);
  // -(1/pi) (z/2)^n sum_k [psi(k+1) + psi(n+k+1)] (-x)^k / (k! (n+k)!)
  double coeff = (n == 0) ? 1.0 : half;  // (z/2)^n / (0! n!)
  double sum = 0.0;
  for (int k = 0; k < 200; ++k) {
    if (k > 0) coeff *= -x / (static_cast<double>(k) * (n + k));
    const double term = (digamma_int(k + 1) + digamma_int(n + k + 1)) * coeff;
    sum += term;
    if (k > 2 && std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return head + (2.0 / kPi) * std::log(half) * j_small(n, z) - sum / kPi;
}

// J_0 and J_1 by Miller's backward recurrence normalized with
// J_0 + 2 sum J_2k = 1; accurate where the power series cancels.
std::pair<double, double> j01_backward(double z) {
  const int top = 2 * static_cast<int>((z + 40.0 + 4.0 * std::sqrt(z)) / 2.0);
  double next = 0.0, cur = 1e-300, j0 = 0.0, j1 = 0.0, norm = 0.0;
  for (int k = top; k >= 1; --k) {
    const double prev = 2.0 * k / z * cur - next;  // J_{k-1}
    next = cur;
    cur = prev;
    if (k - 1 == 1) j1 = cur;
    if (k - 1 == 0) j0 = cur;
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * cur;
    if (std::abs(cur) > 1e250) {
      next *= 1e-250;
      cur *= 1e-250;
      j1 *= 1e-250;
      norm *= 1e-250;
    }
  }
  norm += j0;
  return {j0 / norm, j1 / norm};
}

constexpr double kSeriesLimit = 2.0;

double j_small(int n, double z) {
  if (z < kSeriesLimit) return j_series(n, z);
  const auto [j0, j1] = j01_backward(z);
  return n == 0 ? j0 : j1;
}

double phase(int n, double z) { return z - (0.5 * n + 0.25) * kPi; }

}  // namespace

HankelPQ hankel_pq(double nu, double z) {
  const double mu = 4.0 * nu * nu;
  HankelPQ out{0.0, 0.0};
  double a = 1.0;  // a_k(nu) / z^k
  double prev = INFINITY;
  for (int k = 0; k < 200; ++k) {
    if (k > 0) {
      const double odd = 2.0 * k - 1.0;
      a *= (mu - odd * odd) / (8.0 * k * z);
    }
    const double mag = std::abs(a);
    if (mag == 0.0) {
      // Half-integer orders terminate exactly.
      break;
    }
    if (k > 1 && mag > prev) break;
    const int sign = ((k / 2) % 2 == 0) ? 1 : -1;
    if (k % 2 == 0) out.p += sign * a;
    else out.q += sign * a;
    prev = mag;
    if (mag < 1e-17) break;
  }
  return out;
}

double bessel_j_scaled_series(double nu, double z) {
  // (1/2^nu) sum_k (-z^2/4)^k / (k! Gamma(k + nu + 1))
  const double x = 0.25 * z * z;
  double term = 1.0 / (std::pow(2.0, nu) * std::tgamma(nu + 1.0));
  double sum = term;
  for (int k = 1; k < 300; ++k) {
    term *= -x / (static_cast<double>(k) * (k + nu));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum) && k > 2) break;
  }
  return sum;
}

double bessel_j0(double z) {
  z = std::abs(z);
  if (z < kAsymptoticSwitch) return j_small(0, z);
  const HankelPQ pq = hankel_pq(0.0, z);
  const double w = phase(0, z);
  return std::sqrt(2.0 / (kPi * z)) * (pq.p * std::cos(w) - pq.q * std::sin(w));
}

double bessel_j1(double z) {
  const double sgn = z < 0 ? -1.0 : 1.0;
  z = std::abs(z);
  if (z < kAsymptoticSwitch) return sgn * j_small(1, z);
  const HankelPQ pq = hankel_pq(1.0, z);
  const double w = phase(1, z);
  return sgn * std::sqrt(2.0 / (kPi * z)) * (pq.p * std::cos(w) - pq.q * std::sin(w));
}

double bessel_y0(double z) {
  if (!(z > 0)) throw std::domain_error("bessel_y0: z must be positive");
  if (z < kAsymptoticSwitch) return y_series(0, z);
  const HankelPQ pq = hankel_pq(0.0, z);
  const double w = phase(0, z);
  return std::sqrt(2.0 / (kPi * z)) * (pq.p * std::sin(w) + pq.q * std::cos(w));
}

double bessel_y1(double z) {
  if (!(z > 0)) throw std::domain_error("bessel_y1: z must be positive");
  if (z < kAsymptoticSwitch) return y_series(1, z);
  const HankelPQ pq = hankel_pq(1.0, z);
  const double w = phase(1, z);
  return std::sqrt(2.0 / (kPi * z)) * (pq.p * std::sin(w) + pq.q * std::cos(w));
}

std::complex<double> hankel1_envelope(int n, double z) {
  if (n != 0 && n != 1) throw std::invalid_argument("hankel1_envelope: order must be 0 or 1");
  if (!(z > 0)) throw std::domain_error("hankel1_envelope: z must be positive");
  if (z < kAsymptoticSwitch) {
    const std::complex<double> h(j_small(n, z),
                                 n == 0 ? y_series(0, z) : y_series(1, z));
    return h * std::polar(1.0, -z);
  }
  const HankelPQ pq = hankel_pq(static_cast<double>(n), z);
  return std::sqrt(2.0 / (kPi * z)) * std::complex<double>(pq.p, pq.q) *
         std::polar(1.0, -(0.5 * n + 0.25) * kPi);
}

}  // namespace vper::special
