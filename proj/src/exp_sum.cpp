#include "vper/exp_sum.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include "vper/quadrature.hpp"

namespace vper::expsum {

namespace {

using quad::kPi;
using quad::kTwoPi;

double frac(double x) { return x - std::floor(x); }

cplx expi_turns(double turns) {
  const double a = kTwoPi * frac(turns);
  return {std::cos(a), std::sin(a)};
}

cplx weight(std::span<const cplx> c, std::size_t k) { return c.empty() ? cplx(1.0, 0.0) : c[k]; }

void check(std::span<const double> mu, std::span<const cplx> c, const Grid& grid) {
  if (!c.empty() && c.size() != mu.size()) throw std::invalid_argument("expsum: weight count mismatch");
  if (!(grid.h > 0)) throw std::invalid_argument("expsum: grid step must be positive");
}

// FFTW planning is not thread safe.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

constexpr int kSpread = 15;      // half-width of the Gaussian spreading stencil, in grid cells
constexpr double kOversample = 2.0;

void nufft_chunk(std::span<const double> mu, std::span<const cplx> c, double u_first, double h, std::size_t J,
                 cplx* out) {
  const std::size_t M = J + (J & 1);  // even mode count
  const std::size_t Mr = static_cast<std::size_t>(kOversample) * M;
  const double tau = kPi * kSpread / (static_cast<double>(M) * M * kOversample * (kOversample - 0.5));
  const double half = static_cast<double>(M / 2);

  fftw_complex* buf = fftw_alloc_complex(Mr);
  if (!buf) throw std::bad_alloc();
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(Mr), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  std::fill(reinterpret_cast<double*>(buf), reinterpret_cast<double*>(buf) + 2 * Mr, 0.0);

  // Output j corresponds to mode j - M/2; fold the shift into the weights.
  const double u_mid = u_first + half * h;
  const double cell = kTwoPi / static_cast<double>(Mr);
  for (std::size_t k = 0; k < mu.size(); ++k) {
    const cplx ck = weight(c, k) * expi_turns(mu[k] * u_mid);
    const double q = frac(mu[k] * h) * static_cast<double>(Mr);
    const auto m0 = static_cast<std::ptrdiff_t>(std::floor(q));
    for (std::ptrdiff_t l = m0 - kSpread + 1; l <= m0 + kSpread; ++l) {
      const double dist = (q - static_cast<double>(l)) * cell;
      const double g = std::exp(-dist * dist / (4.0 * tau));
      auto idx = l % static_cast<std::ptrdiff_t>(Mr);
      if (idx < 0) idx += static_cast<std::ptrdiff_t>(Mr);
      buf[idx][0] += g * ck.real();
      buf[idx][1] += g * ck.imag();
    }
  }
  fftw_execute(plan);
  const double scale = std::sqrt(kPi / tau) / static_cast<double>(Mr);
  for (std::size_t j = 0; j < J; ++j) {
    const double mode = static_cast<double>(j) - half;
    auto idx = static_cast<std::ptrdiff_t>(mode) % static_cast<std::ptrdiff_t>(Mr);
    if (idx < 0) idx += static_cast<std::ptrdiff_t>(Mr);
    const double amp = scale * std::exp(tau * mode * mode);
    out[j] = amp * cplx(buf[idx][0], buf[idx][1]);
  }
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(buf);
}

}  // namespace

std::vector<cplx> direct(std::span<const double> mu, std::span<const cplx> c, const Grid& grid, Exec exec) {
  check(mu, c, grid);
  std::vector<cplx> out(grid.count);
  const auto n = static_cast<std::ptrdiff_t>(grid.count);
  auto one = [&](std::ptrdiff_t j) {
    const double u = grid.u0 + static_cast<double>(j) * grid.h;
    cplx s = 0.0;
    for (std::size_t k = 0; k < mu.size(); ++k) s += weight(c, k) * expi_turns(mu[k] * u);
    out[static_cast<std::size_t>(j)] = s;
  };
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 0; j < n; ++j) one(j);
  } else {
    for (std::ptrdiff_t j = 0; j < n; ++j) one(j);
  }
  return out;
}

std::vector<cplx> nufft(std::span<const double> mu, std::span<const cplx> c, const Grid& grid, std::size_t chunk) {
  check(mu, c, grid);
  if (chunk < 2) throw std::invalid_argument("expsum::nufft: chunk too small");
  std::vector<cplx> out(grid.count);
  for (std::size_t j0 = 0; j0 < grid.count; j0 += chunk) {
    const std::size_t J = std::min(chunk, grid.count - j0);
    nufft_chunk(mu, c, grid.u0 + static_cast<double>(j0) * grid.h, grid.h, J, out.data() + j0);
  }
  return out;
}

std::vector<cplx> evaluate(std::span<const double> mu, std::span<const cplx> c, const Grid& grid) {
  if (mu.size() * grid.count <= 4'000'000 || mu.size() < 64) return direct(mu, c, grid);
  return nufft(mu, c, grid);
}

double l2_moment(std::span<const double> mu, double lo, double hi, Exec exec) {
  if (!(hi > lo)) throw std::invalid_argument("expsum::l2_moment: empty interval");
  const double L = hi - lo, mid = 0.5 * (lo + hi);
  const auto n = static_cast<std::ptrdiff_t>(mu.size());
  // Pair (k, l) and (l, k) together: 4 cos(D mid) sin(D L / 2) / D, limit 2L.
  auto row = [&](std::ptrdiff_t k) {
    double s = 0.0;
    for (std::ptrdiff_t l = k + 1; l < n; ++l) {
      const double D = mu[k] - mu[l];
      const double x = 0.5 * D * L;
      const double sinc = std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
      s += 2.0 * L * std::cos(D * mid) * sinc;
    }
    return s;
  };
  double off = 0.0;
  if (exec == Exec::Parallel) {
#pragma omp parallel for reduction(+ : off) schedule(dynamic, 16)
    for (std::ptrdiff_t k = 0; k < n; ++k) off += row(k);
  } else {
    for (std::ptrdiff_t k = 0; k < n; ++k) off += row(k);
  }
  return static_cast<double>(n) * L + off;
}

double l2_moment_quadrature(std::span<const double> mu, double lo, double hi) {
  if (!(hi > lo)) throw std::invalid_argument("expsum::l2_moment_quadrature: empty interval");
  if (mu.empty()) return 0.0;
  const auto [mn, mx] = std::minmax_element(mu.begin(), mu.end());
  const double spread = *mx - *mn;
  const int panels = 4 + static_cast<int>(std::ceil(2.0 * spread * (hi - lo) / kTwoPi));
  return quad::integrate(
      [&](double xi) {
        cplx s = 0.0;
        for (double m : mu) s += cplx(std::cos(m * xi), std::sin(m * xi));
        return std::norm(s);
      },
      lo, hi, panels, 24);
}

}  // namespace vper::expsum
