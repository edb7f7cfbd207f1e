#include "vper/periodization.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "vper/number_theory.hpp"
#include "vper/quadrature.hpp"
#include "vper/sphere_measure.hpp"

namespace vper {

namespace {

using quad::kPi;
using quad::kTwoPi;

constexpr int kMaxLatticeDim = 8;

void check_lattice_dim(int d) {
  if (d < 1 || d > kMaxLatticeDim) throw std::invalid_argument("periodization: dimension must be in 1..8");
}

double sphere_area_any(int d) { return 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d); }

// Calls visit(y, r2) for every y = x - nu, nu in Z^d, with |y|^2 <= R2.
template <class Visit>
void for_each_lattice_offset(int d, const double* x, double R2, Visit&& visit) {
  double y[kMaxLatticeDim];
  double partial[kMaxLatticeDim + 1];
  long lo[kMaxLatticeDim], hi[kMaxLatticeDim], cur[kMaxLatticeDim];
  partial[0] = 0.0;
  int k = 0;
  auto open = [&](int level) {
    const double rem = R2 - partial[level];
    const double w = std::sqrt(std::max(rem, 0.0));
    lo[level] = static_cast<long>(std::ceil(x[level] - w));
    hi[level] = static_cast<long>(std::floor(x[level] + w));
    cur[level] = lo[level];
  };
  open(0);
  while (k >= 0) {
    if (cur[k] > hi[k]) {
      --k;
      if (k >= 0) ++cur[k];
      continue;
    }
    y[k] = x[k] - static_cast<double>(cur[k]);
    partial[k + 1] = partial[k] + y[k] * y[k];
    if (partial[k + 1] > R2) {
      ++cur[k];
      continue;
    }
    if (k == d - 1) {
      visit(static_cast<const double*>(y), partial[k + 1]);
      ++cur[k];
    } else {
      ++k;
      open(k);
    }
  }
}

struct PointSum {
  std::complex<double> value;
  std::size_t terms = 0;
};

PointSum lattice_sum(const TestFunction& f, const Rotation& rho, const double* x, double R) {
  const int d = f.dimension();
  const double R2 = R * R;
  PointSum out;
  if (f.is_radial()) {
    // |rho y| = |y| for orthogonal rho.
    const RadialProfile& p = f.profile();
    double s = 0.0;
    std::size_t n = 0;
    for_each_lattice_offset(d, x, R2, [&](const double*, double r2) {
      s += p.value(std::sqrt(r2));
      ++n;
    });
    out.value = f.coefficient() * s;
    out.terms = n;
    return out;
  }
  std::complex<double> s = 0.0;
  std::size_t n = 0;
  double z[kMaxLatticeDim];
  for_each_lattice_offset(d, x, R2, [&](const double* y, double) {
    if (rho.identity) {
      s += f.value(std::span<const double>(y, static_cast<std::size_t>(d)));
    } else {
      rho.apply(y, z);
      s += f.value(std::span<const double>(z, static_cast<std::size_t>(d)));
    }
    ++n;
  });
  out.value = s;
  out.terms = n;
  return out;
}

double vec_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

void Rotation::apply(const double* in, double* out) const {
  for (int i = 0; i < dimension; ++i) {
    double s = 0.0;
    for (int j = 0; j < dimension; ++j) s += (*this)(i, j) * in[j];
    out[i] = s;
  }
}

double Rotation::orthogonality_error() const {
  double err = 0.0;
  for (int i = 0; i < dimension; ++i) {
    for (int j = 0; j < dimension; ++j) {
      double s = 0.0;
      for (int k = 0; k < dimension; ++k) s += (*this)(k, i) * (*this)(k, j);
      err = std::max(err, std::abs(s - (i == j ? 1.0 : 0.0)));
    }
  }
  return err;
}

double Rotation::determinant() const {
  Eigen::MatrixXd m(dimension, dimension);
  for (int i = 0; i < dimension; ++i)
    for (int j = 0; j < dimension; ++j) m(i, j) = (*this)(i, j);
  return m.determinant();
}

Rotation identity_rotation(int d) {
  check_lattice_dim(d);
  Rotation r;
  r.dimension = d;
  r.matrix.assign(static_cast<std::size_t>(d * d), 0.0);
  for (int i = 0; i < d; ++i) r.matrix[static_cast<std::size_t>(i * d + i)] = 1.0;
  r.identity = true;
  return r;
}

Rotation sample_rotation(int d, std::uint64_t seed) {
  if (d < 2) throw std::invalid_argument("sample_rotation: d must be >= 2");
  check_lattice_dim(d);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::MatrixXd a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = g(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd rr = qr.matrixQR().triangularView<Eigen::Upper>();
  // Sign fix makes the factorization unique, hence Haar distributed.
  for (int j = 0; j < d; ++j) {
    if (rr(j, j) < 0) q.col(j) *= -1.0;
  }
  if (q.determinant() < 0) q.col(0) *= -1.0;
  Rotation r;
  r.dimension = d;
  r.seed = seed;
  r.matrix.resize(static_cast<std::size_t>(d * d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) r.matrix[static_cast<std::size_t>(i * d + j)] = q(i, j);
  return r;
}

double lattice_tail_bound(const TestFunction& f, double R) {
  const int d = f.dimension();
  check_lattice_dim(d);
  const DecayEnvelope env = f.envelope();
  if (!(env.s > d)) {
    std::ostringstream os;
    os << "lattice_tail_bound: decay exponent s=" << env.s << " must exceed d=" << d;
    throw std::invalid_argument(os.str());
  }
  // Each omitted nu owns the cube nu + [-1/2,1/2]^d, whose points y satisfy
  // |y - (x - nu)| <= h; M nonincreasing gives M(|x - nu|) <= M(|x - y| - h).
  const double h = 0.5 * std::sqrt(static_cast<double>(d));
  const double area = sphere_area_any(d);
  const double a0 = std::max(R - h, 0.0);
  const double e = std::max(f.envelope_radius() + h, a0);
  double total = 0.0;
  constexpr double kCell = 0.01;
  for (double a = a0; a < e; a += kCell) {
    const double b = std::min(a + kCell, e);
    total += f.majorant(std::max(a - h, 0.0)) * area * (std::pow(b, d) - std::pow(a, d)) / d;
  }
  // Envelope part: r^{d-1} <= max(1,h)^{d-1} (1 + r - h)^{d-1}.
  total += area * env.A * std::pow(std::max(1.0, h), d - 1) * std::pow(1.0 + e - h, d - env.s) /
           (env.s - d);
  return total;
}

double lattice_radius_for(const TestFunction& f, double tail_tol) {
  if (!(tail_tol > 0)) throw std::invalid_argument("tail_tol must be positive");
  const double h = 0.5 * std::sqrt(static_cast<double>(f.dimension()));
  double lo = h, hi = std::max(2.0 * h, 1.0);
  while (lattice_tail_bound(f, hi) > tail_tol) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e4) throw ResourceLimitError("lattice_radius_for: tail tolerance not reachable");
  }
  while (hi - lo > 1.0 / 64.0) {
    const double mid = 0.5 * (lo + hi);
    (lattice_tail_bound(f, mid) > tail_tol ? lo : hi) = mid;
  }
  return hi;
}

PeriodizeResult periodize(const TestFunction& f, const Rotation& rho, std::span<const double> x,
                          double tail_tol) {
  if (static_cast<int>(x.size()) != f.dimension() || rho.dimension != f.dimension()) {
    throw std::invalid_argument("periodize: dimension mismatch");
  }
  PeriodizeResult out;
  out.radius = lattice_radius_for(f, tail_tol);
  out.tail_bound = lattice_tail_bound(f, out.radius);
  const PointSum s = lattice_sum(f, rho, x.data(), out.radius);
  out.value = s.value;
  out.terms = s.terms;
  out.evaluation_error = static_cast<double>(s.terms) * f.value_error();
  return out;
}

std::vector<std::complex<double>> periodize_batch(const TestFunction& f, const Rotation& rho,
                                                  std::span<const double> points, double radius,
                                                  Exec exec, std::size_t* terms_out) {
  const auto d = static_cast<std::size_t>(f.dimension());
  if (points.size() % d != 0 || rho.dimension != f.dimension()) {
    throw std::invalid_argument("periodize_batch: dimension mismatch");
  }
  const auto n = static_cast<std::ptrdiff_t>(points.size() / d);
  std::vector<std::complex<double>> out(static_cast<std::size_t>(n));
  std::size_t max_terms = 0;
  if (exec == Exec::Serial) {
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const PointSum s = lattice_sum(f, rho, points.data() + i * static_cast<std::ptrdiff_t>(d), radius);
      out[static_cast<std::size_t>(i)] = s.value;
      max_terms = std::max(max_terms, s.terms);
    }
  } else {
#pragma omp parallel for schedule(dynamic) reduction(max : max_terms)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const PointSum s = lattice_sum(f, rho, points.data() + i * static_cast<std::ptrdiff_t>(d), radius);
      out[static_cast<std::size_t>(i)] = s.value;
      max_terms = std::max(max_terms, s.terms);
    }
  }
  if (terms_out) *terms_out = max_terms;
  return out;
}

CoefficientCheck fourier_coeff_check(const TestFunction& f, const Rotation& rho, std::span<const int> m,
                                     int grid, double tail_tol, Exec exec) {
  const int d = f.dimension();
  if (static_cast<int>(m.size()) != d) throw std::invalid_argument("fourier_coeff_check: dimension mismatch");
  if (grid < 1) throw std::invalid_argument("fourier_coeff_check: grid must be positive");
  const double total = std::pow(static_cast<double>(grid), d);
  if (total > 2e6) throw ResourceLimitError("fourier_coeff_check: grid^d exceeds 2e6 points");
  CoefficientCheck out;
  out.m.assign(m.begin(), m.end());
  out.grid = grid;
  std::vector<double> mv(m.begin(), m.end());
  const double mnorm = vec_norm(mv);
  // Trapezoid aliasing picks up f_hat(rho(m + grid k)), k != 0, with |m + grid k| >= grid - |m|.
  const auto support = f.frequency_support();
  double reach = 6.0;
  if (!support.empty()) {
    reach = 0.0;
    for (const auto& iv : support) reach = std::max(reach, iv.hi);
  }
  out.resolution_warning = grid <= reach + mnorm;

  const auto n = static_cast<std::size_t>(total);
  std::vector<double> pts(n * static_cast<std::size_t>(d));
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  for (std::size_t p = 0; p < n; ++p) {
    std::size_t q = p;
    for (int k = 0; k < d; ++k) {
      pts[p * static_cast<std::size_t>(d) + static_cast<std::size_t>(k)] =
          static_cast<double>(q % static_cast<std::size_t>(grid)) / grid;
      q /= static_cast<std::size_t>(grid);
    }
  }
  const double R = lattice_radius_for(f, tail_tol);
  out.tail_bound = lattice_tail_bound(f, R);
  const auto g = periodize_batch(f, rho, pts, R, exec);
  quad::CompensatedSum<std::complex<double>> acc;
  for (std::size_t p = 0; p < n; ++p) {
    double phase = 0.0;
    for (int k = 0; k < d; ++k) phase += m[static_cast<std::size_t>(k)] * pts[p * static_cast<std::size_t>(d) + static_cast<std::size_t>(k)];
    acc.add(g[p] * std::polar(1.0, -kTwoPi * phase));
  }
  out.coefficient = acc.value() / total;
  std::vector<double> rm(static_cast<std::size_t>(d));
  rho.apply(mv.data(), rm.data());
  out.expected = f.fourier(rm);
  out.residual = std::abs(out.coefficient - out.expected);
  return out;
}

SupportCertificate certify_frequency_support(const TestFunction& f) {
  SupportCertificate c;
  const auto support = f.frequency_support();
  if (support.empty()) {
    c.detail = "frequency support is unbounded";
    return c;
  }
  double top = 1.0;
  for (const auto& iv : support) top = std::max(top, iv.hi + 1.0);
  const nt::LatticeRadii radii = nt::radii(f.dimension(), top);
  std::ostringstream os;
  os.precision(12);
  for (const auto& iv : support) {
    if (!radii.interval_is_free(iv.lo, iv.hi)) {
      const std::size_t i = radii.lower_index(iv.lo);
      os << "interval [" << iv.lo << ", " << iv.hi << "] contains lattice radius sqrt(" << radii.squared[i] << ")";
      c.detail = os.str();
      return c;
    }
  }
  c.certified = true;
  os << support.size() << " support interval(s) free of lattice radii";
  c.detail = os.str();
  return c;
}

VanishingReport check_vanishing(const TestFunction& f, std::span<const Rotation> rotations,
                                std::span<const double> grid_points, double tol, double tail_tol, Exec exec) {
  const auto d = static_cast<std::size_t>(f.dimension());
  if (rotations.empty()) throw std::invalid_argument("check_vanishing: no rotations");
  if (grid_points.empty() || grid_points.size() % d != 0) throw std::invalid_argument("check_vanishing: bad grid");
  VanishingReport rep;
  rep.tol = tol;
  rep.support = certify_frequency_support(f);
  rep.lattice_radius = lattice_radius_for(f, tail_tol);
  const double tail = lattice_tail_bound(f, rep.lattice_radius);
  rep.points = grid_points.size() / d;
  rep.rotations_used = rotations.size();
  std::vector<VanishingViolation> all;
  // Radial f: g_rho does not depend on rho, so one batch serves every rotation.
  rep.rotation_invariant = f.is_radial();
  std::vector<std::complex<double>> g;
  for (std::size_t r = 0; r < rotations.size(); ++r) {
    if (r == 0 || !rep.rotation_invariant) {
      std::size_t terms = 0;
      g = periodize_batch(f, rotations[r], grid_points, rep.lattice_radius, exec, &terms);
      rep.terms_per_point = std::max(rep.terms_per_point, terms);
    }
    for (std::size_t p = 0; p < g.size(); ++p) {
      const double a = std::abs(g[p]);
      std::vector<double> pt(grid_points.begin() + static_cast<std::ptrdiff_t>(p * d),
                             grid_points.begin() + static_cast<std::ptrdiff_t>((p + 1) * d));
      if (a > rep.max_abs || (r == 0 && p == 0)) {
        rep.max_abs = a;
        rep.worst_rotation = r;
        rep.worst_point = pt;
      }
      all.push_back({r, std::move(pt), a});
    }
  }
  rep.budget = tail + static_cast<double>(rep.terms_per_point) * f.value_error();
  for (auto& v : all) {
    if (v.abs_value > tol + rep.budget) rep.violations.push_back(std::move(v));
  }
  rep.pass = rep.support.certified && rep.violations.empty();
  return rep;
}

std::vector<double> cube_grid(int d, int per_axis, int varying_axes, double rest) {
  if (d < 1 || per_axis < 1 || varying_axes < 0 || varying_axes > d) {
    throw std::invalid_argument("cube_grid: bad arguments");
  }
  std::size_t n = 1;
  for (int k = 0; k < varying_axes; ++k) n *= static_cast<std::size_t>(per_axis);
  std::vector<double> out;
  out.reserve(n * static_cast<std::size_t>(d));
  for (std::size_t p = 0; p < n; ++p) {
    std::size_t q = p;
    for (int k = 0; k < d; ++k) {
      if (k < varying_axes) {
        out.push_back((static_cast<double>(q % static_cast<std::size_t>(per_axis)) + 0.5) / per_axis);
        q /= static_cast<std::size_t>(per_axis);
      } else {
        out.push_back(rest);
      }
    }
  }
  return out;
}

}  // namespace vper
