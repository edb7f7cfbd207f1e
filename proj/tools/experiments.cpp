#include "experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

#include "vper/bump.hpp"
#include "vper/counterexamples.hpp"
#include "vper/exp_sum.hpp"
#include "vper/number_theory.hpp"
#include "vper/oscillatory.hpp"
#include "vper/periodization.hpp"
#include "vper/quadrature.hpp"
#include "vper/sphere_measure.hpp"
#include "vper/theorem_probe.hpp"

namespace vper::tools {

namespace {

class Stopwatch {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double spread(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi / *lo;
}

double conj(double p) { return p == 1.0 ? norms::kInfinity : (std::isinf(p) ? 1.0 : p / (p - 1.0)); }
double inv(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

std::vector<double> sqrt_of(const std::vector<std::int64_t>& ns) {
  std::vector<double> out;
  for (auto n : ns) out.push_back(std::sqrt(static_cast<double>(n)));
  return out;
}

}  // namespace

Check three_squares_progression(const SquaresOptions& o) {
  Stopwatch sw;
  Check c;
  c.name = "three squares on 8k+1";
  const nt::SquareSumTable table(o.three_limit);
  std::int64_t checked = 0, failures = 0, oracle = 0, oracle_mismatch = 0;
  Json first_failures = Json::array();
  for (std::int64_t s = 1; s <= o.three_limit; s += 8) {
    ++checked;
    const bool ok = table.representable(s, 3);
    if (!ok) {
      ++failures;
      if (first_failures.size() < 10) first_failures.push_back(s);
    }
    if ((s / 8) % o.oracle_stride == 0) {
      ++oracle;
      oracle_mismatch += nt::is_sum_of_squares(s, 3) != ok;
    }
  }
  c.seconds = sw.seconds();
  c.pass = failures == 0 && oracle_mismatch == 0 && c.seconds <= 60.0;
  c.detail = {{"limit", o.three_limit}, {"checked", checked}, {"failures", failures},
              {"first_failures", first_failures}, {"oracle_checked", oracle}, {"oracle_mismatches", oracle_mismatch},
              {"seconds_limit", 60.0}};
  c.summary = fmt("%lld values 8k+1 <= %lld, %lld failures, %lld/%lld oracle agree", static_cast<long long>(checked),
                  static_cast<long long>(o.three_limit), static_cast<long long>(failures),
                  static_cast<long long>(oracle - oracle_mismatch), static_cast<long long>(oracle));
  return c;
}

Check four_squares(const SquaresOptions& o) {
  Stopwatch sw;
  Check c;
  c.name = "four squares";
  const nt::SquareSumTable table(o.four_limit);
  std::int64_t failures = 0, oracle_mismatch = 0, oracle = 0;
  for (std::int64_t s = 0; s <= o.four_limit; ++s) {
    const bool ok = table.representable(s, 4);
    failures += !ok;
    if (s % o.oracle_stride == 0) {
      ++oracle;
      oracle_mismatch += nt::is_sum_of_squares(s, 4) != ok;
    }
  }
  c.seconds = sw.seconds();
  c.pass = failures == 0 && oracle_mismatch == 0;
  c.detail = {{"limit", o.four_limit}, {"failures", failures}, {"oracle_checked", oracle},
              {"oracle_mismatches", oracle_mismatch}};
  c.summary = fmt("0..%lld, %lld failures", static_cast<long long>(o.four_limit), static_cast<long long>(failures));
  return c;
}

Check density_trend(const DensityOptions& o) {
  Stopwatch sw;
  Check c;
  c.name = "two-squares density trend";
  std::vector<double> eps, scaled;
  Json rows = Json::array();
  for (auto n : o.ns) {
    const auto r = nt::density_eps(n);
    eps.push_back(r.eps);
    scaled.push_back(r.eps * std::sqrt(std::log(static_cast<double>(n))));
    rows.push_back({{"n", n}, {"count", r.count}, {"eps", r.eps}, {"eps_sqrt_log_n", scaled.back()}});
  }
  bool decreasing = true;
  for (std::size_t i = 0; i + 1 < eps.size(); ++i) decreasing = decreasing && eps[i + 1] < eps[i];
  const double band = spread(scaled);
  c.seconds = sw.seconds();
  c.pass = decreasing && band <= o.band && c.seconds <= 300.0;
  c.detail = {{"rows", rows}, {"strictly_decreasing", decreasing}, {"band", band}, {"band_limit", o.band}};
  c.summary = fmt("eps %s, eps*sqrt(ln n) band %.3f (limit %.2f)", decreasing ? "decreasing" : "NOT decreasing", band,
                  o.band);
  return c;
}

Check partition_of_unity(const PartitionOptions& o) {
  Stopwatch sw;
  Check c;
  c.name = "dyadic partition of unity";
  const auto r = partition_check(o.points, o.t_max, o.terms);
  c.seconds = sw.seconds();
  c.pass = r.max_deviation <= o.tol;
  c.detail = {{"points", o.points},         {"t_max", o.t_max},          {"terms", r.terms},
              {"max_deviation", r.max_deviation}, {"worst_t", r.worst_t}, {"complement_max", r.complement_max},
              {"tol", o.tol},               {"cutoff", kCutoffVersion}};
  c.summary = fmt("max |sum q(t/2^l) - 1| = %.2e on %d points in [1, %g]", r.max_deviation, o.points, o.t_max);
  return c;
}

Check amplitude_decay(const DecayOptions& o) {
  Stopwatch sw;
  Check c;
  c.name = "sphere-measure amplitude decay";
  c.pass = true;
  double worst = 0.0;
  Json fits = Json::array();
  for (int d : o.dims) {
    for (int k : o.orders) {
      const auto f = amplitude_derivative_decay(d, k, o.r_lo, o.r_hi);
      const double err = std::abs(f.exponent - f.expected);
      worst = std::max(worst, err);
      c.pass = c.pass && err <= o.tol;
      fits.push_back({{"d", d}, {"k", k}, {"exponent", f.exponent}, {"expected", f.expected}, {"abs_error", err},
                      {"r2", f.r2}});
    }
  }
  c.seconds = sw.seconds();
  c.detail = {{"fits", fits}, {"tol", o.tol}, {"r_lo", o.r_lo}, {"r_hi", o.r_hi}};
  c.summary = fmt("worst |beta - ((d-1)/2 + k)| = %.2e (limit %.2f)", worst, o.tol);
  return c;
}

Check stationary_phase(const StationaryOptions& o) {
  Stopwatch sw;
  Check c;
  c.name = "stationary phase";
  const Bump q = make_dyadic_cutoff();
  c.pass = true;
  double worst = 1.0;
  Json bands = Json::array();
  for (double center : o.centers) {
    std::vector<double> scaled;
    Json samples = Json::array();
    for (int i = 0; i < o.lambda_points; ++i) {
      const double lam = o.lambda_lo * std::pow(o.lambda_hi / o.lambda_lo, i / (o.lambda_points - 1.0));
      for (double N : o.Ns) {
        const auto r = osc::stationary_phase_integral(q, lam / (N * N), N, center);
        scaled.push_back(std::abs(r.value) * std::sqrt(lam));
        samples.push_back({{"nu_N2", lam}, {"N", N}, {"abs_I", std::abs(r.value)}, {"scaled", scaled.back()},
                           {"error_bound", r.error_bound}});
      }
    }
    const double band = spread(scaled);
    worst = std::max(worst, band);
    c.pass = c.pass && band <= o.band;
    bands.push_back({{"c", center}, {"band", band}, {"samples", samples}});
  }
  const std::vector<double> lams{1, 1.5, 2, 3, 4, 6, 8, 16};
  const auto fit = osc::stationary_phase_decay(q, o.far_center, lams);
  c.pass = c.pass && fit.exponent >= o.min_decay;
  c.seconds = sw.seconds();
  c.detail = {{"bands", bands},
              {"band_limit", o.band},
              {"far_center", o.far_center},
              {"decay_exponent", fit.exponent},
              {"decay_r2", fit.r2},
              {"decay_limit", o.min_decay}};
  c.summary = fmt("worst band %.3f (limit %.2f), decay exponent at c=%g: %.2f (>= %.1f)", worst, o.band, o.far_center,
                  fit.exponent, o.min_decay);
  c.notes.push_back("c restricted to the interior of supp q; at c = 1/2 or 2 the amplitude vanishes to all orders");
  return c;
}

Check kernel_bounds(const KernelOptions& o) {
  Stopwatch sw;
  Check c;
  c.name = "dyadic kernel bound";
  std::vector<double> xs;
  for (int i = 0; i < o.samples; ++i) xs.push_back(o.x_lo * std::pow(o.x_hi / o.x_lo, i / (o.samples - 1.0)));
  std::vector<double> sups;
  Json per_nu = Json::array();
  bool converged = true;
  for (int nu : o.nus) {
    const auto sweep = osc::kernel_sweep({o.d, nu, o.b}, xs, o.levels);
    double sup = 0.0, at = 0.0, err = 0.0;
    for (const auto& s : sweep) {
      converged = converged && s.converged;
      if (s.total > sup) {
        sup = s.total;
        at = s.x_norm;
        err = s.error_bound;
      }
    }
    const double scaled = sup * std::pow(std::abs(nu), 0.5 * o.d);
    sups.push_back(scaled);
    per_nu.push_back({{"nu", nu}, {"sup", sup}, {"argmax_x", at}, {"error_bound", err}, {"scaled", scaled}});
  }
  const double band = spread(sups);
  c.seconds = sw.seconds();
  c.pass = band <= o.band;
  c.detail = {{"d", o.d}, {"levels", o.levels}, {"x_samples", o.samples}, {"per_nu", per_nu}, {"band", band},
              {"band_limit", o.band}, {"all_converged", converged}};
  c.summary = fmt("sup_x K*|nu|^(d/2) varies by %.3f over nu (limit %.1f)", band, o.band);
  return c;
}

Check poisson_identity(const PoissonOptions& o) {
  Stopwatch sw;
  Check c;
  c.name = "Poisson summation";
  const auto g = osc::poisson_gaussian(o.gaussian_a);
  const auto prof = osc::shifted_gap_annulus(o.gap_index, o.shift);
  const auto v = osc::poisson_vanishing(*prof, o.y, o.shift, o.N);
  const auto base = osc::poisson_gaussian_quadrature(1.0);
  const double ratio = v.result.residual / base.result.residual;
  c.seconds = sw.seconds();
  c.pass = g.residual <= o.gaussian_tol && ratio <= o.factor;
  c.detail = {{"gaussian", {{"a", o.gaussian_a}, {"residual", g.residual}, {"tol", o.gaussian_tol}}},
              {"vanishing",
               {{"annulus", prof->describe()},
                {"lhs_abs", std::abs(v.result.lhs)},
                {"rhs_abs", std::abs(v.result.rhs)},
                {"residual", v.result.residual},
                {"tail_budget", v.result.tail_budget},
                {"max_abs_F_n", v.max_abs_F_n}}},
              {"baseline_residual", base.result.residual},
              {"ratio", ratio},
              {"factor", o.factor}};
  c.summary = fmt("gaussian residual %.1e, vanishing residual %.1e = %.2fx baseline (limit %.0fx)", g.residual,
                  v.result.residual, ratio, o.factor);
  return c;
}

Check vanishing_periodization(const VanishingOptions& o) {
  Stopwatch sw;
  Check c;
  c.name = "vanishing periodization";
  std::vector<Rotation> rots;
  for (int i = 0; i < o.rotations; ++i) rots.push_back(sample_rotation(4, o.seed * 1000 + static_cast<std::uint64_t>(i)));
  const auto grid = cube_grid(4, o.grid_per_axis, 3);
  c.pass = true;
  Json members = Json::array();
  double worst = 0.0;
  for (auto [lo, hi] : o.annuli) {
    const TestFunction f(std::make_shared<const AnnulusProfile>(4, lo, hi, o.taper));
    const auto rep = check_vanishing(f, rots, grid, o.tol, o.tail_tol);
    c.pass = c.pass && rep.pass;
    worst = std::max(worst, rep.max_abs);
    members.push_back({{"annulus", f.profile().describe()},
                       {"certified", rep.support.certified},
                       {"max_abs", rep.max_abs},
                       {"budget", rep.budget},
                       {"pass", rep.pass},
                       {"lattice_radius", rep.lattice_radius},
                       {"terms_per_point", rep.terms_per_point},
                       {"rotation_invariant", rep.rotation_invariant}});
  }
  const TestFunction g(std::make_shared<const GaussianProfile>(4));
  const auto control = check_vanishing(g, rots, grid, o.tol, o.tail_tol);
  c.pass = c.pass && !control.pass;
  c.seconds = sw.seconds();
  c.detail = {{"rotations", o.rotations},
              {"grid_points", grid.size() / 4},
              {"tol", o.tol},
              {"members", members},
              {"gaussian_control", {{"max_abs", control.max_abs}, {"pass", control.pass}}}};
  c.summary = fmt("%zu annuli x %d rotations x %zu points: max |g| %.1e; gaussian control max %.2f %s",
                  o.annuli.size(), o.rotations, grid.size() / 4, worst, control.max_abs,
                  control.pass ? "PASSES (bad)" : "fails");
  return c;
}

Check plane_family_rates(const PlaneFamilyOptions& o) {
  Stopwatch sw;
  Check c;
  c.name = "d = 2 family rates";
  std::vector<double> origin, l1, ratio, inv_eps;
  Json rows = Json::array();
  for (auto n : o.ns) {
    const auto b = cex::build_plane_family(n, o.c_delta);
    const auto rep = cex::report_plane_family(b, 1.0, 1.0);
    const double rn = std::sqrt(static_cast<double>(n));
    const double one = rep.norms[0].value, zero = rep.norms.back().value;
    origin.push_back(zero / rn);
    l1.push_back(one / (rn * std::sqrt(b.eps_n)));
    ratio.push_back(zero / one);
    inv_eps.push_back(1.0 / b.eps_n);
    rows.push_back({{"n", n},
                    {"eps_n", b.eps_n},
                    {"N", b.N},
                    {"f0", zero},
                    {"l1", one},
                    {"l1_budget", rep.norms[0].budget},
                    {"f0_over_sqrt_n", origin.back()},
                    {"l1_over_sqrt_n_sqrt_eps", l1.back()},
                    {"ratio", ratio.back()}});
  }
  bool monotone = true;
  for (std::size_t i = 0; i + 1 < ratio.size(); ++i) monotone = monotone && ratio[i + 1] >= ratio[i];
  const double slope = cex::fit_exponent(inv_eps, ratio);
  const double s_origin = spread(origin), s_l1 = spread(l1);
  c.seconds = sw.seconds();
  c.pass = monotone && slope >= o.slope_lo && slope <= o.slope_hi && s_origin <= o.band && s_l1 <= o.band;
  c.detail = {{"rows", rows},
              {"c_delta", o.c_delta},
              {"origin_constant_spread", s_origin},
              {"l1_constant_spread", s_l1},
              {"band", o.band},
              {"ratio_nondecreasing", monotone},
              {"slope_vs_log_inv_eps", slope},
              {"slope_window", {o.slope_lo, o.slope_hi}},
              {"predicted_slope", 0.5}};
  c.summary = fmt("|f(0)|/sqrt n spread %.3f, L1 constant spread %.3f, ratio %s, slope %.3f in [%.2f, %.2f]",
                  s_origin, s_l1, monotone ? "non-decreasing" : "DECREASES", slope, o.slope_lo, o.slope_hi);
  return c;
}

Check rectangle_family_rates(const RectangleFamilyOptions& o) {
  Stopwatch sw;
  Check c;
  c.name = "d-dim rectangle family rates";
  std::vector<double> ratio, ratio_info;
  Json rows = Json::array();
  for (auto n : o.ns) {
    const auto b = cex::build_rectangle_family(n, o.d);
    const auto np = norms::lp_norm_separable(b.f, o.p);
    const auto nr = norms::lp_norm_separable(b.f, o.r);
    const auto ni = norms::lp_norm_separable(b.f, o.r_informative);
    ratio.push_back(nr.value / np.value);
    ratio_info.push_back(ni.value / np.value);
    rows.push_back({{"n", n},
                    {"norm_p", np.value},
                    {"budget_p", np.budget},
                    {"norm_r", nr.value},
                    {"budget_r", nr.budget},
                    {"ratio", ratio.back()},
                    {"norm_r_info", ni.value},
                    {"ratio_info", ratio_info.back()}});
  }
  const auto rn = sqrt_of(o.ns);
  double pred = inv(conj(o.p)) - inv(o.r);
  if (std::abs(pred) < 1e-12) pred = 0.0;  // r = p' up to rounding
  const double fit = cex::fit_exponent(rn, ratio);
  const double pred_i = inv(conj(o.p)) - inv(o.r_informative), fit_i = cex::fit_exponent(rn, ratio_info);
  c.seconds = sw.seconds();
  c.pass = std::abs(fit - pred) <= o.rel_tol * std::abs(pred);
  c.detail = {{"d", o.d},       {"p", o.p},         {"r", o.r},          {"rows", rows},
              {"fitted", fit},  {"predicted", pred}, {"rel_tol", o.rel_tol},
              {"informative", {{"r", o.r_informative}, {"fitted", fit_i}, {"predicted", pred_i}}}};
  c.summary = fmt("ratio exponent %.4f vs predicted %.4f (r=%g); r=%g: %.4f vs %.4f", fit, pred, o.r,
                  o.r_informative, fit_i, pred_i);
  if (pred == 0.0) {
    c.notes.push_back(fmt("predicted exponent is 0 at r = p': a %g%% relative window around 0 is empty", 100 * o.rel_tol));
  }
  return c;
}

Check small_ball_exponent(const SmallBallOptions& o) {
  Stopwatch sw;
  Check c;
  c.name = "small-ball exponent";
  std::vector<double> x0(static_cast<std::size_t>(o.d), 0.0);
  x0[0] = 0.5;
  std::vector<double> ratio;
  Json rows = Json::array();
  for (double e : o.eps) {
    const auto rep = cex::report_small_ball(cex::build_small_ball(x0, e), o.p, o.r);
    ratio.push_back(rep.norms[1].value / rep.norms[0].value);
    rows.push_back({{"eps", e}, {"norm_p", rep.norms[0].value}, {"norm_r", rep.norms[1].value},
                    {"ratio", ratio.back()}});
  }
  const double pred = o.d * inv(conj(o.r)) - o.d * inv(conj(o.p));
  const double fit = cex::fit_exponent(o.eps, ratio);
  c.seconds = sw.seconds();
  c.pass = std::abs(fit - pred) <= o.rel_tol * std::abs(pred);
  c.detail = {{"d", o.d}, {"p", o.p}, {"r", o.r}, {"rows", rows}, {"fitted", fit}, {"predicted", pred},
              {"rel_tol", o.rel_tol}};
  c.summary = fmt("slope %.6f vs d/r' - d/p' = %.6f over eps in [%g, %g]", fit, pred, o.eps.front(), o.eps.back());
  return c;
}

Check p_gt_2_exponent(const PGt2Options& o) {
  Stopwatch sw;
  Check c;
  c.name = "p > 2 family";
  std::vector<double> ratio;
  Json rows = Json::array();
  for (auto n : o.ns) {
    const auto res = cex::build_p_gt_2(n, o.d, o.p, o.r);
    ratio.push_back(res.ratio);
    rows.push_back({{"n", n},
                    {"fhat_norm_exact", res.fhat_pnorm_exact},
                    {"fhat_norm_direct", res.fhat_pnorm_direct},
                    {"norm_r", res.r_norm},
                    {"ratio", res.ratio}});
  }
  const double pred = 1.0 / o.p - 1.0 / o.r, fit = cex::fit_exponent(sqrt_of(o.ns), ratio);
  c.seconds = sw.seconds();
  c.pass = std::abs(fit - pred) <= o.rel_tol * std::abs(pred);
  c.detail = {{"d", o.d}, {"p", o.p}, {"r", o.r}, {"rows", rows}, {"fitted", fit}, {"predicted", pred},
              {"rel_tol", o.rel_tol}};
  c.summary = fmt("ratio exponent %.4f vs 1/p - 1/r = %.4f", fit, pred);
  return c;
}

Check theorem_probe(const ProbeCheckOptions& o) {
  Stopwatch sw;
  Check c;
  c.name = "bounded ratio probe";
  probe::ProbeOptions po;
  po.m_lo = o.m_lo;
  po.m_hi = o.m_hi;
  po.dilates = o.dilates;
  po.translates = o.translates;
  po.modulations = o.modulations;
  po.combinations = o.combinations;
  po.seed = o.seed;
  auto fam = probe::build_family(o.d, o.p, po);
  const auto rep = probe::probe_ratio(fam);
  Json members = Json::array();
  for (const auto& m : fam.members) {
    members.push_back({{"label", m.label},
                       {"kind", probe::to_string(m.kind)},
                       {"support_width", m.support_width},
                       {"certified", m.certified},
                       {"numeric_checked", m.numeric_checked},
                       {"norm_p", m.norm_p.value},
                       {"budget_p", m.norm_p.budget},
                       {"norm_p_conjugate", m.norm_pc.value},
                       {"budget_p_conjugate", m.norm_pc.budget},
                       {"ratio", m.ratio},
                       {"normalized_ratio", m.normalized_ratio}});
  }
  c.seconds = sw.seconds();
  c.pass = rep.pass && rep.certified >= o.min_members;
  c.detail = {{"d", rep.d},
              {"p", rep.p},
              {"p_conjugate", num(rep.p_conjugate)},
              {"members", members},
              {"certified", rep.certified},
              {"numeric_checked", rep.numeric_checked},
              {"max_ratio", rep.max_ratio},
              {"median_ratio", rep.median_ratio},
              {"max_normalized", rep.max_normalized},
              {"median_normalized", rep.median_normalized},
              {"log", rep.log}};
  c.summary = fmt("%zu certified members, max/median ratio %.3f (limit 10); normalized %.1f", rep.certified,
                  rep.max_ratio / rep.median_ratio, rep.max_normalized / rep.median_normalized);
  return c;
}

Check exp_sum_moment(const MomentOptions& o) {
  Stopwatch sw;
  Check c;
  c.name = "exponential-sum L2 moment";
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> uf(-30.0, 30.0), ua(-5.0, 5.0);
  double worst = 0.0, worst_int = 0.0;
  for (int N = 1; N <= o.max_terms; ++N) {
    std::vector<double> mu(static_cast<std::size_t>(N));
    for (auto& m : mu) m = uf(rng);
    const double a = ua(rng), b = a + 4.0 * quad::kPi;
    const double closed = expsum::l2_moment(mu, a, b), brute = expsum::l2_moment_quadrature(mu, a, b);
    worst = std::max(worst, std::abs(closed - brute) / std::max(1.0, std::abs(brute)));
    std::iota(mu.begin(), mu.end(), 1.0);
    const double exact = 4.0 * quad::kPi * N;
    worst_int = std::max(worst_int, std::abs(expsum::l2_moment(mu, a, b) - exact) / exact);
  }
  c.seconds = sw.seconds();
  // "Exactly": equal up to a few ulps of the rounding in the closed form.
  c.pass = worst <= o.tol && worst_int <= 1e-13;
  c.detail = {{"max_terms", o.max_terms}, {"closed_vs_quadrature", worst}, {"tol", o.tol},
              {"integer_case_rel_error", worst_int}};
  c.summary = fmt("closed form vs quadrature %.1e (limit %.0e); integer case rel. error %.1e", worst, o.tol, worst_int);
  return c;
}

}  // namespace vper::tools
