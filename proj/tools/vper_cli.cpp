#include <cmath>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include <CLI11.hpp>

#include "experiments.hpp"
#include "report.hpp"
#include "vper/counterexamples.hpp"
#include "vper/norms.hpp"
#include "vper/number_theory.hpp"
#include "vper/separable.hpp"
#include "vper/sphere_measure.hpp"
#include "vper/theorem_probe.hpp"

using namespace vper;
using namespace vper::tools;

namespace {

struct Common {
  std::string out;
  std::string format;
  std::uint64_t seed = 1;
};

// Numbers, booleans and lists keep their JSON type; anything else stays a string.
Json typed(const std::string& s) {
  const Json v = Json::parse(s, nullptr, false);
  if (v.is_number() || v.is_boolean() || v.is_array()) return v;
  return s;
}

// Echo of every option of a subcommand: given values, else the default.
Json echo(const CLI::App* app) {
  Json j = Json::object();
  for (const CLI::Option* opt : app->get_options()) {
    const std::string name = opt->get_lnames().empty() ? opt->get_name() : opt->get_lnames().front();
    if (name == "help" || name.empty()) continue;
    if (opt->count() > 0) {
      const auto& res = opt->results();
      if (res.size() == 1 && opt->get_items_expected_max() <= 1) {
        j[name] = typed(res.front());
      } else {
        Json arr = Json::array();
        for (const auto& r : res) arr.push_back(typed(r));
        j[name] = arr;
      }
    } else {
      j[name] = typed(opt->get_default_str());
    }
  }
  return j;
}

Report from_check(const std::string& command, const Check& c) {
  Report r;
  r.command = command;
  r.status = c.pass ? "pass" : "fail";
  r.results = c.detail;
  r.results["summary"] = c.summary;
  if (!c.notes.empty()) r.results["notes"] = c.notes;
  std::cerr << command << ": " << (c.pass ? "PASS" : "FAIL") << "  " << c.summary << "  (" << c.seconds << " s)\n";
  return r;
}

Json norm_json(const norms::NormResult& n) {
  return {{"p", num(n.p)},
          {"value", num(n.value)},
          {"budget", num(n.budget)},
          {"method", norms::to_string(n.method)},
          {"holder_bound", std::isnan(n.holder_bound) ? Json(nullptr) : Json(n.holder_bound)},
          {"budget_exceeded", n.budget_exceeded}};
}

SeparableFunction read_separable(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("--input: cannot open " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const std::exception& e) {
    throw std::invalid_argument("--input: " + std::string(e.what()));
  }
  if (!j.contains("axes") || !j["axes"].is_array() || j["axes"].empty()) {
    throw std::invalid_argument("--input: expected {\"axes\": [{\"scale\": s, \"freqs\": [...]}, ...]}");
  }
  std::vector<SeparableAxis> axes;
  for (const auto& a : j["axes"]) {
    SeparableAxis ax;
    ax.scale = a.value("scale", 1.0);
    if (a.contains("freqs")) ax.freqs = a["freqs"].get<std::vector<double>>();
    if (!(ax.scale > 0) || ax.freqs.empty()) throw std::invalid_argument("--input: each axis needs scale > 0 and freqs");
    axes.push_back(std::move(ax));
  }
  return SeparableFunction(std::move(axes));
}

Json counterexample_json(const cex::CounterexampleReport& rep) {
  Json norms = Json::array(), pred = Json::array();
  for (const auto& n : rep.norms) {
    norms.push_back({{"p", num(n.p)}, {"value", num(n.value)}, {"method", n.method}, {"budget", num(n.budget)}});
  }
  for (const auto& p : rep.predicted) {
    pred.push_back({{"formula", p.formula}, {"exponent", num(p.exponent)}, {"fitted_constant", num(p.fitted_constant)}});
  }
  Json params = Json::object();
  for (const auto& [k, v] : rep.params) params[k] = num(v);
  return {{"family", rep.family}, {"params", params},   {"norms", norms},
          {"predicted", pred},    {"verdict", rep.verdict}, {"partial", rep.partial}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vper: lattice periodization, oscillatory kernels and counterexample norms"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--out", common.out,
                 std::string("Output file (atomic write). Default: $") + kOutDirEnv + "/<command>.<format>, else stdout");
  app.add_option("--format", common.format, "json or csv (csv for tabular commands; density defaults to csv)")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--seed", common.seed, "Seed for every random choice");
  app.set_version_flag("--version", kVersion);

  Report report;
  std::string default_format = "json";

  // radii
  auto* radii = app.add_subcommand("radii", "Distinct lattice radii |m|, m in Z^d, up to r_max");
  int radii_d = 4;
  double radii_rmax = 5.0;
  radii->add_option("--d", radii_d, "Dimension")->check(CLI::Range(1, 8));
  radii->add_option("--rmax", radii_rmax, "Largest radius")->check(CLI::PositiveNumber);
  radii->callback([&] {
    const auto R = nt::radii(radii_d, radii_rmax);
    Table t{{"index", "squared", "radius", "gap_to_next"}, {}};
    for (std::size_t i = 0; i < R.size(); ++i) {
      t.rows.push_back({i, R.squared[i], R.radius(i), i + 1 < R.size() ? num(R.gap(i)) : Json("")});
    }
    report.command = "radii";
    report.results = {{"count", R.size()}};
    report.table = std::move(t);
  });

  // density
  auto* density = app.add_subcommand("density", "eps(n) = #{sums of two squares in [n, 2n]} / n");
  std::vector<std::int64_t> density_n{1000};
  bool density_trend_flag = false;
  double density_band = 1.5;
  density->add_option("--n", density_n, "One or more n")->check(CLI::Range(std::int64_t{1}, std::int64_t{2'000'000'000}));
  density->add_flag("--trend", density_trend_flag, "Also check strict decrease and the eps*sqrt(ln n) band");
  density->add_option("--band", density_band, "Allowed max/min of eps*sqrt(ln n) with --trend");
  density->callback([&] {
    default_format = "csv";
    report.command = "density";
    Table t{{"n", "count", "eps", "eps_sqrt_log_n"}, {}};
    for (auto n : density_n) {
      const auto r = nt::density_eps(n);
      t.rows.push_back({r.n, r.count, r.eps, n > 1 ? num(r.eps * std::sqrt(std::log(static_cast<double>(n)))) : Json("")});
    }
    report.table = std::move(t);
    if (density_trend_flag) {
      const auto c = density_trend({density_n, density_band});
      report.status = c.pass ? "pass" : "fail";
      report.results = c.detail;
      report.results["summary"] = c.summary;
    }
  });

  // bump-check
  auto* bump = app.add_subcommand("bump-check", "Dyadic partition of unity sum_l q(t/2^l) = 1 on [1, t_max]");
  PartitionOptions bump_o;
  bump->add_option("--points", bump_o.points, "Grid points")->check(CLI::PositiveNumber);
  bump->add_option("--tmax", bump_o.t_max, "Upper end of the grid")->check(CLI::Range(1.0, 1e12));
  bump->add_option("--terms", bump_o.terms, "Dyadic terms")->check(CLI::Range(1, 60));
  bump->add_option("--tol", bump_o.tol, "Allowed max deviation");
  bump->callback([&] { report = from_check("bump-check", partition_of_unity(bump_o)); });

  // sigma-hat
  auto* sig = app.add_subcommand("sigma-hat", "Fourier transform of sphere measure; --decay fits amplitude derivatives");
  int sig_d = 3;
  double sig_t = 1.0;
  std::vector<double> sig_r{0.5, 1.0, 2.0, 5.0, 10.0};
  bool sig_decay = false;
  DecayOptions decay_o;
  sig->add_option("--d", sig_d, "Dimension")->check(CLI::Range(2, 5));
  sig->add_option("--t", sig_t, "Sphere radius")->check(CLI::PositiveNumber);
  sig->add_option("--r", sig_r, "Evaluation radii |x|");
  sig->add_flag("--decay", sig_decay, "Fit the decay exponents of a^(k)");
  sig->add_option("--dims", decay_o.dims, "Dimensions for --decay");
  sig->add_option("--orders", decay_o.orders, "Derivative orders for --decay");
  sig->add_option("--tol", decay_o.tol, "Allowed |fitted - expected| for --decay");
  sig->callback([&] {
    if (sig_decay) {
      report = from_check("sigma-hat", amplitude_decay(decay_o));
    } else {
      report.command = "sigma-hat";
    }
    Table t{{"d", "t", "r", "sigma_hat", "validated"}, {}};
    for (double r : sig_r) {
      const auto v = sigma_hat_checked(sig_d, sig_t, r);
      t.rows.push_back({sig_d, sig_t, r, v.value, v.validated});
    }
    report.table = std::move(t);
  });

  // periodize-check
  auto* per = app.add_subcommand("periodize-check", "Vanishing of g_rho for d = 4 annuli; a Gaussian control must fail");
  VanishingOptions van_o;
  std::vector<double> van_annuli;
  per->add_option("--annulus", van_annuli, "lo hi pairs (repeatable), each inside a lattice gap")->expected(2, 64);
  per->add_option("--taper", van_o.taper, "Gaussian taper of the annulus profile");
  per->add_option("--rotations", van_o.rotations, "Haar rotations")->check(CLI::Range(1, 1000));
  per->add_option("--grid", van_o.grid_per_axis, "Grid points per axis (3 varying axes)")->check(CLI::Range(1, 20));
  per->add_option("--tol", van_o.tol, "Vanishing tolerance");
  per->add_option("--tail-tol", van_o.tail_tol, "Lattice tail tolerance");
  per->callback([&] {
    if (!van_annuli.empty()) {
      if (van_annuli.size() % 2) throw std::invalid_argument("--annulus takes lo hi pairs");
      van_o.annuli.clear();
      for (std::size_t i = 0; i < van_annuli.size(); i += 2) van_o.annuli.emplace_back(van_annuli[i], van_annuli[i + 1]);
    }
    van_o.seed = common.seed;
    report = from_check("periodize-check", vanishing_periodization(van_o));
  });

  // stationary-phase
  auto* sp = app.add_subcommand("stationary-phase", "|I| sqrt(nu N^2) band for interior c, decay for c off the support");
  StationaryOptions sp_o;
  sp->add_option("--c", sp_o.centers, "Critical points inside (1/2, 2)");
  sp->add_option("--lambda-lo", sp_o.lambda_lo, "Smallest nu N^2")->check(CLI::PositiveNumber);
  sp->add_option("--lambda-hi", sp_o.lambda_hi, "Largest nu N^2")->check(CLI::PositiveNumber);
  sp->add_option("--points", sp_o.lambda_points, "Log-spaced values of nu N^2")->check(CLI::Range(2, 1000));
  sp->add_option("--N", sp_o.Ns, "Values of N (nu = lambda / N^2)");
  sp->add_option("--band", sp_o.band, "Allowed max/min of |I| sqrt(nu N^2) per c");
  sp->add_option("--far-c", sp_o.far_center, "Critical point outside the support for the decay fit");
  sp->add_option("--min-decay", sp_o.min_decay, "Required decay exponent at --far-c");
  sp->callback([&] { report = from_check("stationary-phase", stationary_phase(sp_o)); });

  // kernel-bounds
  auto* kb = app.add_subcommand("kernel-bounds", "sup_x sum_{l<=L} |D(2^l, x)| |nu|^(d/2) across nu");
  KernelOptions kb_o;
  kb->add_option("--d", kb_o.d, "Dimension")->check(CLI::Range(2, 5));
  kb->add_option("--nu", kb_o.nus, "Nonzero lattice frequencies");
  kb->add_option("--levels", kb_o.levels, "Largest dyadic level L")->check(CLI::Range(0, 20));
  kb->add_option("--x-lo", kb_o.x_lo, "Smallest |x|")->check(CLI::PositiveNumber);
  kb->add_option("--x-hi", kb_o.x_hi, "Largest |x|")->check(CLI::PositiveNumber);
  kb->add_option("--samples", kb_o.samples, "Log-spaced |x| samples")->check(CLI::Range(2, 100000));
  kb->add_option("--band", kb_o.band, "Allowed max/min across nu");
  kb->add_option("--b", kb_o.b, "Shift b in the kernel phase");
  kb->callback([&] {
    for (int nu : kb_o.nus) {
      if (nu == 0) throw std::invalid_argument("--nu: 0 is not allowed");
    }
    report = from_check("kernel-bounds", kernel_bounds(kb_o));
  });

  // poisson-check
  auto* pc = app.add_subcommand("poisson-check", "Poisson summation: Gaussian residual and a vanishing family vs baseline");
  PoissonOptions pc_o;
  pc->add_option("--a", pc_o.gaussian_a, "Gaussian exp(-pi a t^2)")->check(CLI::PositiveNumber);
  pc->add_option("--gaussian-tol", pc_o.gaussian_tol, "Allowed Gaussian residual");
  pc->add_option("--gap", pc_o.gap_index, "Annulus inside (sqrt(n0 + b), sqrt(n0 + 1))")->check(CLI::Range(0, 10000));
  pc->add_option("--b", pc_o.shift, "Shift b in (0, 1)")->check(CLI::Range(1e-6, 1.0 - 1e-6));
  pc->add_option("--N", pc_o.N, "Dyadic scale N")->check(CLI::Range(1.0, 1e6));
  pc->add_option("--y", pc_o.y, "Space point (d = 4)")->expected(4);
  pc->add_option("--factor", pc_o.factor, "Allowed ratio to the baseline residual");
  pc->callback([&] { report = from_check("poisson-check", poisson_identity(pc_o)); });

  // counterexample families
  auto* ce = app.add_subcommand("counterexample", "Rate checks for the sharpness families");
  ce->require_subcommand(1);
  auto* d2 = ce->add_subcommand("d2", "d = 2 family between consecutive sums of two squares");
  PlaneFamilyOptions d2_o;
  d2->add_option("--n", d2_o.ns, "Values of n (>= 256 recommended)");
  d2->add_option("--c-delta", d2_o.c_delta, "Separation constant C_delta in (0, 1]");
  d2->add_option("--slope-lo", d2_o.slope_lo, "Lower end of the slope window");
  d2->add_option("--slope-hi", d2_o.slope_hi, "Upper end of the slope window");
  d2->add_option("--band", d2_o.band, "Allowed max/min of the fitted constants");
  d2->callback([&] { report = from_check("counterexample-d2", plane_family_rates(d2_o)); });
  auto* dd = ce->add_subcommand("dd", "d-dimensional rectangle family, ||f||_r / ||f||_p vs sqrt n");
  RectangleFamilyOptions dd_o;
  dd->add_option("--d", dd_o.d, "Dimension")->check(CLI::Range(2, 6));
  dd->add_option("--p", dd_o.p, "p in [1, 2]")->check(CLI::Range(1.0, 2.0));
  dd->add_option("--r", dd_o.r, "r > p'");
  dd->add_option("--n", dd_o.ns, "Values of n");
  dd->add_option("--rel-tol", dd_o.rel_tol, "Relative tolerance on the exponent");
  dd->add_option("--r-info", dd_o.r_informative, "Second r, reported only");
  dd->callback([&] { report = from_check("counterexample-dd", rectangle_family_rates(dd_o)); });
  auto* ball = ce->add_subcommand("ball", "Small-ball family, ratio vs eps");
  SmallBallOptions ball_o;
  ball->add_option("--d", ball_o.d, "Dimension")->check(CLI::Range(2, 6));
  ball->add_option("--p", ball_o.p, "p")->check(CLI::Range(1.0, 1e6));
  ball->add_option("--r", ball_o.r, "r < p")->check(CLI::Range(1.0, 1e6));
  ball->add_option("--eps", ball_o.eps, "Ball radii");
  ball->add_option("--rel-tol", ball_o.rel_tol, "Relative tolerance on the slope");
  ball->callback([&] { report = from_check("counterexample-ball", small_ball_exponent(ball_o)); });
  auto* pg = ce->add_subcommand("pgt2", "Rectangle family for p > 2: ||f||_r / ||f_hat||_p' vs sqrt n");
  PGt2Options pg_o;
  pg->add_option("--d", pg_o.d, "Dimension")->check(CLI::Range(2, 6));
  pg->add_option("--p", pg_o.p, "p > 2");
  pg->add_option("--r", pg_o.r, "r >= p");
  pg->add_option("--n", pg_o.ns, "Values of n");
  pg->add_option("--rel-tol", pg_o.rel_tol, "Relative tolerance on the exponent");
  pg->callback([&] { report = from_check("counterexample-pgt2", p_gt_2_exponent(pg_o)); });

  // norm
  auto* nm = app.add_subcommand("norm", "L^p norms of a separable function given as JSON");
  std::string nm_input;
  std::vector<double> nm_p{1.0, 2.0};
  bool nm_direct = false;
  double nm_oversample = 16.0;
  nm->add_option("--input", nm_input, "JSON file {\"axes\": [{\"scale\": s, \"freqs\": [...]}, ...]}")->required();
  nm->add_option("--p", nm_p, "Exponents (inf allowed)");
  nm->add_option("--oversample", nm_oversample, "Grid points per shortest period")->check(CLI::PositiveNumber);
  nm->add_flag("--direct", nm_direct, "Cross-check on a full tensor grid (small inputs only)");
  nm->callback([&] {
    const auto f = read_separable(nm_input);
    report.command = "norm";
    norms::SeparableOptions so;
    so.oversample = nm_oversample;
    Json rows = Json::array();
    Table t{{"p", "value", "budget", "method"}, {}};
    for (double p : nm_p) {
      const auto r = norms::lp_norm_separable(f, p, so);
      Json row = norm_json(r);
      if (nm_direct && !std::isinf(p)) row["direct_grid"] = norm_json(norms::lp_norm_direct_grid(f, p, nm_oversample));
      rows.push_back(row);
      t.rows.push_back({num(p), num(r.value), num(r.budget), norms::to_string(r.method)});
    }
    report.results = {{"dimension", f.dimension()}, {"terms", f.term_count()}, {"norms", rows}};
    report.table = std::move(t);
  });

  // probe-theorem
  auto* pt = app.add_subcommand("probe-theorem", "||f||_p' / ||f||_p over certified vanishing-periodization families");
  ProbeCheckOptions pt_o;
  int pt_size = -1;
  double pt_r = std::nan("");
  pt->add_option("--d", pt_o.d, "Dimension (3 or 4)")->check(CLI::Range(3, 4));
  pt->add_option("--p", pt_o.p, "1 <= p < 2d/(d+2)");
  pt->add_option("--m-lo", pt_o.m_lo, "Smallest m of the annulus (sqrt m, next radius)")->check(CLI::Range(1, 10000));
  pt->add_option("--m-hi", pt_o.m_hi, "Largest m")->check(CLI::Range(1, 10000));
  pt->add_option("--size", pt_size, "Members per derived kind (dilates, translates, modulations, combinations)")
      ->check(CLI::Range(0, 1000));
  pt->add_option("--min-members", pt_o.min_members, "Required number of certified members");
  pt->add_option("--r", pt_r, "Optional r: report whether (d, p, r) lies in the admissible range");
  pt->callback([&] {
    if (pt_size >= 0) {
      pt_o.dilates = pt_o.translates = pt_o.modulations = pt_o.combinations = static_cast<std::size_t>(pt_size);
    }
    pt_o.seed = common.seed;
    report = from_check("probe-theorem", theorem_probe(pt_o));
    if (!std::isnan(pt_r)) {
      const auto rc = probe::admissible_range(pt_o.d, pt_o.p, pt_r);
      report.results["range"] = {{"r", pt_r}, {"in_range", rc.in_range}, {"annotation", rc.annotation}};
    }
  });

  // Name an unknown subcommand instead of CLI11's generic message.
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--out" || a == "--format" || a == "--seed") {
      ++i;
      continue;
    }
    if (a.rfind("-", 0) == 0) continue;
    bool known = false;
    for (const CLI::App* sub : app.get_subcommands({})) known = known || sub->get_name() == a;
    if (!known) {
      std::cerr << "unknown subcommand '" << a << "'; run with --help for the list\n";
      return 2;
    }
    break;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  // Config echo: the chosen subcommand chain and its options.
  Json config = Json::object();
  for (const CLI::App* sub : app.get_subcommands()) {
    if (auto own = echo(sub); !own.empty()) config[sub->get_name()] = std::move(own);
    for (const CLI::App* inner : sub->get_subcommands()) config[sub->get_name() + " " + inner->get_name()] = echo(inner);
  }
  report.config = config;
  report.seed = common.seed;
  try {
    emit(report, common.format.empty() ? default_format : common.format, common.out);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  if (report.status == "fail") {
    std::cerr << "property violation: see " << (common.out.empty() ? "report" : common.out) << "\n";
    return 1;
  }
  return 0;
}
