#include <cstdio>
#include <functional>
#include <iostream>
#include <set>

#include <CLI11.hpp>

#include "experiments.hpp"
#include "report.hpp"

using namespace vper::tools;

int main(int argc, char** argv) {
  CLI::App app{"Runs the fifteen acceptance experiments and prints one PASS/FAIL line each"};
  std::vector<int> only;
  std::string out;
  app.add_option("--only", only, "Run only these experiment numbers")->check(CLI::Range(1, 15));
  app.add_option("--out", out, "Also write a JSON report here (atomic)");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::function<Check()>> runs{
      [] { return three_squares_progression(); },
      [] { return four_squares(); },
      [] { return density_trend(); },
      [] { return partition_of_unity(); },
      [] { return amplitude_decay(); },
      [] { return stationary_phase(); },
      [] { return kernel_bounds(); },
      [] { return poisson_identity(); },
      [] { return vanishing_periodization(); },
      [] { return plane_family_rates(); },
      [] { return rectangle_family_rates(); },
      [] { return small_ball_exponent(); },
      [] { return p_gt_2_exponent(); },
      [] { return theorem_probe(); },
      [] { return exp_sum_moment(); },
  };
  const std::set<int> chosen(only.begin(), only.end());
  Json results = Json::array();
  int failed = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!chosen.empty() && !chosen.count(id)) continue;
    Check c;
    try {
      c = runs[i]();
    } catch (const std::exception& e) {
      c.name = "experiment " + std::to_string(id);
      c.summary = std::string("error: ") + e.what();
    }
    failed += !c.pass;
    std::printf("%s %2d %-32s %s [%.1f s]\n", c.pass ? "PASS" : "FAIL", id, c.name.c_str(), c.summary.c_str(),
                c.seconds);
    for (const auto& n : c.notes) std::printf("     note: %s\n", n.c_str());
    std::fflush(stdout);
    results.push_back({{"id", id}, {"name", c.name}, {"pass", c.pass}, {"summary", c.summary},
                       {"seconds", c.seconds}, {"detail", c.detail}, {"notes", c.notes}});
  }
  std::printf("%d of %zu passed\n", static_cast<int>(results.size()) - failed, results.size());
  if (!out.empty()) {
    Report r;
    r.command = "acceptance";
    r.status = failed ? "fail" : "pass";
    r.results = {{"experiments", results}};
    write_atomic(out, r.to_json().dump(2) + "\n");
  }
  return failed ? 1 : 0;
}
