#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "vibrd/batch.hpp"
#include "vibrd/errors.hpp"
#include "vibrd/export.hpp"
#include "vibrd/scenario.hpp"

namespace {

vibrd::Scenario resolve_scenario(const std::string& ref) {
  if (const vibrd::Scenario* s = vibrd::find_builtin(ref)) return *s;
  return vibrd::Scenario::from_file(ref);
}

std::filesystem::path default_out_dir() {
  if (const char* env = std::getenv("VI_BRD_OUT")) return env;
  return "out";
}

void print_summary(const vibrd::ScenarioSummary& s) {
  std::cout << "scenario " << s.name << ": "
            << (s.error ? "ERROR" : s.all_passed() ? "ok" : "check failures")
            << "  (" << s.elapsed_seconds << " s)\n";
  if (s.error) std::cout << "  error: " << s.error_message << "\n";
  for (const vibrd::CheckResult& c : s.checks)
    std::cout << "  [" << (c.pass ? "PASS" : "FAIL") << "] " << c.name
              << "  margin=" << c.margin << "  " << c.detail << "\n";
  if (!s.trajectory_path.empty())
    std::cout << "  trajectory: " << s.trajectory_path.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"best-response dynamics solver for variational inequalities "
               "on compact polytopes"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "run one or more scenarios");
  std::vector<std::string> run_refs;
  double opt_step = -1, opt_horizon = -1;
  std::string out_dir = default_out_dir().string();
  bool svg = false, parallel = false;
  std::string format = "csv";
  run->add_option("scenario", run_refs, "built-in name or scenario file")
      ->required();
  run->add_option("--step", opt_step, "override integration step");
  run->add_option("--horizon", opt_horizon, "override horizon");
  run->add_option("--out", out_dir, "output directory");
  run->add_flag("--svg", svg, "also write an SVG chart");
  run->add_option("--format", format, "trajectory format: csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  run->add_flag("--parallel,-j", parallel, "run scenarios in parallel");

  // list
  auto* list = app.add_subcommand("list", "list available scenarios");
  std::string list_dir;
  list->add_option("--dir", list_dir, "directory with user scenario files");

  // analyze
  auto* analyze =
      app.add_subcommand("analyze", "recompute analysis for a trajectory csv");
  std::string an_csv, an_scn, an_out;
  analyze->add_option("csv", an_csv, "trajectory csv")->required();
  analyze->add_option("--scenario", an_scn, "built-in name or scenario file")
      ->required();
  analyze->add_option("--out", an_out, "write the json here instead of stdout");

  // oracle
  auto* oracle =
      app.add_subcommand("oracle", "print the equilibrium oracle's solution");
  std::string or_scn;
  oracle->add_option("scenario", or_scn, "built-in name or scenario file")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      std::vector<vibrd::Scenario> scns;
      for (const std::string& ref : run_refs) {
        vibrd::Scenario s = resolve_scenario(ref);
        if (opt_step > 0) s.config.step_h = opt_step;
        if (opt_horizon > 0) s.config.horizon = opt_horizon;
        scns.push_back(std::move(s));
      }
      vibrd::RunOptions opts;
      opts.write_svg = svg;
      opts.format = format;
      std::vector<vibrd::ScenarioSummary> sums =
          vibrd::run_batch(scns, out_dir, opts, parallel);
      bool ok = true;
      for (const auto& s : sums) {
        print_summary(s);
        ok = ok && s.all_passed();
      }
      return ok ? 0 : 1;
    }
    if (*list) {
      std::vector<std::string> warnings;
      std::optional<std::filesystem::path> dir;
      if (!list_dir.empty()) dir = list_dir;
      for (const auto& entry : vibrd::list_scenarios(dir, &warnings))
        std::cout << entry.name << "  [" << entry.source << "]  "
                  << entry.description << "\n";
      for (const std::string& w : warnings)
        std::cerr << "warning: " << w << "\n";
      return 0;
    }
    if (*analyze) {
      vibrd::Scenario scn = resolve_scenario(an_scn);
      vibrd::TrajectoryRecord traj = vibrd::parse_csv(an_csv);
      std::vector<vibrd::CheckResult> checks;
      for (const vibrd::CheckSpec& c : scn.checks)
        checks.push_back(vibrd::evaluate_check(c, scn, traj, false));
      vibrd::json j = vibrd::analysis_summary(scn, traj, checks);
      if (an_out.empty()) {
        std::cout << j.dump(2) << "\n";
      } else {
        std::ofstream f(an_out);
        if (!f) throw vibrd::IoError("cannot write " + an_out);
        f << j.dump(2) << "\n";
      }
      bool ok = true;
      for (const auto& c : checks) ok = ok && c.pass;
      return ok ? 0 : 1;
    }
    if (*oracle) {
      vibrd::Scenario scn = resolve_scenario(or_scn);
      vibrd::Vector eq =
          vibrd::equilibrium_oracle(scn.op.base_only(), scn.set());
      std::cout << "[";
      for (int i = 0; i < eq.size(); ++i)
        std::cout << (i ? ", " : "") << eq(i);
      std::cout << "]\n";
      return 0;
    }
  } catch (const vibrd::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
