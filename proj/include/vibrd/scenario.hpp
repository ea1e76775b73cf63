#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vibrd/analysis.hpp"
#include "vibrd/dynamics.hpp"

namespace vibrd {

using json = nlohmann::json;

/// One named acceptance check with its parameters.
struct CheckSpec {
  std::string name;
  json params;
};

struct CheckResult {
  std::string name;
  bool pass = false;
  double margin = 0.0;  // >= 0 when passing; distance to the threshold
  std::string detail;
};

/// A full experiment definition: feasible set, cost operator, optional
/// disturbances, initial state, solver configuration, and checks.
struct Scenario {
  std::string name;
  std::string description;
  std::optional<Polytope> polytope;
  CostOperator op;
  std::optional<TimeSignal> cost_disturbance;
  std::optional<TimeSignal> dynamics_disturbance;
  Vector x0;
  SolverConfig config;
  std::vector<CheckSpec> checks;

  const Polytope& set() const { return *polytope; }

  static Scenario from_json(const json& j);
  static Scenario from_file(const std::filesystem::path& path);
  json to_json() const;

  void validate() const;
};

/// The six built-in experiments, embedded so the binary reproduces the
/// reference runs with zero external files.
const std::vector<Scenario>& builtin_scenarios();
const Scenario* find_builtin(const std::string& name);

struct ScenarioListing {
  std::string name;
  std::string description;
  std::string source;  // "builtin" or the file path
};

/// Built-ins plus any *.json scenarios in `user_dir`; malformed files are
/// skipped and reported through `warnings`.
std::vector<ScenarioListing> list_scenarios(
    const std::optional<std::filesystem::path>& user_dir,
    std::vector<std::string>* warnings = nullptr);

struct RunOptions {
  bool write_svg = false;
  std::string format = "csv";  // "csv" or "json"
};

struct ScenarioSummary {
  std::string name;
  std::vector<CheckResult> checks;
  bool error = false;
  std::string error_message;
  Termination terminated_by = Termination::Horizon;
  Vector final_state;
  double final_gap = 0.0;
  double elapsed_seconds = 0.0;
  std::filesystem::path trajectory_path;
  std::filesystem::path analysis_path;
  std::filesystem::path svg_path;

  bool all_passed() const {
    if (error) return false;
    for (const CheckResult& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

/// Runs one scenario, writes trajectory + analysis artifacts under out_dir,
/// and evaluates its checks. Admissibility violations are captured into the
/// summary (with the partial trajectory still exported).
ScenarioSummary run_scenario(const Scenario& scn,
                             const std::filesystem::path& out_dir,
                             const RunOptions& opts = {});

/// Evaluates one check against a finished (possibly partial) run.
CheckResult evaluate_check(const CheckSpec& check, const Scenario& scn,
                           const TrajectoryRecord& traj, bool run_errored);

/// Analysis summary for a trajectory under a scenario's operator/set.
json analysis_summary(const Scenario& scn, const TrajectoryRecord& traj,
                      const std::vector<CheckResult>& checks);

}  // namespace vibrd
