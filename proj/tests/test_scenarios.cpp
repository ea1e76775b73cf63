#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "test_helpers.hpp"
#include "vibrd/errors.hpp"
#include "vibrd/export.hpp"
#include "vibrd/scenario.hpp"

using namespace vibrd;
using testing::vec3;

namespace {

std::filesystem::path temp_dir(const std::string& leaf) {
  auto p = std::filesystem::temp_directory_path() / leaf;
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(f), {});
}

}  // namespace

TEST_CASE("built-in listing") {
  auto entries = list_scenarios(std::nullopt);
  REQUIRE(entries.size() == 6);
  const char* expected[] = {"traffic",           "traffic-constrained",
                            "congestion",        "congestion-delta1",
                            "congestion-delta2", "congestion-eps"};
  for (int i = 0; i < 6; ++i) CHECK(entries[static_cast<size_t>(i)].name == expected[i]);
}

TEST_CASE("user scenario files extend the listing; malformed files warn") {
  auto dir = temp_dir("vibrd_scn");
  {
    json j = find_builtin("congestion")->to_json();
    j["name"] = "my-congestion";
    std::ofstream f(dir / "mine.json");
    f << j.dump(2);
  }
  std::vector<std::string> warnings;
  auto entries = list_scenarios(dir, &warnings);
  CHECK(entries.size() == 7);
  CHECK(warnings.empty());

  {
    std::ofstream f(dir / "broken.json");
    f << "{ not json";
  }
  warnings.clear();
  entries = list_scenarios(dir, &warnings);
  CHECK(entries.size() == 7);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("broken.json") != std::string::npos);
}

TEST_CASE("scenario json round-trips") {
  for (const Scenario& s : builtin_scenarios()) {
    json j1 = s.to_json();
    Scenario parsed = Scenario::from_json(j1);
    CHECK(parsed.to_json() == j1);
  }
}

TEST_CASE("x0 must be feasible") {
  json j = find_builtin("congestion")->to_json();
  j["x0"] = {2.0, 0.0, -1.0};
  CHECK_THROWS_AS(Scenario::from_json(j), ValidationError);
  j = find_builtin("congestion")->to_json();
  j["checks"] = json::array({{{"name", "no_such_check"}}});
  CHECK_THROWS_AS(Scenario::from_json(j), ValidationError);
}

TEST_CASE("csv export") {
  TrajectoryRecord traj;
  traj.step_h = 0.5;
  traj.times = {0.0, 0.5};
  traj.states = {vec3(1, 0, 0), vec3(0.9, 0.1, 0)};
  traj.gaps = {1.0, 0.9};
  traj.disturbance_norms = {{0.0, 0.0}, {0.1, 0.0}};

  auto dir = temp_dir("vibrd_csv");
  export_csv(traj, dir / "t.csv");
  std::string text = slurp(dir / "t.csv");
  CHECK(text ==
        "t,x_1,x_2,x_3,gap,norm_delta,norm_eps\n"
        "0,1,0,0,1,0,0\n"
        "0.5,0.9,0.1,0,0.9,0.1,0\n");

  export_csv(traj, dir / "t2.csv");
  CHECK(slurp(dir / "t2.csv") == text);  // byte-identical re-export

  TrajectoryRecord back = parse_csv(dir / "t.csv");
  REQUIRE(back.times.size() == 2);
  for (size_t k = 0; k < 2; ++k) {
    CHECK(std::abs(back.times[k] - traj.times[k]) <= 1e-11);
    CHECK((back.states[k] - traj.states[k]).lpNorm<Eigen::Infinity>() <= 1e-11);
    CHECK(std::abs(back.gaps[k] - traj.gaps[k]) <= 1e-11);
  }
}

TEST_CASE("round-trip at full precision") {
  Polytope S = Polytope::simplex(3);
  TrajectoryRecord traj = integrate_brd(
      vec3(0.8, 0.1, 0.1), testing::congestion_operator(), S,
      TimeSignal::zero(3), TimeSignal::zero(3), SolverConfig{});
  auto dir = temp_dir("vibrd_rt");
  export_csv(traj, dir / "run.csv");
  TrajectoryRecord back = parse_csv(dir / "run.csv");
  REQUIRE(back.times.size() == traj.times.size());
  for (size_t k = 0; k < traj.times.size(); ++k)
    CHECK((back.states[k] - traj.states[k]).lpNorm<Eigen::Infinity>() <= 1e-11);
}

TEST_CASE("run_scenario writes artifacts and passes its checks") {
  auto dir = temp_dir("vibrd_run");
  RunOptions opts;
  opts.write_svg = true;
  ScenarioSummary sum = run_scenario(*find_builtin("traffic"), dir, opts);
  CHECK(sum.all_passed());
  CHECK(sum.elapsed_seconds < 10.0);
  CHECK(std::filesystem::exists(sum.trajectory_path));
  CHECK(std::filesystem::exists(sum.analysis_path));
  CHECK(std::filesystem::exists(sum.svg_path));
  std::string svg = slurp(sum.svg_path);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);

  json aj = json::parse(slurp(sum.analysis_path));
  CHECK(aj.contains("gap_final"));
  CHECK(aj.contains("equilibrium"));
  CHECK(aj.contains("bound_checks"));
}

TEST_CASE("two runs produce byte-identical trajectories") {
  auto d1 = temp_dir("vibrd_det1");
  auto d2 = temp_dir("vibrd_det2");
  ScenarioSummary a = run_scenario(*find_builtin("congestion"), d1);
  ScenarioSummary b = run_scenario(*find_builtin("congestion"), d2);
  CHECK(slurp(a.trajectory_path) == slurp(b.trajectory_path));
}

TEST_CASE("admissibility violation is captured, artifacts still written") {
  auto dir = temp_dir("vibrd_eps");
  ScenarioSummary sum = run_scenario(*find_builtin("congestion-eps"), dir);
  CHECK(sum.error);
  CHECK_FALSE(sum.all_passed());
  CHECK(sum.error_message.find("t=11.36") != std::string::npos);
  CHECK(std::filesystem::exists(sum.trajectory_path));
  bool admissible_failed = false;
  for (const CheckResult& c : sum.checks)
    if (c.name == "admissible_throughout" && !c.pass) admissible_failed = true;
  CHECK(admissible_failed);
}

TEST_CASE("json trajectory format") {
  auto dir = temp_dir("vibrd_json");
  RunOptions opts;
  opts.format = "json";
  ScenarioSummary sum = run_scenario(*find_builtin("traffic"), dir, opts);
  json tj = json::parse(slurp(sum.trajectory_path));
  CHECK(tj.contains("times"));
  CHECK(tj.contains("states"));
  CHECK(tj["times"].size() == tj["states"].size());
}

TEST_CASE("every built-in finishes well inside the time budget") {
  auto dir = temp_dir("vibrd_all");
  for (const Scenario& s : builtin_scenarios()) {
    ScenarioSummary sum = run_scenario(s, dir);
    CHECK(sum.elapsed_seconds < 10.0);
    if (s.name != "congestion-eps") {
      CHECK_FALSE(sum.error);
      CHECK(sum.all_passed());
    }
  }
}
