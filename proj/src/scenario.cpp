#include "vibrd/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>

#include "vibrd/errors.hpp"
#include "vibrd/export.hpp"

namespace vibrd {
namespace {

Vector vec_from_json(const json& j) {
  Vector v(j.size());
  int i = 0;
  for (const auto& x : j) v(i++) = x.get<double>();
  return v;
}

Matrix mat_from_json(const json& j) {
  if (j.empty()) return Matrix(0, 0);
  Matrix m(j.size(), j.front().size());
  int r = 0;
  for (const auto& row : j) {
    if (static_cast<Eigen::Index>(row.size()) != m.cols())
      throw ValidationError("ragged matrix in scenario json");
    int c = 0;
    for (const auto& x : row) m(r, c++) = x.get<double>();
    ++r;
  }
  return m;
}

json vec_to_json(const Vector& v) {
  json j = json::array();
  for (int i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

json mat_to_json(const Matrix& m) {
  json j = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    j.push_back(row);
  }
  return j;
}

Polytope polytope_from_json(const json& j) {
  if (j.contains("simplex")) return Polytope::simplex(j.at("simplex").get<int>());
  Matrix A = mat_from_json(j.at("A"));
  Vector b = vec_from_json(j.at("b"));
  int n = static_cast<int>(A.cols());
  Matrix C(0, n);
  Vector d(0);
  if (j.contains("C")) {
    C = mat_from_json(j.at("C"));
    d = vec_from_json(j.at("d"));
  }
  return Polytope(std::move(A), std::move(b), std::move(C), std::move(d));
}

bool is_simplex(const Polytope& K) {
  int n = K.dim();
  return K.num_inequalities() == n && K.num_equalities() == 1 &&
         K.A().isApprox(-Matrix::Identity(n, n)) && K.b().isZero(0.0) &&
         K.C().isApprox(Matrix::Ones(1, n)) && K.d().isApprox(Vector::Ones(1));
}

json polytope_to_json(const Polytope& K) {
  if (is_simplex(K)) return json{{"simplex", K.dim()}};
  json j;
  j["A"] = mat_to_json(K.A());
  j["b"] = vec_to_json(K.b());
  if (K.num_equalities() > 0) {
    j["C"] = mat_to_json(K.C());
    j["d"] = vec_to_json(K.d());
  }
  return j;
}

Perturbation perturbation_from_json(const json& j) {
  if (j.contains("entropy"))
    return Perturbation::entropy(j.at("entropy").get<double>());
  if (j.contains("affine"))
    return Perturbation::affine(mat_from_json(j.at("affine").at("P")),
                                vec_from_json(j.at("affine").at("r")));
  throw ValidationError("unknown perturbation fragment");
}

json perturbation_to_json(const Perturbation& p) {
  switch (p.kind) {
    case Perturbation::Kind::EntropyGradient:
      return json{{"entropy", p.eta}};
    case Perturbation::Kind::Affine:
      return json{{"affine", {{"P", mat_to_json(p.P)}, {"r", vec_to_json(p.r)}}}};
    case Perturbation::Kind::None:
      break;
  }
  return json();
}

CostOperator operator_from_json(const json& j) {
  AffineOperator base;
  if (j.contains("affine")) {
    base.M = mat_from_json(j.at("affine").at("M"));
    base.q = vec_from_json(j.at("affine").at("q"));
  } else if (j.contains("congestion")) {
    CongestionNetwork net;
    for (const auto& l : j.at("congestion").at("links"))
      net.links.push_back({vec_from_json(l.at("a")), l.at("b").get<double>()});
    for (const auto& r : j.at("congestion").at("routes"))
      net.routes.push_back(r.get<std::vector<int>>());
    base = build_congestion_operator(net);
  } else {
    throw ValidationError("operator fragment needs 'affine' or 'congestion'");
  }
  Perturbation pert;
  if (j.contains("perturbation"))
    pert = perturbation_from_json(j.at("perturbation"));
  return CostOperator(std::move(base), std::move(pert));
}

json operator_to_json(const CostOperator& op) {
  json j;
  j["affine"] = {{"M", mat_to_json(op.base().M)}, {"q", vec_to_json(op.base().q)}};
  if (!op.perturbation().is_none())
    j["perturbation"] = perturbation_to_json(op.perturbation());
  return j;
}

TimeSignal signal_from_json(const json& j, int dim) {
  TimeSignal s(dim);
  if (j.contains("terms")) {
    for (const auto& t : j.at("terms")) {
      SignalTerm term;
      term.amplitude = t.at("a").get<double>();
      term.omega = t.at("omega").get<double>();
      term.phase = t.value("phi", 0.0);
      std::string shape = t.value("shape", "sin");
      if (shape == "sin")
        term.shape = SignalTerm::Shape::Sin;
      else if (shape == "cos")
        term.shape = SignalTerm::Shape::Cos;
      else
        throw ValidationError("signal shape must be sin or cos");
      term.component = t.at("component").get<int>();
      s.add_term(term);
    }
  }
  if (j.contains("envelope"))
    s.set_envelope({j.at("envelope").at("k").get<double>(),
                    j.at("envelope").at("lambda").get<double>()});
  if (j.contains("constant")) s.set_constant(vec_from_json(j.at("constant")));
  return s;
}

json signal_to_json(const TimeSignal& s) {
  json j;
  json terms = json::array();
  for (const SignalTerm& t : s.terms())
    terms.push_back({{"a", t.amplitude},
                     {"omega", t.omega},
                     {"phi", t.phase},
                     {"shape", t.shape == SignalTerm::Shape::Sin ? "sin" : "cos"},
                     {"component", t.component}});
  j["terms"] = terms;
  if (s.envelope())
    j["envelope"] = {{"k", s.envelope()->scale},
                     {"lambda", s.envelope()->lambda}};
  if (!s.constant().isZero(0.0)) j["constant"] = vec_to_json(s.constant());
  return j;
}

SolverConfig config_from_json(const json& j) {
  SolverConfig cfg;
  cfg.step_h = j.value("step", 0.01);
  cfg.horizon = j.value("horizon", 30.0);
  cfg.gap_tolerance = j.value("gap_tolerance", 1e-8);
  cfg.stationarity_gap = j.value("stationarity_gap", 1e-10);
  cfg.record_stride = j.value("record_stride", 10);
  std::string method = j.value("method", "brd");
  if (method == "brd")
    cfg.method = Method::Brd;
  else if (method == "projected")
    cfg.method = Method::Projected;
  else
    throw ValidationError("method must be brd or projected");
  cfg.validate();
  return cfg;
}

json config_to_json(const SolverConfig& cfg) {
  return json{{"step", cfg.step_h},
              {"horizon", cfg.horizon},
              {"gap_tolerance", cfg.gap_tolerance},
              {"stationarity_gap", cfg.stationarity_gap},
              {"record_stride", cfg.record_stride},
              {"method", cfg.method == Method::Brd ? "brd" : "projected"}};
}

}  // namespace

Scenario Scenario::from_json(const json& j) {
  Scenario s;
  s.name = j.at("name").get<std::string>();
  s.description = j.value("description", "");
  s.polytope = polytope_from_json(j.at("polytope"));
  s.op = operator_from_json(j.at("operator"));
  int n = s.polytope->dim();
  if (j.contains("cost_disturbance"))
    s.cost_disturbance = signal_from_json(j.at("cost_disturbance"), n);
  if (j.contains("dynamics_disturbance"))
    s.dynamics_disturbance = signal_from_json(j.at("dynamics_disturbance"), n);
  s.x0 = vec_from_json(j.at("x0"));
  s.config = j.contains("config") ? config_from_json(j.at("config"))
                                  : SolverConfig{};
  if (j.contains("checks")) {
    for (const auto& c : j.at("checks")) {
      CheckSpec spec;
      spec.name = c.at("name").get<std::string>();
      spec.params = c;
      spec.params.erase("name");
      s.checks.push_back(std::move(spec));
    }
  }
  s.validate();
  return s;
}

Scenario Scenario::from_file(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open scenario file " + path.string());
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw ValidationError("scenario json parse error in " + path.string() +
                          ": " + e.what());
  }
  try {
    return from_json(j);
  } catch (const json::exception& e) {
    throw ValidationError("scenario schema error in " + path.string() + ": " +
                          e.what());
  }
}

json Scenario::to_json() const {
  json j;
  j["name"] = name;
  if (!description.empty()) j["description"] = description;
  j["polytope"] = polytope_to_json(*polytope);
  j["operator"] = operator_to_json(op);
  if (cost_disturbance) j["cost_disturbance"] = signal_to_json(*cost_disturbance);
  if (dynamics_disturbance)
    j["dynamics_disturbance"] = signal_to_json(*dynamics_disturbance);
  j["x0"] = vec_to_json(x0);
  j["config"] = config_to_json(config);
  json checks_j = json::array();
  for (const CheckSpec& c : checks) {
    json cj = c.params;
    cj["name"] = c.name;
    checks_j.push_back(cj);
  }
  j["checks"] = checks_j;
  return j;
}

void Scenario::validate() const {
  if (!polytope) throw ValidationError("scenario has no feasible set");
  int n = polytope->dim();
  if (op.dim() != n) throw DimensionMismatch("operator dimension mismatch");
  if (x0.size() != n) throw DimensionMismatch("x0 dimension mismatch");
  if (!polytope->contains(x0, 1e-9))
    throw ValidationError("x0 is not feasible for scenario " + name);
  if (cost_disturbance && cost_disturbance->dim() != n)
    throw DimensionMismatch("cost disturbance dimension mismatch");
  if (dynamics_disturbance && dynamics_disturbance->dim() != n)
    throw DimensionMismatch("dynamics disturbance dimension mismatch");
  static const char* known[] = {"final_state_near",    "final_gap_below",
                                "all_samples_feasible", "gap_decay_envelope",
                                "iss_ultimate_bound",   "no_convergence_liminf",
                                "admissible_throughout",
                                "perturbation_bound_holds"};
  for (const CheckSpec& c : checks) {
    bool found = false;
    for (const char* k : known) found = found || c.name == k;
    if (!found) throw ValidationError("unknown check '" + c.name + "'");
  }
  config.validate();
}

namespace {

// The three-route network whose actuated intersections couple the link
// delays across routes; composing the per-route links reproduces the
// rotational route-cost matrix [[2,3,1],[1,2,3],[3,1,2]].
json traffic_network_json() {
  return json::parse(R"({
    "congestion": {
      "links": [
        {"a": [1, 3, 0], "b": 0},
        {"a": [1, 1, 0], "b": 0},
        {"a": [0, 1, 3], "b": 0},
        {"a": [1, 0, 1], "b": 0},
        {"a": [3, 0, 1], "b": 0},
        {"a": [0, 1, 1], "b": 0}
      ],
      "routes": [[0, 3], [1, 2], [4, 5]]
    }
  })");
}

json congestion_operator_json() {
  return json::parse(R"({
    "affine": {
      "M": [[2.0, 0.0, 0.5], [0.0, 1.5, 0.5], [0.5, 0.5, 2.0]],
      "q": [0.3, 0.5, 0.6]
    }
  })");
}

json delta1_json() {
  return json::parse(R"({
    "terms": [
      {"a": 0.1,   "omega": 0.01, "phi": 0,   "shape": "sin", "component": 0},
      {"a": -0.05, "omega": 0.02, "phi": 10,  "shape": "cos", "component": 1},
      {"a": 0.15,  "omega": 0.05, "phi": -20, "shape": "sin", "component": 2}
    ]
  })");
}

json eps_json() {
  return json::parse(R"({
    "terms": [
      {"a": 0.7,  "omega": 0.1, "phi": 0,   "shape": "sin", "component": 0},
      {"a": 0.7,  "omega": 0.2, "phi": -10, "shape": "cos", "component": 1},
      {"a": -0.7, "omega": 0.1, "phi": 0,   "shape": "sin", "component": 2},
      {"a": -0.7, "omega": 0.2, "phi": -10, "shape": "cos", "component": 2}
    ]
  })");
}

constexpr double kCongEqX1 = 29.0 / 65.0;
constexpr double kCongEqX2 = 30.0 / 65.0;
constexpr double kCongEqX3 = 6.0 / 65.0;

std::vector<Scenario> make_builtins() {
  std::vector<Scenario> out;

  {
    json j;
    j["name"] = "traffic";
    j["description"] =
        "three-route network with actuated intersections; monotone game";
    j["polytope"] = {{"simplex", 3}};
    j["operator"] = traffic_network_json();
    j["x0"] = {1.0, 0.0, 0.0};
    j["config"] = {{"step", 0.01}, {"horizon", 30.0}};
    j["checks"] = json::array(
        {{{"name", "final_state_near"},
          {"target", {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}},
          {"tol", 1e-3}},
         {{"name", "all_samples_feasible"}, {"tol", 1e-7}}});
    out.push_back(Scenario::from_json(j));
  }
  {
    json j;
    j["name"] = "traffic-constrained";
    j["description"] =
        "traffic game on the simplex cut by capacity and delay constraints";
    j["polytope"] = {
        {"A", {{-1, 0, 0}, {0, -1, 0}, {0, 0, -1}, {0, 1, 1}, {0, 1, 3}, {3, 0, 1}}},
        {"b", {0.0, 0.0, 0.0, 0.9, 2.0, 2.0}},
        {"C", {{1, 1, 1}}},
        {"d", {1.0}}};
    j["operator"] = traffic_network_json();
    j["x0"] = {0.2, 0.4, 0.4};
    j["config"] = {{"step", 0.01}, {"horizon", 30.0}};
    j["checks"] = json::array(
        {{{"name", "all_samples_feasible"}, {"tol", 1e-7}},
         {{"name", "final_gap_below"}, {"tol", 1e-6}}});
    out.push_back(Scenario::from_json(j));
  }
  {
    json j;
    j["name"] = "congestion";
    j["description"] = "strongly monotone three-route congestion game";
    j["polytope"] = {{"simplex", 3}};
    j["operator"] = congestion_operator_json();
    j["x0"] = {0.8, 0.1, 0.1};
    j["config"] = {{"step", 0.01}, {"horizon", 30.0}};
    j["checks"] = json::array(
        {{{"name", "final_gap_below"}, {"tol", 1e-6}},
         {{"name", "final_state_near"},
          {"target", {kCongEqX1, kCongEqX2, kCongEqX3}},
          {"tol", 1e-4}},
         {{"name", "gap_decay_envelope"}, {"slack_per_h", 10.0}}});
    out.push_back(Scenario::from_json(j));
  }
  {
    json j;
    j["name"] = "congestion-delta1";
    j["description"] = "congestion game under the periodic cost disturbance";
    j["polytope"] = {{"simplex", 3}};
    j["operator"] = congestion_operator_json();
    j["cost_disturbance"] = delta1_json();
    j["x0"] = {0.8, 0.1, 0.1};
    j["config"] = {{"step", 0.01}, {"horizon", 500.0}};
    j["checks"] = json::array(
        {{{"name", "iss_ultimate_bound"}, {"t_min", 200.0}},
         {{"name", "no_convergence_liminf"},
          {"t_min", 200.0},
          {"t_max", 500.0},
          {"threshold", 1e-6}}});
    out.push_back(Scenario::from_json(j));
  }
  {
    json j;
    j["name"] = "congestion-delta2";
    j["description"] = "congestion game under the diminishing cost disturbance";
    j["polytope"] = {{"simplex", 3}};
    j["operator"] = congestion_operator_json();
    json d2 = delta1_json();
    d2["envelope"] = {{"k", 20.0}, {"lambda", 0.01}};
    j["cost_disturbance"] = d2;
    j["x0"] = {0.8, 0.1, 0.1};
    j["config"] = {{"step", 0.01}, {"horizon", 1500.0}};
    j["checks"] = json::array(
        {{{"name", "final_state_near"},
          {"target", {kCongEqX1, kCongEqX2, kCongEqX3}},
          {"tol", 1e-2}}});
    out.push_back(Scenario::from_json(j));
  }
  {
    json j;
    j["name"] = "congestion-eps";
    j["description"] = "congestion game under the periodic dynamics disturbance";
    j["polytope"] = {{"simplex", 3}};
    j["operator"] = congestion_operator_json();
    j["dynamics_disturbance"] = eps_json();
    j["x0"] = {0.8, 0.1, 0.1};
    j["config"] = {{"step", 0.01}, {"horizon", 500.0}};
    j["checks"] = json::array(
        {{{"name", "admissible_throughout"}},
         {{"name", "iss_ultimate_bound"}, {"t_min", 100.0}}});
    out.push_back(Scenario::from_json(j));
  }
  return out;
}

}  // namespace

const std::vector<Scenario>& builtin_scenarios() {
  static const std::vector<Scenario> builtins = make_builtins();
  return builtins;
}

const Scenario* find_builtin(const std::string& name) {
  for (const Scenario& s : builtin_scenarios())
    if (s.name == name) return &s;
  return nullptr;
}

std::vector<ScenarioListing> list_scenarios(
    const std::optional<std::filesystem::path>& user_dir,
    std::vector<std::string>* warnings) {
  std::vector<ScenarioListing> out;
  for (const Scenario& s : builtin_scenarios())
    out.push_back({s.name, s.description, "builtin"});
  if (user_dir) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(*user_dir))
      if (entry.is_regular_file() && entry.path().extension() == ".json")
        files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      try {
        Scenario s = Scenario::from_file(f);
        out.push_back({s.name, s.description, f.string()});
      } catch (const Error& e) {
        if (warnings) warnings->push_back(f.string() + ": " + e.what());
      }
    }
  }
  return out;
}

namespace {

double max_feasibility_violation(const Polytope& K, const Vector& x) {
  double v = 0.0;
  if (K.num_inequalities() > 0)
    v = std::max(v, (K.A() * x - K.b()).maxCoeff());
  if (K.num_equalities() > 0)
    v = std::max(v, (K.C() * x - K.d()).cwiseAbs().maxCoeff());
  return v;
}

}  // namespace

CheckResult evaluate_check(const CheckSpec& check, const Scenario& scn,
                           const TrajectoryRecord& traj, bool run_errored) {
  CheckResult r;
  r.name = check.name;
  const Polytope& K = scn.set();
  try {
    if (check.name == "final_state_near") {
      Vector target = vec_from_json(check.params.at("target"));
      double tol = check.params.at("tol").get<double>();
      double dist = (traj.final_state() - target).norm();
      r.pass = !run_errored && dist <= tol;
      r.margin = tol - dist;
      r.detail = "distance " + std::to_string(dist);
    } else if (check.name == "final_gap_below") {
      double tol = check.params.at("tol").get<double>();
      r.pass = !run_errored && traj.final_gap() <= tol;
      r.margin = tol - traj.final_gap();
      r.detail = "gap " + std::to_string(traj.final_gap());
    } else if (check.name == "all_samples_feasible") {
      double tol = check.params.at("tol").get<double>();
      double worst = 0.0;
      for (const Vector& x : traj.states)
        worst = std::max(worst, max_feasibility_violation(K, x));
      r.pass = !run_errored && worst <= tol;
      r.margin = tol - worst;
      r.detail = "max violation " + std::to_string(worst);
    } else if (check.name == "gap_decay_envelope") {
      double slack = check.params.at("slack_per_h").get<double>();
      DecayCheck dc = check_exponential_decay(traj, slack);
      r.pass = !run_errored && dc.ok;
      r.margin = -dc.max_violation;
      r.detail = dc.ok ? "within envelope"
                       : "violated at sample " + std::to_string(dc.first_violation);
    } else if (check.name == "iss_ultimate_bound") {
      double t_min = check.params.at("t_min").get<double>();
      IssConstants consts = iss_constants(scn.op.base_only(), K);
      Vector xstar = equilibrium_oracle(scn.op.base_only(), K);
      double sup_delta = 0.0, sup_ddot = 0.0, sup_eps = 0.0;
      if (scn.cost_disturbance) {
        SignalBounds sb = scn.cost_disturbance->bounds();
        sup_delta = sb.sup_norm;
        sup_ddot = sb.derivative_sup_norm;
      }
      if (scn.dynamics_disturbance)
        sup_eps = scn.dynamics_disturbance->bounds().sup_norm;
      double bound = iss_bound(consts, sup_eps, sup_delta, sup_ddot, 0.0,
                               std::numeric_limits<double>::infinity());
      double sup_dist = -1.0;
      for (size_t k = 0; k < traj.times.size(); ++k)
        if (traj.times[k] >= t_min)
          sup_dist = std::max(sup_dist, (traj.states[k] - xstar).norm());
      if (sup_dist < 0) {
        r.pass = false;
        r.margin = -bound;
        r.detail = "no samples at t >= " + std::to_string(t_min);
      } else {
        r.pass = !run_errored && sup_dist <= bound;
        r.margin = bound - sup_dist;
        r.detail = "sup distance " + std::to_string(sup_dist) + " vs bound " +
                   std::to_string(bound);
      }
    } else if (check.name == "no_convergence_liminf") {
      double t_min = check.params.at("t_min").get<double>();
      double t_max = check.params.at("t_max").get<double>();
      double threshold = check.params.at("threshold").get<double>();
      Vector xstar = equilibrium_oracle(scn.op.base_only(), K);
      double liminf = std::numeric_limits<double>::infinity();
      for (size_t k = 0; k < traj.times.size(); ++k)
        if (traj.times[k] >= t_min && traj.times[k] <= t_max)
          liminf = std::min(liminf, (traj.states[k] - xstar).norm());
      r.pass = !run_errored && std::isfinite(liminf) && liminf > threshold;
      r.margin = liminf - threshold;
      r.detail = "liminf " + std::to_string(liminf);
    } else if (check.name == "admissible_throughout") {
      r.pass = !run_errored && traj.terminated_by != Termination::Error;
      r.margin = r.pass ? 0.0 : -1.0;
      r.detail = r.pass ? "no violation" : "admissibility violated";
    } else if (check.name == "perturbation_bound_holds") {
      const Perturbation& pert = scn.op.perturbation();
      if (pert.is_none())
        throw ValidationError("scenario has no perturbation");
      CostOperator base = scn.op.base_only();
      Vector xstar = equilibrium_oracle(base, K);
      MonotonicityReport rep = check_monotonicity(base, K);
      double bound =
          perturbation_bound(traj.final_state(), base, pert, K, rep.c);
      double measured = (traj.final_state() - xstar).norm();
      r.pass = !run_errored && measured <= bound;
      r.margin = bound - measured;
      r.detail = "measured " + std::to_string(measured) + " vs bound " +
                 std::to_string(bound);
    } else {
      r.pass = false;
      r.detail = "unknown check";
    }
  } catch (const Error& e) {
    r.pass = false;
    r.margin = -std::numeric_limits<double>::infinity();
    r.detail = std::string("check failed: ") + e.what();
  }
  return r;
}

json analysis_summary(const Scenario& scn, const TrajectoryRecord& traj,
                      const std::vector<CheckResult>& checks) {
  json j;
  j["scenario"] = scn.name;
  j["gap_final"] = traj.final_gap();
  j["terminated_by"] = traj.terminated_by == Termination::Horizon
                           ? "horizon"
                           : traj.terminated_by == Termination::GapTolerance
                                 ? "gap_tolerance"
                                 : "error";
  try {
    Vector eq = equilibrium_oracle(scn.op.base_only(), scn.set());
    j["equilibrium"] = vec_to_json(eq);
  } catch (const Error&) {
    j["equilibrium"] = nullptr;
  }
  try {
    IssConstants c = iss_constants(scn.op.base_only(), scn.set());
    j["iss"] = {{"c", c.c}, {"sigma", c.sigma}, {"M1", c.m1}, {"DK", c.diameter}};
  } catch (const Error&) {
    j["iss"] = nullptr;
  }
  json bc = json::array();
  for (const CheckResult& c : checks)
    bc.push_back({{"name", c.name}, {"pass", c.pass}, {"margin", c.margin}});
  j["bound_checks"] = bc;
  if (!traj.warnings.empty()) j["warnings"] = traj.warnings;
  return j;
}

ScenarioSummary run_scenario(const Scenario& scn,
                             const std::filesystem::path& out_dir,
                             const RunOptions& opts) {
  scn.validate();
  std::filesystem::create_directories(out_dir);
  ScenarioSummary sum;
  sum.name = scn.name;
  const auto t_start = std::chrono::steady_clock::now();

  const Polytope& K = scn.set();
  const int n = K.dim();
  TimeSignal delta =
      scn.cost_disturbance ? *scn.cost_disturbance : TimeSignal::zero(n);
  TimeSignal eps = scn.dynamics_disturbance ? *scn.dynamics_disturbance
                                            : TimeSignal::zero(n);

  TrajectoryRecord traj;
  try {
    if (scn.config.method == Method::Projected) {
      traj = integrate_projected(scn.x0, scn.op, K, scn.config);
    } else {
      TrajectoryRecord partial;
      try {
        traj = integrate_brd(scn.x0, scn.op, K, delta, eps, scn.config,
                             &partial);
      } catch (const AdmissibilityViolated& e) {
        sum.error = true;
        sum.error_message = e.what();
        traj = std::move(partial);
        traj.terminated_by = Termination::Error;
      }
    }
  } catch (const Error& e) {
    sum.error = true;
    sum.error_message = e.what();
  }

  if (!traj.states.empty()) {
    sum.terminated_by = traj.terminated_by;
    sum.final_state = traj.final_state();
    sum.final_gap = traj.final_gap();
    for (const CheckSpec& c : scn.checks)
      sum.checks.push_back(evaluate_check(c, scn, traj, sum.error));

    if (opts.format == "json") {
      sum.trajectory_path = out_dir / (scn.name + "_trajectory.json");
      json tj;
      tj["times"] = traj.times;
      tj["gaps"] = traj.gaps;
      json states = json::array();
      for (const Vector& x : traj.states) states.push_back(vec_to_json(x));
      tj["states"] = states;
      std::ofstream f(sum.trajectory_path);
      if (!f) throw IoError("cannot write " + sum.trajectory_path.string());
      f << tj.dump(2) << "\n";
    } else {
      sum.trajectory_path = out_dir / (scn.name + ".csv");
      export_csv(traj, sum.trajectory_path);
    }
    sum.analysis_path = out_dir / (scn.name + "_analysis.json");
    {
      json aj = analysis_summary(scn, traj, sum.checks);
      if (sum.error) aj["error"] = sum.error_message;
      std::ofstream f(sum.analysis_path);
      if (!f) throw IoError("cannot write " + sum.analysis_path.string());
      f << aj.dump(2) << "\n";
    }
    if (opts.write_svg) {
      sum.svg_path = out_dir / (scn.name + ".svg");
      std::ofstream f(sum.svg_path);
      if (!f) throw IoError("cannot write " + sum.svg_path.string());
      f << trajectory_svg(traj, scn.name);
    }
  } else if (!sum.error) {
    sum.error = true;
    sum.error_message = "integrator produced no samples";
  }

  sum.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return sum;
}

}  // namespace vibrd
