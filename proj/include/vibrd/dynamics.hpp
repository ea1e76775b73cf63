#pragma once

#include <string>
#include <vector>

#include "vibrd/operators.hpp"
#include "vibrd/polytope.hpp"
#include "vibrd/signals.hpp"

namespace vibrd {

enum class Method { Brd, Projected };

struct SolverConfig {
  double step_h = 0.01;
  double horizon = 30.0;
  double gap_tolerance = 1e-8;
  double stationarity_gap = 1e-10;  // freeze threshold, see brd_step
  Method method = Method::Brd;
  int record_stride = 10;

  void validate() const;
};

enum class Termination { Horizon, GapTolerance, Error };

/// Sampled trajectory of one integration run.
struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<Vector> states;
  std::vector<double> gaps;  // V(x) w.r.t. the undisturbed operator
  std::vector<std::pair<double, double>> disturbance_norms;  // {|Delta|, |eps|}
  Termination terminated_by = Termination::Horizon;
  double step_h = 0.0;
  std::vector<std::string> warnings;

  size_t size() const { return times.size(); }
  const Vector& final_state() const { return states.back(); }
  double final_gap() const { return gaps.back(); }
};

/// One explicit Euler step of the best-response dynamics:
/// beta = lp_minimize(F(x) + delta); freeze when the disturbed gap is at most
/// stationarity_gap and eps = 0; otherwise x + h (beta - x + eps). With
/// eps = 0 and h <= 1 the result is a convex combination of x and a vertex,
/// so no projection is performed.
Vector brd_step(const Vector& x, const CostOperator& F, const Polytope& K,
                const Vector& delta, const Vector& eps, double h,
                double stationarity_gap = 1e-10);

/// Forward-Euler iteration of brd_step with time signals Delta(t_k), eps(t_k).
/// Steps whose best-response vertex is no longer optimal at the arrival state
/// (a switching-surface crossing) are resolved semi-implicitly by solving the
/// inclusion on the step homothet (1-h)x + hK, which removes the O(h)
/// chattering band around equilibria and makes them exact fixed points.
/// Stops at the horizon, or once the gap stays at most gap_tolerance for 10
/// consecutive samples when both disturbances are identically zero.
/// On an admissibility violation the partial record (terminated_by = Error)
/// is written to `partial` when given, then AdmissibilityViolated is thrown
/// with the offending time.
TrajectoryRecord integrate_brd(const Vector& x0, const CostOperator& F,
                               const Polytope& K, const TimeSignal& delta,
                               const TimeSignal& eps, const SolverConfig& cfg,
                               TrajectoryRecord* partial = nullptr);

/// Same loop with the state-dependent cost pi = F(x) + delta(x); converges to
/// the perturbed equilibrium (gap of F + delta below gap_tolerance).
TrajectoryRecord integrate_perturbed_br(const Vector& x0, const CostOperator& F,
                                        const Perturbation& delta,
                                        const Polytope& K,
                                        const SolverConfig& cfg);

/// Discrete projected-dynamics baseline x+ = project(K, x - h F(x)).
/// Fixed points coincide with SOL(K, F).
TrajectoryRecord integrate_projected(const Vector& x0, const CostOperator& F,
                                     const Polytope& K, const SolverConfig& cfg);

}  // namespace vibrd
