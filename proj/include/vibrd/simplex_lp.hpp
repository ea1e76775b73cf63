#pragma once

#include <Eigen/Dense>

namespace vibrd::detail {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Eigen::VectorXd x;       // primal solution in the caller's variables
  double objective = 0.0;  // c^T x at the optimum
  bool unique = true;      // false if a zero reduced cost flags alternate optima
};

/// Dense two-phase primal simplex with Bland's anti-cycling rule for
///   min c^T w   s.t.   G w <= g,  E w = e,  w >= 0.
/// Small instances only; everything is kept in one explicit tableau.
LpResult solve_lp_nonneg(const Eigen::VectorXd& c,
                         const Eigen::MatrixXd& G, const Eigen::VectorXd& g,
                         const Eigen::MatrixXd& E, const Eigen::VectorXd& e);

/// Same solver for free variables, via the split w = w+ - w-.
/// Used for construction-time feasibility and bounding probes where the
/// returned point need not be an extreme point of {Gx<=g, Ex=e}.
LpResult solve_lp_free(const Eigen::VectorXd& c,
                       const Eigen::MatrixXd& G, const Eigen::VectorXd& g,
                       const Eigen::MatrixXd& E, const Eigen::VectorXd& e);

}  // namespace vibrd::detail
