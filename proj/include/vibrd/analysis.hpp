#pragma once

#include "vibrd/dynamics.hpp"
#include "vibrd/operators.hpp"
#include "vibrd/polytope.hpp"

namespace vibrd {

/// Gap function V(x) = x^T F(x) - min_{y in K} y^T F(x); nonnegative on K,
/// zero exactly on SOL(K, F). One LP call.
double gap(const Vector& x, const CostOperator& F, const Polytope& K);

/// True iff gap(x, F, K) <= tol, i.e. (y-x)^T F(x) >= -tol for all y in K.
bool verify_solution(const Vector& x, const CostOperator& F, const Polytope& K,
                     double tol);

struct DecayCheck {
  bool ok = true;
  double max_violation = 0.0;  // max over samples of gap - envelope
  int first_violation = -1;
};

/// Discrete shadow of dV/dt <= -V: checks
/// gaps[k] <= gaps[0] e^{-t_k} + slack_per_h * h for every sample.
DecayCheck check_exponential_decay(const TrajectoryRecord& traj,
                                   double slack_per_h);

/// Constants consumed by the disturbance bound: strong-monotonicity modulus c
/// on the tangent space, spectral norm sigma of DF, M1 = max |F| over K, and
/// the diameter of K.
struct IssConstants {
  double c = 0.0;
  double sigma = 0.0;
  double m1 = 0.0;
  double diameter = 0.0;
};

IssConstants iss_constants(const CostOperator& F, const Polytope& K);

/// Ultimate bound on |x(t) - x*| under bounded disturbances:
///   Gamma = sup_ddot^2/(2c) + sigma^2 sup_eps^2/(2c) + M1 sup_eps
///           + sup_eps sup_delta,
///   V1(t) <= V2(0) e^{-t} + Gamma + D_K sup_delta,
/// inverted through alpha_1(s) = c s^2.
double iss_bound(const IssConstants& consts, double sup_eps, double sup_delta,
                 double sup_delta_dot, double v2_at_start, double t);

/// h(x) = max{(z-x)^T delta(x) : z minimizes y^T F(x) over K}, computed as a
/// secondary LP over the optimal face (declared with 1e-9 value tolerance).
double h_function(const Vector& x, const CostOperator& F,
                  const Perturbation& delta, const Polytope& K);

/// Bound on |x* - xtilde*| at a perturbed equilibrium:
/// sqrt(max(h(xtilde*), 0) / c).
double perturbation_bound(const Vector& x_tilde, const CostOperator& F,
                          const Perturbation& delta, const Polytope& K,
                          double c);

/// Independent test oracle: solves VI(K, F) for affine F (n <= 6) by
/// enumerating candidate active sets, solving each KKT system, and returning
/// the first feasible candidate whose LP-certified gap is at most 1e-9.
/// Deliberately separate from the integrators' code path.
Vector equilibrium_oracle(const CostOperator& F, const Polytope& K);

}  // namespace vibrd
