#pragma once

#include <random>
#include <vector>

#include "vibrd/polytope.hpp"

namespace vibrd {

/// Affine cost map F(x) = Mx + q with DF(x) = M everywhere.
struct AffineOperator {
  Matrix M;
  Vector q;

  Vector evaluate(const Vector& x) const { return M * x + q; }
  int dim() const { return static_cast<int>(M.rows()); }
};

/// Affine link delay Phi_l(x) = a^T x + b over route flows.
struct LinkDelay {
  Vector a;
  double b = 0.0;
};

/// Routes as link-index subsets; the route cost is the sum of its link delays.
struct CongestionNetwork {
  std::vector<LinkDelay> links;
  std::vector<std::vector<int>> routes;
};

/// Row i of the induced operator sums the delay coefficients of route i's links.
AffineOperator build_congestion_operator(const CongestionNetwork& net);

/// Gradient of the scaled entropy regularizer, delta_i = eta (ln x_i + 1),
/// with x clamped at x_floor = 1e-12 before the logarithm.
Vector entropy_gradient(const Vector& x, double eta);

/// Floor used by the entropy clamp.
inline constexpr double kEntropyFloor = 1e-12;

/// State-dependent perturbation delta added on top of an affine base cost.
struct Perturbation {
  enum class Kind { None, EntropyGradient, Affine };
  Kind kind = Kind::None;
  double eta = 0.0;  // entropy weight
  Matrix P;          // affine delta(x) = Px + r
  Vector r;

  static Perturbation none() { return {}; }
  static Perturbation entropy(double eta);
  static Perturbation affine(Matrix P, Vector r);

  bool is_none() const { return kind == Kind::None; }
  Vector evaluate(const Vector& x, bool* clamped = nullptr) const;
  Matrix jacobian(const Vector& x) const;  // DomainError at the entropy clamp
};

/// The cost map used by the dynamics: affine base plus optional perturbation.
/// Immutable; evaluation and Jacobian calls are pure.
class CostOperator {
public:
  CostOperator() = default;
  explicit CostOperator(AffineOperator base, Perturbation pert = {})
      : base_(std::move(base)), pert_(std::move(pert)) {}

  int dim() const { return base_.dim(); }
  const AffineOperator& base() const { return base_; }
  const Perturbation& perturbation() const { return pert_; }
  bool is_affine() const { return pert_.kind != Perturbation::Kind::EntropyGradient; }

  /// pi = F(x); with an entropy perturbation the boundary is clamped and
  /// flagged through `clamped` rather than raised.
  Vector evaluate(const Vector& x, bool* clamped = nullptr) const;

  /// Exact M for affine parts; analytic eta/x_i diagonal for the entropy term.
  Matrix jacobian(const Vector& x) const;

  /// Base + affine perturbation folded into one affine map. Throws
  /// ValidationError for the entropy kind.
  AffineOperator as_affine() const;

  CostOperator with_perturbation(Perturbation p) const {
    return CostOperator(base_, std::move(p));
  }
  CostOperator base_only() const { return CostOperator(base_); }

private:
  AffineOperator base_;
  Perturbation pert_;
};

struct MonotonicityReport {
  enum class Class { StronglyMonotone, Monotone, Indefinite };
  Class classification = Class::Indefinite;
  double c = 0.0;          // smallest tangent-space eigenvalue of the symmetric part
  bool empirical = false;  // true when obtained by sampling (non-affine operators)
};

/// Classifies F on K by the smallest eigenvalue of Z^T ((M+M^T)/2) Z, where Z
/// spans the null space of the equality constraints. Non-affine operators are
/// sampled at random feasible points and flagged empirical.
MonotonicityReport check_monotonicity(const CostOperator& F, const Polytope& K,
                                      double tol = 1e-9);

/// Orthonormal basis of the tangent space {z : Cz = 0} (identity when p = 0).
Matrix equality_nullspace_basis(const Polytope& K);

/// Random point of K as a random convex combination of its vertices (n <= 8).
Vector random_feasible_point(const Polytope& K, const std::vector<Vertex>& verts,
                             std::mt19937_64& rng);

}  // namespace vibrd
