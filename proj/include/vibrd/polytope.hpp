#pragma once

#include <Eigen/Dense>
#include <vector>

namespace vibrd {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A vertex of a polytope together with the indices of its tight constraints
/// (inequality rows first, then equality rows offset by the inequality count).
struct Vertex {
  Vector coordinates;
  std::vector<int> active_set;
};

/// Compact convex polytope K = {x : Ax <= b, Cx = d}.
///
/// Construction validates nonemptiness (phase-1 LP) and boundedness
/// (2n bounding LPs); the dynamics and bounds all require compact K.
/// Immutable after construction; all member calls are pure.
class Polytope {
public:
  Polytope(Matrix A, Vector b, Matrix C, Vector d);

  static Polytope simplex(int n);
  static Polytope box(const Vector& lo, const Vector& hi);

  int dim() const { return n_; }
  const Matrix& A() const { return A_; }
  const Vector& b() const { return b_; }
  const Matrix& C() const { return C_; }
  const Vector& d() const { return d_; }
  int num_inequalities() const { return static_cast<int>(A_.rows()); }
  int num_equalities() const { return static_cast<int>(C_.rows()); }

  /// Coordinate-wise bounds established at construction.
  const Vector& box_lo() const { return box_lo_; }
  const Vector& box_hi() const { return box_hi_; }
  /// A feasible point (phase-1 witness).
  const Vector& witness() const { return witness_; }

  bool contains(const Vector& x, double tol) const;

  /// Exact linear minimization ("best response") oracle. Returns a vertex of
  /// K minimizing cost^T y; ties are resolved deterministically by greedy
  /// refinement over the optimal face (first coordinate maximized first).
  Vector lp_minimize(const Vector& cost) const;

  /// Optimal value of the same LP without the vertex/tie-break machinery.
  double lp_value(const Vector& cost) const;

  /// Euclidean projection onto K via an active-set QP with a KKT certificate.
  Vector project(const Vector& z) const;

  /// All vertices (n <= 8). Brute force over active-set combinations.
  std::vector<Vertex> enumerate_vertices() const;

  /// Max pairwise vertex distance (exact diameter for polytopes, n <= 8).
  double diameter() const;

  /// K intersected with one extra halfspace row^T x <= rhs (revalidated).
  Polytope with_extra_inequality(const Vector& row, double rhs) const;

private:
  Matrix A_;
  Vector b_;
  Matrix C_;
  Vector d_;
  int n_ = 0;
  Vector box_lo_, box_hi_;
  Vector witness_;
};

}  // namespace vibrd
