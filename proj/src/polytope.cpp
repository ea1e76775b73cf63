#include "vibrd/polytope.hpp"

#include <algorithm>
#include <cmath>

#include "vibrd/errors.hpp"
#include "vibrd/simplex_lp.hpp"

namespace vibrd {
namespace {

constexpr double kFeasTol = 1e-9;
constexpr double kFaceTol = 1e-9;
constexpr double kDupTol = 1e-9;

void check_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) throw ValidationError(std::string(what) + " must be finite");
}

// Iterates over all k-subsets of {0..m-1} in lexicographic order.
bool next_combination(std::vector<int>& idx, int m) {
  int k = static_cast<int>(idx.size());
  for (int i = k - 1; i >= 0; --i) {
    if (idx[static_cast<size_t>(i)] < m - (k - i)) {
      ++idx[static_cast<size_t>(i)];
      for (int j = i + 1; j < k; ++j)
        idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

Polytope::Polytope(Matrix A, Vector b, Matrix C, Vector d)
    : A_(std::move(A)), b_(std::move(b)), C_(std::move(C)), d_(std::move(d)) {
  if (A_.rows() != b_.size())
    throw DimensionMismatch("inequality matrix/vector row mismatch");
  if (C_.rows() != d_.size())
    throw DimensionMismatch("equality matrix/vector row mismatch");
  if (A_.rows() == 0 && C_.rows() == 0)
    throw ValidationError("polytope needs at least one constraint");
  n_ = static_cast<int>(A_.rows() > 0 ? A_.cols() : C_.cols());
  if ((A_.rows() > 0 && A_.cols() != n_) || (C_.rows() > 0 && C_.cols() != n_))
    throw DimensionMismatch("constraint matrices disagree on dimension");
  if (!A_.allFinite() || !b_.allFinite() || !C_.allFinite() || !d_.allFinite())
    throw ValidationError("constraint data must be finite");

  // Phase-1 witness.
  detail::LpResult feas =
      detail::solve_lp_free(Vector::Zero(n_), A_, b_, C_, d_);
  if (feas.status != detail::LpStatus::Optimal)
    throw InfeasibleSet("feasible region {Ax<=b, Cx=d} is empty");
  witness_ = feas.x;

  // Boundedness in every coordinate direction.
  box_lo_.resize(n_);
  box_hi_.resize(n_);
  for (int i = 0; i < n_; ++i) {
    Vector ei = Vector::Zero(n_);
    ei(i) = 1.0;
    detail::LpResult lo = detail::solve_lp_free(ei, A_, b_, C_, d_);
    detail::LpResult hi = detail::solve_lp_free(-ei, A_, b_, C_, d_);
    if (lo.status == detail::LpStatus::Unbounded ||
        hi.status == detail::LpStatus::Unbounded)
      throw UnboundedSet("feasible region is unbounded in coordinate " +
                         std::to_string(i));
    if (lo.status != detail::LpStatus::Optimal ||
        hi.status != detail::LpStatus::Optimal)
      throw NumericalError("bounding LP failed");
    box_lo_(i) = lo.objective;
    box_hi_(i) = -hi.objective;
  }
}

Polytope Polytope::simplex(int n) {
  if (n < 1) throw ValidationError("simplex dimension must be positive");
  Matrix A = -Matrix::Identity(n, n);
  Vector b = Vector::Zero(n);
  Matrix C = Matrix::Ones(1, n);
  Vector d = Vector::Ones(1);
  return Polytope(std::move(A), std::move(b), std::move(C), std::move(d));
}

Polytope Polytope::box(const Vector& lo, const Vector& hi) {
  if (lo.size() != hi.size()) throw DimensionMismatch("box bound sizes differ");
  int n = static_cast<int>(lo.size());
  Matrix A(2 * n, n);
  A << Matrix::Identity(n, n), -Matrix::Identity(n, n);
  Vector b(2 * n);
  b << hi, -lo;
  return Polytope(std::move(A), std::move(b), Matrix(0, n), Vector(0));
}

bool Polytope::contains(const Vector& x, double tol) const {
  if (x.size() != n_) throw DimensionMismatch("point dimension mismatch");
  if (A_.rows() > 0 && ((A_ * x - b_).array() > tol).any()) return false;
  if (C_.rows() > 0 && ((C_ * x - d_).array().abs() > tol).any()) return false;
  return true;
}

double Polytope::lp_value(const Vector& cost) const {
  if (cost.size() != n_) throw DimensionMismatch("cost dimension mismatch");
  check_finite(cost, "lp cost");
  // Shift to w = x - box_lo so vertices of K are basic feasible solutions.
  detail::LpResult r = detail::solve_lp_nonneg(
      cost, A_, b_ - A_ * box_lo_, C_, d_ - C_ * box_lo_);
  if (r.status == detail::LpStatus::Infeasible)
    throw InfeasibleSet("lp oracle found the set empty");
  if (r.status == detail::LpStatus::Unbounded)
    throw UnboundedSet("lp oracle found the set unbounded");
  return r.objective + cost.dot(box_lo_);
}

Vector Polytope::lp_minimize(const Vector& cost) const {
  if (cost.size() != n_) throw DimensionMismatch("cost dimension mismatch");
  check_finite(cost, "lp cost");
  Vector shift = box_lo_;
  detail::LpResult r =
      detail::solve_lp_nonneg(cost, A_, b_ - A_ * shift, C_, d_ - C_ * shift);
  if (r.status == detail::LpStatus::Infeasible)
    throw InfeasibleSet("lp oracle found the set empty");
  if (r.status == detail::LpStatus::Unbounded)
    throw UnboundedSet("lp oracle found the set unbounded");
  Vector x = r.x + shift;
  double opt = r.objective + cost.dot(shift);

  if (!r.unique) {
    // Deterministic tie-break: restrict to the optimal face and greedily
    // maximize x_1, then x_2, ... The end point is a vertex of K.
    Matrix Af(A_.rows() + 1 + n_, n_);
    Vector bf(Af.rows());
    Af.topRows(A_.rows()) = A_;
    bf.head(A_.rows()) = b_;
    Af.row(A_.rows()) = cost.transpose();
    bf(A_.rows()) = opt + kFaceTol;
    int extra = static_cast<int>(A_.rows()) + 1;
    for (int k = 0; k < n_; ++k) {
      Vector ck = Vector::Zero(n_);
      ck(k) = -1.0;  // maximize x_k
      detail::LpResult rk = detail::solve_lp_nonneg(
          ck, Af.topRows(extra), bf.head(extra) - Af.topRows(extra) * shift,
          C_, d_ - C_ * shift);
      if (rk.status != detail::LpStatus::Optimal)
        throw NumericalError("tie-break refinement LP failed");
      x = rk.x + shift;
      Af.row(extra) = ck.transpose();  // -x_k <= -(v_k - tol)
      bf(extra) = -(x(k) - kFaceTol);
      ++extra;
    }
    // Snap to the exact intersection of the tight rows when it pins a vertex.
    std::vector<int> tight;
    for (int i = 0; i < A_.rows(); ++i)
      if (std::abs(A_.row(i).dot(x) - b_(i)) < 1e-7) tight.push_back(i);
    Matrix R(static_cast<int>(tight.size()) + C_.rows(), n_);
    Vector rr(R.rows());
    for (size_t i = 0; i < tight.size(); ++i) {
      R.row(static_cast<int>(i)) = A_.row(tight[i]);
      rr(static_cast<int>(i)) = b_(tight[i]);
    }
    R.bottomRows(C_.rows()) = C_;
    rr.tail(C_.rows()) = d_;
    Eigen::ColPivHouseholderQR<Matrix> qr(R);
    if (qr.rank() == n_) {
      Vector snapped = qr.solve(rr);
      if (contains(snapped, kFeasTol) &&
          cost.dot(snapped) <= opt + 10 * kFaceTol)
        x = snapped;
    }
  }

  if (!contains(x, kFeasTol))
    throw NumericalError("lp oracle returned an infeasible point");
  return x;
}

Vector Polytope::project(const Vector& z) const {
  if (z.size() != n_) throw DimensionMismatch("point dimension mismatch");
  check_finite(z, "projection input");
  if (contains(z, kFeasTol)) return z;

  const int m = static_cast<int>(A_.rows());
  const int p = static_cast<int>(C_.rows());
  Vector x = witness_;
  std::vector<int> work;  // active inequality rows

  auto solve_eq_qp = [&](const std::vector<int>& W, Vector& y, Vector& lam) {
    // min ||y - z||^2 s.t. Cy = d, A_W y = b_W  via y = z - R^T nu.
    int rows = p + static_cast<int>(W.size());
    Matrix R(rows, n_);
    Vector rhs(rows);
    R.topRows(p) = C_;
    rhs.head(p) = d_;
    for (size_t i = 0; i < W.size(); ++i) {
      R.row(p + static_cast<int>(i)) = A_.row(W[i]);
      rhs(p + static_cast<int>(i)) = b_(W[i]);
    }
    if (rows == 0) {
      y = z;
      lam.resize(0);
      return;
    }
    Matrix Gram = R * R.transpose();
    Vector nu = Eigen::ColPivHouseholderQR<Matrix>(Gram).solve(R * z - rhs);
    y = z - R.transpose() * nu;
    lam = nu.tail(static_cast<int>(W.size()));
  };

  Vector y, lam;
  for (int iter = 0; iter < 100 * (m + p + 1); ++iter) {
    solve_eq_qp(work, y, lam);
    Vector step = y - x;
    if (step.lpNorm<Eigen::Infinity>() <= 1e-11) {
      // Stationary on the working set; check multiplier signs.
      int drop = -1;
      double most_negative = -1e-9;
      for (size_t i = 0; i < work.size(); ++i) {
        if (lam(static_cast<int>(i)) < most_negative) {
          most_negative = lam(static_cast<int>(i));
          drop = static_cast<int>(i);
        }
      }
      if (drop < 0) {
        // KKT certificate: feasibility + stationarity + multiplier signs.
        if (!contains(x, kFeasTol))
          throw NumericalError("projection result infeasible");
        Vector res = x - z;
        for (size_t i = 0; i < work.size(); ++i)
          res += lam(static_cast<int>(i)) * A_.row(work[i]).transpose();
        // Equality multipliers absorbed exactly by construction; check the
        // remaining residual against the equality row space.
        if (p > 0) {
          Eigen::ColPivHouseholderQR<Matrix> qr(C_.transpose());
          res -= C_.transpose() * qr.solve(res);
        }
        if (res.lpNorm<Eigen::Infinity>() > 1e-8)
          throw NumericalError("projection KKT residual too large");
        return x;
      }
      work.erase(work.begin() + drop);
      continue;
    }
    // Ratio test against rows outside the working set.
    double alpha = 1.0;
    int blocker = -1;
    for (int i = 0; i < m; ++i) {
      if (std::find(work.begin(), work.end(), i) != work.end()) continue;
      double gi = A_.row(i).dot(step);
      if (gi <= 1e-12) continue;
      double ai = (b_(i) - A_.row(i).dot(x)) / gi;
      if (ai < alpha - 1e-12) {
        alpha = std::max(ai, 0.0);
        blocker = i;
      }
    }
    x += alpha * step;
    if (blocker >= 0)
      work.push_back(blocker);
    else
      x = y;  // full step, exact
  }
  throw NumericalError("projection active-set loop did not converge");
}

std::vector<Vertex> Polytope::enumerate_vertices() const {
  if (n_ > 8)
    throw DimensionTooLarge("vertex enumeration limited to n <= 8");
  const int m = static_cast<int>(A_.rows());
  const int p = static_cast<int>(C_.rows());

  int rank_c = 0;
  if (p > 0) {
    Eigen::ColPivHouseholderQR<Matrix> qr(C_);
    qr.setThreshold(1e-10);
    rank_c = static_cast<int>(qr.rank());
  }
  int k = n_ - rank_c;
  if (k < 0) k = 0;
  if (k > m) return {};

  std::vector<Vertex> out;
  std::vector<int> idx(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<size_t>(i)] = i;
  bool more = true;
  if (k == 0) idx.clear();
  while (more) {
    Matrix R(k + p, n_);
    Vector rhs(k + p);
    for (int i = 0; i < k; ++i) {
      R.row(i) = A_.row(idx[static_cast<size_t>(i)]);
      rhs(i) = b_(idx[static_cast<size_t>(i)]);
    }
    if (p > 0) {
      R.bottomRows(p) = C_;
      rhs.tail(p) = d_;
    }
    Eigen::ColPivHouseholderQR<Matrix> qr(R);
    qr.setThreshold(1e-10);
    if (static_cast<int>(qr.rank()) == n_) {
      Vector x = qr.solve(rhs);
      if ((R * x - rhs).lpNorm<Eigen::Infinity>() <= 1e-9 &&
          contains(x, kFeasTol)) {
        bool dup = false;
        for (const Vertex& v : out)
          if ((v.coordinates - x).lpNorm<Eigen::Infinity>() <= kDupTol) {
            dup = true;
            break;
          }
        if (!dup) {
          Vertex v;
          v.coordinates = x;
          for (int i = 0; i < m; ++i)
            if (std::abs(A_.row(i).dot(x) - b_(i)) <= kFeasTol)
              v.active_set.push_back(i);
          for (int j = 0; j < p; ++j) v.active_set.push_back(m + j);
          out.push_back(std::move(v));
        }
      }
    }
    more = k > 0 && next_combination(idx, m);
    if (k == 0) more = false;
  }
  return out;
}

double Polytope::diameter() const {
  std::vector<Vertex> verts = enumerate_vertices();
  double best = 0.0;
  for (size_t i = 0; i < verts.size(); ++i)
    for (size_t j = i + 1; j < verts.size(); ++j)
      best = std::max(best,
                      (verts[i].coordinates - verts[j].coordinates).norm());
  return best;
}

Polytope Polytope::with_extra_inequality(const Vector& row, double rhs) const {
  if (row.size() != n_) throw DimensionMismatch("extra row dimension mismatch");
  Matrix A2(A_.rows() + 1, n_);
  A2 << A_, row.transpose();
  Vector b2(b_.size() + 1);
  b2 << b_, rhs;
  return Polytope(std::move(A2), std::move(b2), C_, d_);
}

}  // namespace vibrd
