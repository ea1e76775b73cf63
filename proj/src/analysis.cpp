#include "vibrd/analysis.hpp"

#include <cmath>

#include "vibrd/errors.hpp"

namespace vibrd {

double gap(const Vector& x, const CostOperator& F, const Polytope& K) {
  if (!K.contains(x, 1e-7))
    throw ValidationError("gap evaluated at an infeasible point");
  Vector pi = F.evaluate(x);
  return x.dot(pi) - K.lp_value(pi);
}

bool verify_solution(const Vector& x, const CostOperator& F, const Polytope& K,
                     double tol) {
  return gap(x, F, K) <= tol;
}

DecayCheck check_exponential_decay(const TrajectoryRecord& traj,
                                   double slack_per_h) {
  DecayCheck out;
  if (traj.times.empty()) return out;
  const double v0 = traj.gaps.front();
  const double slack = slack_per_h * traj.step_h;
  for (size_t k = 0; k < traj.times.size(); ++k) {
    double envelope = v0 * std::exp(-traj.times[k]) + slack;
    double viol = traj.gaps[k] - envelope;
    if (viol > out.max_violation) out.max_violation = viol;
    if (viol > 0 && out.first_violation < 0)
      out.first_violation = static_cast<int>(k);
  }
  out.ok = out.first_violation < 0;
  return out;
}

IssConstants iss_constants(const CostOperator& F, const Polytope& K) {
  if (!F.is_affine())
    throw ValidationError("constants require an affine operator");
  if (K.dim() > 8)
    throw DimensionTooLarge("constants require vertex enumeration (n <= 8)");
  MonotonicityReport rep = check_monotonicity(F, K);
  if (rep.classification != MonotonicityReport::Class::StronglyMonotone)
    throw NotStronglyMonotone(
        "operator is not strongly monotone on the tangent space");
  AffineOperator aff = F.as_affine();
  IssConstants out;
  out.c = rep.c;
  Eigen::JacobiSVD<Matrix> svd(aff.M);
  out.sigma = svd.singularValues()(0);
  // |F| is convex, so its max over K is attained at a vertex.
  double m1 = 0.0;
  for (const Vertex& v : K.enumerate_vertices())
    m1 = std::max(m1, aff.evaluate(v.coordinates).norm());
  out.m1 = m1;
  out.diameter = K.diameter();
  return out;
}

double iss_bound(const IssConstants& consts, double sup_eps, double sup_delta,
                 double sup_delta_dot, double v2_at_start, double t) {
  if (!(consts.c > 0))
    throw NonpositiveModulus("bound requires a positive modulus c");
  if (sup_eps < 0 || sup_delta < 0 || sup_delta_dot < 0 || v2_at_start < 0)
    throw ValidationError("disturbance norms must be nonnegative");
  double gamma = sup_delta_dot * sup_delta_dot / (2 * consts.c) +
                 consts.sigma * consts.sigma * sup_eps * sup_eps /
                     (2 * consts.c) +
                 consts.m1 * sup_eps + sup_eps * sup_delta;
  double v1 = v2_at_start * std::exp(-t) + gamma + consts.diameter * sup_delta;
  return std::sqrt(v1 / consts.c);
}

double h_function(const Vector& x, const CostOperator& F,
                  const Perturbation& delta, const Polytope& K) {
  if (!K.contains(x, 1e-7))
    throw ValidationError("h evaluated at an infeasible point");
  if (delta.is_none()) return 0.0;
  Vector pi = F.evaluate(x);
  Vector dv = delta.evaluate(x);
  double m = K.lp_value(pi);
  Polytope face = K.with_extra_inequality(pi, m + 1e-9);
  double zmax = -face.lp_value(-dv);
  return zmax - x.dot(dv);
}

double perturbation_bound(const Vector& x_tilde, const CostOperator& F,
                          const Perturbation& delta, const Polytope& K,
                          double c) {
  if (!(c > 0)) throw NonpositiveModulus("bound requires a positive modulus c");
  if (!verify_solution(x_tilde, F.with_perturbation(delta), K, 1e-6))
    throw ValidationError("point does not solve the perturbed inequality");
  double h = h_function(x_tilde, F, delta, K);
  return std::sqrt(std::max(h, 0.0) / c);
}

Vector equilibrium_oracle(const CostOperator& F, const Polytope& K) {
  if (!F.is_affine())
    throw ValidationError("oracle requires an affine operator");
  if (K.dim() > 6)
    throw DimensionTooLarge("oracle limited to n <= 6");
  const AffineOperator aff = F.as_affine();
  const Matrix& A = K.A();
  const Vector& b = K.b();
  const Matrix& C = K.C();
  const Vector& d = K.d();
  const int n = K.dim();
  const int m = static_cast<int>(A.rows());
  const int p = static_cast<int>(C.rows());
  Vector candidate;

  auto try_set = [&](const std::vector<int>& S) -> bool {
    const int k = static_cast<int>(S.size());
    const int N = n + k + p;
    Matrix KKT = Matrix::Zero(N, N);
    Vector rhs(N);
    KKT.topLeftCorner(n, n) = aff.M;
    for (int i = 0; i < k; ++i) {
      KKT.block(0, n + i, n, 1) = A.row(S[static_cast<size_t>(i)]).transpose();
      KKT.block(n + i, 0, 1, n) = A.row(S[static_cast<size_t>(i)]);
      rhs(n + i) = b(S[static_cast<size_t>(i)]);
    }
    if (p > 0) {
      KKT.block(0, n + k, n, p) = C.transpose();
      KKT.block(n + k, 0, p, n) = C;
      rhs.tail(p) = d;
    }
    rhs.head(n) = -aff.q;
    Eigen::ColPivHouseholderQR<Matrix> qr(KKT);
    if (qr.rank() < N) return false;
    Vector sol = qr.solve(rhs);
    if ((KKT * sol - rhs).lpNorm<Eigen::Infinity>() > 1e-8) return false;
    Vector z = sol.head(n);
    if (k > 0 && sol.segment(n, k).minCoeff() < -1e-9) return false;
    if (!K.contains(z, 1e-9)) return false;
    candidate = z;
    return true;
  };

  std::vector<int> S;
  int kmax = std::min(m, std::max(0, n - p));
  for (int k = 0; k <= kmax; ++k) {
    S.assign(static_cast<size_t>(k), 0);
    for (int i = 0; i < k; ++i) S[static_cast<size_t>(i)] = i;
    while (true) {
      if (try_set(S) && gap(candidate, F, K) <= 1e-9) return candidate;
      if (k == 0) break;
      int kk = k;
      int i = kk - 1;
      for (; i >= 0; --i)
        if (S[static_cast<size_t>(i)] < m - (kk - i)) break;
      if (i < 0) break;
      ++S[static_cast<size_t>(i)];
      for (int j = i + 1; j < kk; ++j)
        S[static_cast<size_t>(j)] = S[static_cast<size_t>(j - 1)] + 1;
    }
  }
  throw NoSolutionFound("no certified candidate over the active-set lattice");
}

}  // namespace vibrd
