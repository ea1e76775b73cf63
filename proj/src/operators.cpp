#include "vibrd/operators.hpp"

#include <cmath>
#include <limits>

#include "vibrd/errors.hpp"

namespace vibrd {

AffineOperator build_congestion_operator(const CongestionNetwork& net) {
  if (net.routes.empty()) throw ValidationError("network has no routes");
  const int n = static_cast<int>(net.routes.size());
  for (const LinkDelay& l : net.links)
    if (l.a.size() != n)
      throw DimensionMismatch("link delay coefficients must match route count");
  AffineOperator op;
  op.M.setZero(n, n);
  op.q.setZero(n);
  for (int i = 0; i < n; ++i) {
    for (int l : net.routes[static_cast<size_t>(i)]) {
      if (l < 0 || l >= static_cast<int>(net.links.size()))
        throw BadRouteIndex("route " + std::to_string(i) +
                            " references missing link " + std::to_string(l));
      op.M.row(i) += net.links[static_cast<size_t>(l)].a.transpose();
      op.q(i) += net.links[static_cast<size_t>(l)].b;
    }
  }
  return op;
}

Vector entropy_gradient(const Vector& x, double eta) {
  if (eta < 0) throw ValidationError("entropy weight must be nonnegative");
  Vector out(x.size());
  for (int i = 0; i < x.size(); ++i)
    out(i) = eta * (std::log(std::max(x(i), kEntropyFloor)) + 1.0);
  return out;
}

Perturbation Perturbation::entropy(double eta) {
  if (eta < 0) throw ValidationError("entropy weight must be nonnegative");
  Perturbation p;
  p.kind = Kind::EntropyGradient;
  p.eta = eta;
  return p;
}

Perturbation Perturbation::affine(Matrix P, Vector r) {
  if (P.rows() != P.cols() || P.rows() != r.size())
    throw DimensionMismatch("affine perturbation shapes disagree");
  Perturbation p;
  p.kind = Kind::Affine;
  p.P = std::move(P);
  p.r = std::move(r);
  return p;
}

Vector Perturbation::evaluate(const Vector& x, bool* clamped) const {
  switch (kind) {
    case Kind::None:
      return Vector::Zero(x.size());
    case Kind::Affine:
      if (P.cols() != x.size())
        throw DimensionMismatch("perturbation dimension mismatch");
      return P * x + r;
    case Kind::EntropyGradient: {
      if (clamped && (x.array() <= kEntropyFloor).any()) *clamped = true;
      return entropy_gradient(x, eta);
    }
  }
  throw ValidationError("unknown perturbation kind");
}

Matrix Perturbation::jacobian(const Vector& x) const {
  switch (kind) {
    case Kind::None:
      return Matrix::Zero(x.size(), x.size());
    case Kind::Affine:
      return P;
    case Kind::EntropyGradient: {
      Matrix J = Matrix::Zero(x.size(), x.size());
      for (int i = 0; i < x.size(); ++i) {
        if (x(i) <= kEntropyFloor)
          throw DomainError("entropy gradient not differentiable at the clamp");
        J(i, i) = eta / x(i);
      }
      return J;
    }
  }
  throw ValidationError("unknown perturbation kind");
}

Vector CostOperator::evaluate(const Vector& x, bool* clamped) const {
  if (x.size() != base_.M.cols())
    throw DimensionMismatch("operator evaluated at wrong dimension");
  if (!x.allFinite()) throw ValidationError("operator input must be finite");
  Vector pi = base_.evaluate(x);
  if (!pert_.is_none()) pi += pert_.evaluate(x, clamped);
  return pi;
}

Matrix CostOperator::jacobian(const Vector& x) const {
  if (x.size() != base_.M.cols())
    throw DimensionMismatch("operator evaluated at wrong dimension");
  Matrix J = base_.M;
  if (!pert_.is_none()) J += pert_.jacobian(x);
  return J;
}

AffineOperator CostOperator::as_affine() const {
  if (pert_.kind == Perturbation::Kind::None) return base_;
  if (pert_.kind == Perturbation::Kind::Affine)
    return AffineOperator{base_.M + pert_.P, base_.q + pert_.r};
  throw ValidationError("entropy-perturbed operator is not affine");
}

Matrix equality_nullspace_basis(const Polytope& K) {
  const int n = K.dim();
  if (K.num_equalities() == 0) return Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix> svd(K.C(), Eigen::ComputeFullV);
  int rank = 0;
  double thresh = 1e-10 * svd.singularValues()(0);
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > thresh) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

Vector random_feasible_point(const Polytope& K, const std::vector<Vertex>& verts,
                             std::mt19937_64& rng) {
  if (verts.empty()) throw ValidationError("no vertices to sample from");
  std::exponential_distribution<double> expo(1.0);
  Vector x = Vector::Zero(K.dim());
  double total = 0.0;
  std::vector<double> w(verts.size());
  for (double& wi : w) {
    wi = expo(rng);
    total += wi;
  }
  for (size_t i = 0; i < verts.size(); ++i)
    x += (w[i] / total) * verts[i].coordinates;
  return x;
}

MonotonicityReport check_monotonicity(const CostOperator& F, const Polytope& K,
                                      double tol) {
  const Matrix Z = equality_nullspace_basis(K);
  MonotonicityReport rep;

  auto projected_min_eig = [&](const Matrix& J) {
    if (Z.cols() == 0) return std::numeric_limits<double>::infinity();
    Matrix S = 0.5 * (J + J.transpose());
    Matrix ZSZ = Z.transpose() * S * Z;
    Eigen::SelfAdjointEigenSolver<Matrix> es(ZSZ);
    return es.eigenvalues().minCoeff();
  };

  if (F.is_affine()) {
    rep.c = projected_min_eig(F.as_affine().M);
    rep.empirical = false;
  } else {
    // Sampled fallback for the entropy-perturbed case.
    std::vector<Vertex> verts = K.enumerate_vertices();
    std::mt19937_64 rng(0x5eed5eedULL);
    double cmin = std::numeric_limits<double>::infinity();
    for (int s = 0; s < 200; ++s) {
      Vector x = random_feasible_point(K, verts, rng);
      if ((x.array() <= kEntropyFloor).any()) continue;
      cmin = std::min(cmin, projected_min_eig(F.jacobian(x)));
    }
    rep.c = cmin;
    rep.empirical = true;
  }

  if (rep.c > tol)
    rep.classification = MonotonicityReport::Class::StronglyMonotone;
  else if (rep.c >= -tol)
    rep.classification = MonotonicityReport::Class::Monotone;
  else
    rep.classification = MonotonicityReport::Class::Indefinite;
  if (rep.classification == MonotonicityReport::Class::Monotone)
    rep.c = std::max(rep.c, 0.0);
  return rep;
}

}  // namespace vibrd
