#include "vibrd/dynamics.hpp"

#include <cmath>
#include <optional>

#include "vibrd/errors.hpp"

namespace vibrd {
namespace {

constexpr double kFeasTol = 1e-9;
constexpr double kSwitchTol = 1e-9;

void next_subset(std::vector<int>& s, int m, bool& more) {
  int k = static_cast<int>(s.size());
  for (int i = k - 1; i >= 0; --i) {
    if (s[static_cast<size_t>(i)] < m - (k - i)) {
      ++s[static_cast<size_t>(i)];
      for (int j = i + 1; j < k; ++j)
        s[static_cast<size_t>(j)] = s[static_cast<size_t>(j - 1)] + 1;
      more = true;
      return;
    }
  }
  more = false;
}

// Certified KKT solve of VI({Az<=bp, Cz=d}, Mz+q0) for one active set S.
std::optional<Vector> try_active_set(const Matrix& M, const Vector& q0,
                                     const Matrix& A, const Vector& bp,
                                     const Matrix& C, const Vector& d,
                                     const std::vector<int>& S) {
  const int n = static_cast<int>(M.rows());
  const int p = static_cast<int>(C.rows());
  const int k = static_cast<int>(S.size());
  const int N = n + k + p;
  Matrix KKT = Matrix::Zero(N, N);
  Vector rhs(N);
  KKT.topLeftCorner(n, n) = M;
  for (int i = 0; i < k; ++i) {
    KKT.block(0, n + i, n, 1) = A.row(S[static_cast<size_t>(i)]).transpose();
    KKT.block(n + i, 0, 1, n) = A.row(S[static_cast<size_t>(i)]);
    rhs(n + i) = bp(S[static_cast<size_t>(i)]);
  }
  if (p > 0) {
    KKT.block(0, n + k, n, p) = C.transpose();
    KKT.block(n + k, 0, p, n) = C;
    rhs.tail(p) = d;
  }
  rhs.head(n) = -q0;
  Eigen::ColPivHouseholderQR<Matrix> qr(KKT);
  if (qr.rank() < N) return std::nullopt;
  Vector sol = qr.solve(rhs);
  if ((KKT * sol - rhs).lpNorm<Eigen::Infinity>() > 1e-8) return std::nullopt;
  Vector z = sol.head(n);
  Vector lam = sol.segment(n, k);
  if (k > 0 && lam.minCoeff() < -1e-9) return std::nullopt;
  if (A.rows() > 0 && ((A * z - bp).array() > kFeasTol).any())
    return std::nullopt;
  if (p > 0 && ((C * z - d).array().abs() > kFeasTol).any())
    return std::nullopt;
  // lam >= 0 with tight selected rows certifies (y-z)^T (Mz+q0) >= 0 on the set.
  return z;
}

// Affine VI solve by active-set enumeration, warm-started with the set that
// worked on the previous step of the same run.
class LocalViSolver {
public:
  std::optional<Vector> solve(const Matrix& M, const Vector& q0,
                              const Matrix& A, const Vector& bp,
                              const Matrix& C, const Vector& d) {
    const int n = static_cast<int>(M.rows());
    const int m = static_cast<int>(A.rows());
    const int p = static_cast<int>(C.rows());
    if (!last_.empty()) {
      if (auto z = try_active_set(M, q0, A, bp, C, d, last_)) return z;
    }
    int kmax = std::min(m, n - std::min(p, n));
    for (int k = 0; k <= kmax; ++k) {
      std::vector<int> S(static_cast<size_t>(k));
      for (int i = 0; i < k; ++i) S[static_cast<size_t>(i)] = i;
      bool more = true;
      while (more) {
        if (auto z = try_active_set(M, q0, A, bp, C, d, S)) {
          last_ = S;
          return z;
        }
        if (k == 0) break;
        next_subset(S, m, more);
      }
    }
    return std::nullopt;
  }

private:
  std::vector<int> last_;
};

struct Recorder {
  TrajectoryRecord rec;
  int consecutive_small = 0;

  // Returns true when the gap-tolerance stop rule fires.
  bool add(double t, const Vector& x, double gap, double nd, double ne,
           bool stop_rule_active, double gap_tolerance) {
    rec.times.push_back(t);
    rec.states.push_back(x);
    rec.gaps.push_back(gap);
    rec.disturbance_norms.emplace_back(nd, ne);
    if (stop_rule_active) {
      consecutive_small = gap <= gap_tolerance ? consecutive_small + 1 : 0;
      if (consecutive_small >= 10) return true;
    }
    return false;
  }
};

double nominal_gap(const Vector& x, const CostOperator& F, const Polytope& K) {
  Vector pi = F.evaluate(x);
  return x.dot(pi) - K.lp_value(pi);
}

}  // namespace

void SolverConfig::validate() const {
  if (!(step_h > 0)) throw ValidationError("step must be positive");
  if (!(horizon > 0)) throw ValidationError("horizon must be positive");
  if (!(stationarity_gap <= gap_tolerance))
    throw ValidationError("stationarity gap must not exceed the gap tolerance");
  if (record_stride < 1) throw ValidationError("record stride must be >= 1");
}

Vector brd_step(const Vector& x, const CostOperator& F, const Polytope& K,
                const Vector& delta, const Vector& eps, double h,
                double stationarity_gap) {
  if (!(h > 0)) throw ValidationError("step must be positive");
  if (x.size() != K.dim() || delta.size() != K.dim() || eps.size() != K.dim())
    throw DimensionMismatch("brd_step dimension mismatch");
  if (!K.contains(x, 1e-7))
    throw ValidationError("brd_step called from an infeasible point");
  const bool eps_zero = eps.isZero(0.0);
  if (h > 1.0 && eps_zero)
    throw StepTooLarge("h > 1 leaves the convex-combination regime");

  Vector pi = F.evaluate(x) + delta;
  Vector beta = K.lp_minimize(pi);
  double gap = x.dot(pi) - beta.dot(pi);
  if (gap <= stationarity_gap && eps_zero) return x;
  Vector xn = x + h * (beta - x + eps);
  // Result tolerance matches the precondition: a convex combination cannot
  // violate the constraints by more than its endpoints do.
  if (!K.contains(xn, 1e-7)) {
    if (eps_zero)
      throw NumericalError("convex-combination step left the set");
    throw AdmissibilityViolated("dynamics disturbance left the feasible set",
                                -1.0);
  }
  return xn;
}

TrajectoryRecord integrate_brd(const Vector& x0, const CostOperator& F,
                               const Polytope& K, const TimeSignal& delta,
                               const TimeSignal& eps, const SolverConfig& cfg,
                               TrajectoryRecord* partial) {
  cfg.validate();
  if (x0.size() != K.dim() || F.dim() != K.dim() || delta.dim() != K.dim() ||
      eps.dim() != K.dim())
    throw DimensionMismatch("integrate_brd dimension mismatch");
  if (!K.contains(x0, 1e-9))
    throw ValidationError("initial state is not feasible");

  const double h = cfg.step_h;
  const bool delta_zero = delta.is_zero();
  const bool eps_zero_signal = eps.is_zero();
  if (h > 1.0 && eps_zero_signal)
    throw StepTooLarge("h > 1 leaves the convex-combination regime");
  const bool stop_rule = delta_zero && eps_zero_signal;
  const int nsteps = static_cast<int>(std::llround(cfg.horizon / h));

  const AffineOperator aff =
      F.is_affine() ? F.as_affine() : F.base();
  const bool entropy =
      F.perturbation().kind == Perturbation::Kind::EntropyGradient;

  LocalViSolver local;
  Recorder recorder;
  recorder.rec.step_h = h;
  Vector x = x0;

  for (int k = 0; k <= nsteps; ++k) {
    const double t = k * h;
    const bool at_sample = (k % cfg.record_stride == 0) || k == nsteps;
    Vector D = delta_zero ? Vector::Zero(K.dim()) : delta.evaluate(t);
    Vector E = eps_zero_signal ? Vector::Zero(K.dim()) : eps.evaluate(t);

    if (at_sample) {
      double v = nominal_gap(x, F, K);
      if (recorder.add(t, x, v, D.norm(), E.norm(), stop_rule,
                       cfg.gap_tolerance)) {
        recorder.rec.terminated_by = Termination::GapTolerance;
        return std::move(recorder.rec);
      }
    }
    if (k == nsteps) break;

    Vector pi = F.evaluate(x) + D;
    Vector beta = K.lp_minimize(pi);
    double gap = x.dot(pi) - beta.dot(pi);
    const bool eps_now_zero = E.isZero(0.0);
    if (gap <= cfg.stationarity_gap && eps_now_zero) continue;

    Vector xn = x + h * (beta - x + E);
    Vector pi_arrival =
        F.evaluate(xn) + (delta_zero ? Vector::Zero(K.dim())
                                     : delta.evaluate(t + h));
    if (beta.dot(pi_arrival) > K.lp_value(pi_arrival) + kSwitchTol) {
      // The chosen vertex stops being a best response within the step:
      // resolve the crossing by solving the inclusion on (1-h)x + hK.
      Vector bp = (1 - h) * (K.A() * x) + h * K.b();
      Vector q_eff = aff.q + D + h * (aff.M * E);
      if (entropy)
        q_eff += entropy_gradient(x, F.perturbation().eta);
      if (auto z = local.solve(aff.M, q_eff, K.A(), bp, K.C(), K.d()))
        xn = *z + h * E;
    }

    if (!K.contains(xn, kFeasTol)) {
      if (eps_now_zero)
        throw NumericalError("undisturbed step left the feasible set");
      recorder.rec.terminated_by = Termination::Error;
      if (partial) *partial = recorder.rec;
      throw AdmissibilityViolated(
          "dynamics disturbance left the feasible set at t=" +
              std::to_string(t),
          t);
    }
    x = std::move(xn);
  }
  recorder.rec.terminated_by = Termination::Horizon;
  return std::move(recorder.rec);
}

TrajectoryRecord integrate_perturbed_br(const Vector& x0, const CostOperator& F,
                                        const Perturbation& delta,
                                        const Polytope& K,
                                        const SolverConfig& cfg) {
  CostOperator eff = F.with_perturbation(delta);
  std::vector<std::string> warnings;
  if (eff.is_affine()) {
    MonotonicityReport rep = check_monotonicity(eff, K);
    if (rep.classification == MonotonicityReport::Class::Indefinite)
      throw ValidationError("perturbed operator is not monotone on K");
    if (rep.classification != MonotonicityReport::Class::StronglyMonotone)
      warnings.push_back("perturbed operator is only monotone (c = 0)");
  } else {
    // Entropy delta has positive-definite Jacobian on the interior; strong
    // monotonicity then needs the base to be at least monotone.
    MonotonicityReport base = check_monotonicity(F, K);
    if (base.classification == MonotonicityReport::Class::Indefinite)
      warnings.push_back(
          "strong monotonicity of the perturbed operator is unverified");
  }
  TrajectoryRecord rec =
      integrate_brd(x0, eff, K, TimeSignal::zero(K.dim()),
                    TimeSignal::zero(K.dim()), cfg);
  rec.warnings.insert(rec.warnings.end(), warnings.begin(), warnings.end());
  return rec;
}

TrajectoryRecord integrate_projected(const Vector& x0, const CostOperator& F,
                                     const Polytope& K,
                                     const SolverConfig& cfg) {
  cfg.validate();
  if (x0.size() != K.dim() || F.dim() != K.dim())
    throw DimensionMismatch("integrate_projected dimension mismatch");
  if (!K.contains(x0, 1e-9))
    throw ValidationError("initial state is not feasible");

  const double h = cfg.step_h;
  const int nsteps = static_cast<int>(std::llround(cfg.horizon / h));
  Recorder recorder;
  recorder.rec.step_h = h;
  Vector x = x0;
  for (int k = 0; k <= nsteps; ++k) {
    const double t = k * h;
    if ((k % cfg.record_stride == 0) || k == nsteps) {
      double v = nominal_gap(x, F, K);
      if (recorder.add(t, x, v, 0.0, 0.0, true, cfg.gap_tolerance)) {
        recorder.rec.terminated_by = Termination::GapTolerance;
        return std::move(recorder.rec);
      }
    }
    if (k == nsteps) break;
    x = K.project(x - h * F.evaluate(x));
  }
  recorder.rec.terminated_by = Termination::Horizon;
  return std::move(recorder.rec);
}

}  // namespace vibrd
