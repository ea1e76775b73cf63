#include "vibrd/batch.hpp"

#include <cmath>
#include <limits>

#include "vibrd/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace vibrd {

Polytope make_random_polytope(std::mt19937_64& rng, int n, bool with_equality) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int attempt = 0; attempt < 50; ++attempt) {
    Vector center(n);
    for (int i = 0; i < n; ++i) center(i) = 0.4 * unit(rng);
    int extra = std::max(0, 10 - 2 * n);
    std::uniform_int_distribution<int> extra_dist(0, extra);
    int k = extra_dist(rng);
    Matrix A(2 * n + k, n);
    Vector b(2 * n + k);
    A.topRows(n) = Matrix::Identity(n, n);
    A.middleRows(n, n) = -Matrix::Identity(n, n);
    b.head(2 * n).setOnes();
    for (int i = 0; i < k; ++i) {
      Vector a(n);
      for (int j = 0; j < n; ++j) a(j) = gauss(rng);
      a.normalize();
      A.row(2 * n + i) = a.transpose();
      b(2 * n + i) = a.dot(center) + 0.3;  // keeps a ball around center inside
    }
    Matrix C(0, n);
    Vector d(0);
    if (with_equality && n >= 2) {
      C.resize(1, n);
      for (int j = 0; j < n; ++j) C(0, j) = gauss(rng);
      C.row(0).normalize();
      d.resize(1);
      d(0) = C.row(0).dot(center);
    }
    try {
      return Polytope(std::move(A), std::move(b), std::move(C), std::move(d));
    } catch (const Error&) {
      continue;  // degenerate draw
    }
  }
  throw NumericalError("could not draw a valid random polytope");
}

RandomVi make_random_strongly_monotone_vi(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix B(n, n), S(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      B(i, j) = gauss(rng);
      S(i, j) = gauss(rng);
    }
  Matrix skew = 0.5 * (S - S.transpose());
  AffineOperator op;
  op.M = B.transpose() * B + 0.3 * Matrix::Identity(n, n) + skew;
  op.q.resize(n);
  for (int i = 0; i < n; ++i) op.q(i) = gauss(rng);
  return RandomVi{make_random_polytope(rng, n, false), CostOperator(op)};
}

bool parallel_enabled() {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

void parallel_for_index(int count, const std::function<void(int)>& body,
                        bool parallel) {
#ifdef _OPENMP
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
#else
  (void)parallel;
#endif
  for (int i = 0; i < count; ++i) body(i);
}

std::vector<ScenarioSummary> run_batch(const std::vector<Scenario>& scenarios,
                                       const std::filesystem::path& out_dir,
                                       const RunOptions& opts, bool parallel) {
  std::vector<ScenarioSummary> out(scenarios.size());
  parallel_for_index(
      static_cast<int>(scenarios.size()),
      [&](int i) {
        out[static_cast<size_t>(i)] =
            run_scenario(scenarios[static_cast<size_t>(i)], out_dir, opts);
      },
      parallel);
  return out;
}

std::vector<double> sweep_lp_vs_enumeration(int count, unsigned seed,
                                            bool parallel) {
  std::vector<double> out(static_cast<size_t>(count));
  parallel_for_index(
      count,
      [&](int i) {
        std::mt19937_64 rng(seed + 1000003ULL * static_cast<unsigned>(i));
        std::uniform_int_distribution<int> ndist(2, 5);
        std::bernoulli_distribution eq(0.5);
        std::normal_distribution<double> gauss(0.0, 1.0);
        int n = ndist(rng);
        Polytope K = make_random_polytope(rng, n, eq(rng));
        Vector cost(n);
        for (int j = 0; j < n; ++j) cost(j) = gauss(rng);
        double lp = K.lp_value(cost);
        double best = std::numeric_limits<double>::infinity();
        for (const Vertex& v : K.enumerate_vertices())
          best = std::min(best, cost.dot(v.coordinates));
        out[static_cast<size_t>(i)] = std::abs(lp - best);
      },
      parallel);
  return out;
}

std::vector<double> sweep_oracle_vs_brd(int count, unsigned seed,
                                        bool parallel) {
  std::vector<double> out(static_cast<size_t>(count));
  parallel_for_index(
      count,
      [&](int i) {
        std::mt19937_64 rng(seed + 7777777ULL * static_cast<unsigned>(i));
        std::uniform_int_distribution<int> ndist(2, 5);
        int n = ndist(rng);
        RandomVi vi = make_random_strongly_monotone_vi(rng, n);
        Vector xstar = equilibrium_oracle(vi.op, vi.set);
        SolverConfig cfg;
        cfg.step_h = 0.01;
        cfg.horizon = 60.0;
        TrajectoryRecord traj =
            integrate_brd(vi.set.witness(), vi.op, vi.set,
                          TimeSignal::zero(n), TimeSignal::zero(n), cfg);
        out[static_cast<size_t>(i)] = (traj.final_state() - xstar).norm();
      },
      parallel);
  return out;
}

}  // namespace vibrd
