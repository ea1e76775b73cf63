#pragma once

#include <functional>
#include <random>

#include "vibrd/scenario.hpp"

namespace vibrd {

/// Random compact polytope: a box with up to (10 - 2n) extra random
/// halfspaces through a ball around the center, optionally one equality.
Polytope make_random_polytope(std::mt19937_64& rng, int n, bool with_equality);

/// Random strongly monotone affine VI on a random polytope:
/// M = B^T B + 0.3 I + skew, so c >= 0.3 on the whole space.
struct RandomVi {
  Polytope set;
  CostOperator op;
};
RandomVi make_random_strongly_monotone_vi(std::mt19937_64& rng, int n);

/// Index-parallel map: OpenMP when `parallel` and compiled in, otherwise the
/// serial reference loop. Results are written by index, so both paths produce
/// identical output.
void parallel_for_index(int count, const std::function<void(int)>& body,
                        bool parallel);

/// True when the OpenMP path is compiled in.
bool parallel_enabled();

/// Runs scenarios as a batch; each run is internally single-threaded and
/// writes its own files.
std::vector<ScenarioSummary> run_batch(const std::vector<Scenario>& scenarios,
                                       const std::filesystem::path& out_dir,
                                       const RunOptions& opts, bool parallel);

/// Sweep kernel: per instance, |value(lp oracle) - value(vertex enumeration)|
/// for one random cost on one random polytope.
std::vector<double> sweep_lp_vs_enumeration(int count, unsigned seed,
                                            bool parallel);

/// Sweep kernel: per instance, |oracle equilibrium - BRD limit| on one random
/// strongly monotone affine VI.
std::vector<double> sweep_oracle_vs_brd(int count, unsigned seed,
                                        bool parallel);

}  // namespace vibrd
