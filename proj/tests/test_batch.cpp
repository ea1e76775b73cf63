#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "test_helpers.hpp"
#include "vibrd/batch.hpp"

using namespace vibrd;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(f), {});
}

}  // namespace

TEST_CASE("random polytopes are valid and sit inside the unit box") {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 30; ++trial) {
    Polytope K = make_random_polytope(rng, 2 + static_cast<int>(rng() % 4),
                                      trial % 2 == 0);
    CHECK(K.contains(K.witness(), 1e-9));
    CHECK(K.box_hi().maxCoeff() <= 1.0 + 1e-9);
    CHECK(K.box_lo().minCoeff() >= -1.0 - 1e-9);
    CHECK_FALSE(K.enumerate_vertices().empty());
  }
}

TEST_CASE("random instances are strongly monotone") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    RandomVi vi = make_random_strongly_monotone_vi(rng, 3);
    MonotonicityReport rep = check_monotonicity(vi.op, vi.set);
    CHECK(rep.classification == MonotonicityReport::Class::StronglyMonotone);
    CHECK(rep.c >= 0.3 - 1e-9);
  }
}

TEST_CASE("parallel sweeps reproduce the serial reference bit for bit") {
  auto s1 = sweep_lp_vs_enumeration(60, 900, false);
  auto p1 = sweep_lp_vs_enumeration(60, 900, true);
  CHECK(s1 == p1);

  auto s2 = sweep_oracle_vs_brd(12, 31, false);
  auto p2 = sweep_oracle_vs_brd(12, 31, true);
  CHECK(s2 == p2);
}

TEST_CASE("parallel batch writes the same artifacts as the serial loop") {
  std::vector<Scenario> scns = {*find_builtin("traffic"),
                                *find_builtin("congestion"),
                                *find_builtin("traffic-constrained")};
  auto ds = std::filesystem::temp_directory_path() / "vibrd_batch_s";
  auto dp = std::filesystem::temp_directory_path() / "vibrd_batch_p";
  std::filesystem::remove_all(ds);
  std::filesystem::remove_all(dp);

  auto sums_s = run_batch(scns, ds, {}, false);
  auto sums_p = run_batch(scns, dp, {}, true);
  REQUIRE(sums_s.size() == sums_p.size());
  for (size_t i = 0; i < sums_s.size(); ++i) {
    CHECK(sums_s[i].all_passed());
    CHECK(sums_p[i].all_passed());
    CHECK(slurp(sums_s[i].trajectory_path) == slurp(sums_p[i].trajectory_path));
  }
}
