#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "test_helpers.hpp"
#include "vibrd/errors.hpp"

using namespace vibrd;
using testing::congestion_equilibrium;
using testing::congestion_operator;
using testing::traffic_operator;
using testing::vec3;

TEST_CASE("gap function") {
  Polytope S = Polytope::simplex(3);
  Vector center = vec3(1, 1, 1) / 3.0;
  CHECK(std::abs(gap(center, traffic_operator(), S)) <= 1e-12);
  CHECK(gap(vec3(1, 0, 0), traffic_operator(), S) ==
        doctest::Approx(1.0).epsilon(1e-12));

  CostOperator zero{AffineOperator{Matrix::Zero(3, 3), Vector::Zero(3)}};
  auto verts = S.enumerate_vertices();
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    Vector x = random_feasible_point(S, verts, rng);
    CHECK(std::abs(gap(x, zero, S)) <= 1e-12);
  }
}

TEST_CASE("gap is nonnegative and scales linearly in F") {
  std::mt19937_64 rng(4);
  for (const CostOperator& F : {traffic_operator(), congestion_operator()}) {
    Polytope S = Polytope::simplex(3);
    auto verts = S.enumerate_vertices();
    for (int trial = 0; trial < 1000; ++trial) {
      Vector x = random_feasible_point(S, verts, rng);
      double v = gap(x, F, S);
      CHECK(v >= -1e-12);
      CostOperator scaled{
          AffineOperator{3.0 * F.base().M, 3.0 * F.base().q}};
      CHECK(gap(x, scaled, S) == doctest::Approx(3.0 * v).epsilon(1e-9));
    }
  }
}

TEST_CASE("verify_solution") {
  Polytope S = Polytope::simplex(3);
  CHECK(verify_solution(vec3(1, 1, 1) / 3.0, traffic_operator(), S, 1e-8));
  CHECK(verify_solution(congestion_equilibrium(), congestion_operator(), S,
                        1e-6));
  CHECK_FALSE(verify_solution(vec3(1, 0, 0), congestion_operator(), S, 1e-6));
  CHECK(gap(vec3(1, 0, 0), congestion_operator(), S) ==
        doctest::Approx(1.8).epsilon(1e-12));
}

TEST_CASE("exponential decay checker") {
  Polytope S = Polytope::simplex(3);
  TrajectoryRecord run =
      integrate_brd(vec3(0.8, 0.1, 0.1), congestion_operator(), S,
                    TimeSignal::zero(3), TimeSignal::zero(3), SolverConfig{});
  CHECK(check_exponential_decay(run, 10.0).ok);

  // A constant record at an equilibrium is trivially inside the envelope.
  TrajectoryRecord flat;
  flat.step_h = 0.01;
  for (int k = 0; k < 20; ++k) {
    flat.times.push_back(0.1 * k);
    flat.states.push_back(congestion_equilibrium());
    flat.gaps.push_back(0.0);
    flat.disturbance_norms.emplace_back(0.0, 0.0);
  }
  CHECK(check_exponential_decay(flat, 10.0).ok);

  // A doubled gap sample is reported by index.
  TrajectoryRecord bad;
  bad.step_h = 0.01;
  for (int k = 0; k < 20; ++k) {
    double t = 0.1 * k;
    bad.times.push_back(t);
    bad.states.push_back(congestion_equilibrium());
    bad.gaps.push_back(std::exp(-t));
    bad.disturbance_norms.emplace_back(0.0, 0.0);
  }
  bad.gaps[5] = 2.0 * std::exp(-bad.times[5]) + 0.2;
  DecayCheck dc = check_exponential_decay(bad, 10.0);
  CHECK_FALSE(dc.ok);
  CHECK(dc.first_violation == 5);
  CHECK(dc.max_violation > 0);
}

TEST_CASE("constants for the disturbance bound") {
  Polytope S = Polytope::simplex(3);
  IssConstants c = iss_constants(congestion_operator(), S);
  CHECK(c.c == doctest::Approx(1.5 - std::sqrt(1.0 / 12.0)).epsilon(1e-12));
  CHECK(c.diameter == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  // sigma is the top eigenvalue of the symmetric M: a root of its
  // characteristic polynomial l^3 - 5.5 l^2 + 9.5 l - 5.125.
  double p = std::pow(c.sigma, 3) - 5.5 * c.sigma * c.sigma + 9.5 * c.sigma -
             5.125;
  CHECK(std::abs(p) <= 1e-9);
  CHECK(c.sigma == doctest::Approx(2.62).epsilon(1e-2));
  // max |F| over the vertices is attained at e3.
  CHECK(c.m1 == doctest::Approx(std::sqrt(8.4)).epsilon(1e-12));
  CHECK(congestion_operator().evaluate(vec3(0, 0, 1)).norm() ==
        doctest::Approx(c.m1).epsilon(1e-12));

  CostOperator identity{AffineOperator{Matrix::Identity(3, 3), Vector::Zero(3)}};
  IssConstants ic = iss_constants(identity, S);
  CHECK(ic.c == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ic.sigma == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ic.m1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ic.diameter == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

  CHECK_THROWS_AS(iss_constants(traffic_operator(), S), NotStronglyMonotone);
}

TEST_CASE("disturbance bound: reductions and monotonicity") {
  Polytope S = Polytope::simplex(3);
  IssConstants c = iss_constants(congestion_operator(), S);

  // No disturbances: pure decay of the initial term, vanishing as t grows.
  CHECK(iss_bound(c, 0, 0, 0, 1.0, std::numeric_limits<double>::infinity()) ==
        0.0);
  double prev = std::numeric_limits<double>::infinity();
  for (double t : {0.0, 1.0, 5.0, 20.0}) {
    double bnd = iss_bound(c, 0, 0, 0, 1.0, t);
    CHECK(bnd <= prev);
    prev = bnd;
  }

  // Monotone nondecreasing in each disturbance norm.
  double base = iss_bound(c, 0.1, 0.1, 0.1, 0.0, 1.0);
  for (int arg = 0; arg < 3; ++arg) {
    for (double grow : {0.2, 0.5, 1.0}) {
      double e = arg == 0 ? grow : 0.1;
      double d = arg == 1 ? grow : 0.1;
      double dd = arg == 2 ? grow : 0.1;
      CHECK(iss_bound(c, e, d, dd, 0.0, 1.0) >= base - 1e-12);
    }
  }
  IssConstants badc = c;
  badc.c = 0.0;
  CHECK_THROWS_AS(iss_bound(badc, 0, 0, 0, 0, 1.0), NonpositiveModulus);

  // Re-derive the ultimate radius for the periodic disturbance by hand:
  // sup|Delta| = sqrt(0.1^2 + 0.05^2 + 0.15^2), sup|dDelta/dt| from the
  // per-term a*omega rule, then sqrt((|dD|^2/2c + D_K |D|) / c).
  double sup_d = std::sqrt(0.1 * 0.1 + 0.05 * 0.05 + 0.15 * 0.15);
  double sup_dd = std::sqrt(0.001 * 0.001 + 0.001 * 0.001 + 0.0075 * 0.0075);
  double expect = std::sqrt(
      (sup_dd * sup_dd / (2 * c.c) + std::sqrt(2.0) * sup_d) / c.c);
  CHECK(iss_bound(c, 0.0, sup_d, sup_dd, 0.0,
                  std::numeric_limits<double>::infinity()) ==
        doctest::Approx(expect).epsilon(1e-12));
  CHECK(expect == doctest::Approx(0.4674).epsilon(1e-3));
}

TEST_CASE("h function") {
  Polytope S = Polytope::simplex(3);
  CostOperator F = congestion_operator();
  Vector xstar = congestion_equilibrium();

  CHECK(h_function(xstar, F, Perturbation::none(), S) == 0.0);

  // At the equilibrium the cost is constant on the simplex, so the optimal
  // face is everything and h = 0.1 (max_i x*_i - |x*|^2).
  Perturbation aff = Perturbation::affine(0.1 * Matrix::Identity(3, 3),
                                          Vector::Zero(3));
  double expect = 0.1 * (xstar.maxCoeff() - xstar.squaredNorm());
  CHECK(h_function(xstar, F, aff, S) ==
        doctest::Approx(expect).epsilon(1e-9));
  CHECK(expect == doctest::Approx(0.0041).epsilon(1e-2));

  // Unique-vertex case: argmin at e2, delta = [0.1, 0, 0].
  CHECK(h_function(vec3(1, 0, 0), F, aff, S) ==
        doctest::Approx(-0.1).epsilon(1e-9));
}

TEST_CASE("perturbation bound") {
  Polytope S = Polytope::simplex(3);
  CostOperator F = congestion_operator();
  double c = check_monotonicity(F, S).c;
  Vector xstar = congestion_equilibrium();

  CHECK(perturbation_bound(xstar, F, Perturbation::none(), S, c) == 0.0);

  SolverConfig cfg;
  cfg.horizon = 60.0;
  for (const Perturbation& pert :
       {Perturbation::affine(0.1 * Matrix::Identity(3, 3), Vector::Zero(3)),
        Perturbation::entropy(0.05)}) {
    TrajectoryRecord run =
        integrate_perturbed_br(vec3(0.8, 0.1, 0.1), F, pert, S, cfg);
    Vector xt = run.final_state();
    double bound = perturbation_bound(xt, F, pert, S, c);
    CHECK((xt - xstar).norm() <= bound);
    // Nonnegativity of h at perturbed equilibria.
    CHECK(h_function(xt, F, pert, S) >= -1e-9);
  }

  CHECK_THROWS_AS(perturbation_bound(xstar, F, Perturbation::none(), S, 0.0),
                  NonpositiveModulus);
  CHECK_THROWS_AS(
      perturbation_bound(vec3(1, 0, 0), F, Perturbation::entropy(0.05), S, c),
      ValidationError);
}

TEST_CASE("equilibrium oracle") {
  Polytope S = Polytope::simplex(3);
  Vector t = equilibrium_oracle(traffic_operator(), S);
  CHECK(t.isApprox(vec3(1, 1, 1) / 3.0, 1e-9));

  Vector cg = equilibrium_oracle(congestion_operator(), S);
  CHECK(cg.isApprox(congestion_equilibrium(), 1e-9));
  CHECK(gap(cg, congestion_operator(), S) <= 1e-9);

  // Projection game: F = x - x0 has the interior point x0 as its solution.
  Vector x0 = vec3(0.2, 0.5, 0.3);
  CostOperator proj{AffineOperator{Matrix::Identity(3, 3), -x0}};
  CHECK(equilibrium_oracle(proj, S).isApprox(x0, 1e-9));

  CHECK_THROWS_AS(equilibrium_oracle(traffic_operator(), Polytope::simplex(7)),
                  DimensionTooLarge);
}

TEST_CASE("oracle matches the dynamics limit") {
  Polytope S = Polytope::simplex(3);
  TrajectoryRecord run =
      integrate_brd(vec3(0.8, 0.1, 0.1), congestion_operator(), S,
                    TimeSignal::zero(3), TimeSignal::zero(3), SolverConfig{});
  CHECK((run.final_state() -
         equilibrium_oracle(congestion_operator(), S))
            .norm() <= 1e-4);
}
