#pragma once

#include "vibrd/analysis.hpp"
#include "vibrd/operators.hpp"
#include "vibrd/polytope.hpp"

namespace vibrd::testing {

inline Vector vec3(double a, double b, double c) {
  Vector v(3);
  v << a, b, c;
  return v;
}

// Six links composed along three routes; rows sum to [[2,3,1],[1,2,3],[3,1,2]].
inline CongestionNetwork traffic_network() {
  CongestionNetwork net;
  net.links = {{vec3(1, 3, 0), 0.0}, {vec3(1, 1, 0), 0.0},
               {vec3(0, 1, 3), 0.0}, {vec3(1, 0, 1), 0.0},
               {vec3(3, 0, 1), 0.0}, {vec3(0, 1, 1), 0.0}};
  net.routes = {{0, 3}, {1, 2}, {4, 5}};
  return net;
}

inline CostOperator traffic_operator() {
  return CostOperator(build_congestion_operator(traffic_network()));
}

inline CostOperator congestion_operator() {
  AffineOperator op;
  op.M.resize(3, 3);
  op.M << 2.0, 0.0, 0.5, 0.0, 1.5, 0.5, 0.5, 0.5, 2.0;
  op.q = vec3(0.3, 0.5, 0.6);
  return CostOperator(op);
}

// Interior solution of F_1 = F_2 = F_3, sum = 1.
inline Vector congestion_equilibrium() {
  return vec3(29.0 / 65.0, 30.0 / 65.0, 6.0 / 65.0);
}

// Simplex cut by the capacity and delay constraints of the traffic example.
inline Polytope constrained_traffic_set() {
  Matrix A(6, 3);
  A << -1, 0, 0, 0, -1, 0, 0, 0, -1, 0, 1, 1, 0, 1, 3, 3, 0, 1;
  Vector b(6);
  b << 0, 0, 0, 0.9, 2.0, 2.0;
  Matrix C = Matrix::Ones(1, 3);
  Vector d = Vector::Ones(1);
  return Polytope(A, b, C, d);
}

}  // namespace vibrd::testing
