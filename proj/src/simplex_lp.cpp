#include "vibrd/simplex_lp.hpp"

#include <vector>

#include "vibrd/errors.hpp"

namespace vibrd::detail {
namespace {

constexpr double kTol = 1e-10;
constexpr int kMaxPivots = 20000;

struct Tableau {
  Eigen::MatrixXd T;       // rows x (ncols + 1), rhs in the last column
  Eigen::VectorXd cost;    // reduced costs of the objective being driven
  std::vector<int> basis;  // basic column per row
  int ncols = 0;

  void pivot(int r, int c) {
    T.row(r) /= T(r, c);
    for (int i = 0; i < T.rows(); ++i) {
      if (i == r || std::abs(T(i, c)) < 1e-14) continue;
      T.row(i) -= T(i, c) * T.row(r);
    }
    if (std::abs(cost(c)) > 1e-14) cost -= cost(c) * T.row(r).transpose();
    basis[static_cast<size_t>(r)] = c;
  }

  void price_out() {
    for (int r = 0; r < T.rows(); ++r) {
      int bc = basis[static_cast<size_t>(r)];
      if (std::abs(cost(bc)) > 1e-14) cost -= cost(bc) * T.row(r).transpose();
    }
  }

  // Bland's rule: lowest-index entering column with negative reduced cost;
  // among minimum-ratio rows, the one whose basic variable has lowest index.
  LpStatus run(int enter_limit) {
    for (int iter = 0; iter < kMaxPivots; ++iter) {
      int enter = -1;
      for (int c = 0; c < enter_limit; ++c) {
        if (cost(c) < -kTol) {
          enter = c;
          break;
        }
      }
      if (enter < 0) return LpStatus::Optimal;
      int leave = -1;
      double best_ratio = 0.0;
      for (int r = 0; r < T.rows(); ++r) {
        double a = T(r, enter);
        if (a <= kTol) continue;
        double ratio = T(r, ncols) / a;
        if (leave < 0 || ratio < best_ratio - kTol ||
            (ratio < best_ratio + kTol && basis[static_cast<size_t>(r)] <
                                              basis[static_cast<size_t>(leave)])) {
          leave = r;
          best_ratio = ratio;
        }
      }
      if (leave < 0) return LpStatus::Unbounded;
      pivot(leave, enter);
    }
    throw NumericalError("simplex did not terminate within the pivot budget");
  }

  void drop_rows(const std::vector<int>& keep) {
    Eigen::MatrixXd T2(static_cast<int>(keep.size()), T.cols());
    std::vector<int> b2;
    b2.reserve(keep.size());
    for (size_t i = 0; i < keep.size(); ++i) {
      T2.row(static_cast<int>(i)) = T.row(keep[i]);
      b2.push_back(basis[static_cast<size_t>(keep[i])]);
    }
    T = std::move(T2);
    basis = std::move(b2);
  }
};

}  // namespace

LpResult solve_lp_nonneg(const Eigen::VectorXd& c,
                         const Eigen::MatrixXd& G, const Eigen::VectorXd& g,
                         const Eigen::MatrixXd& E, const Eigen::VectorXd& e) {
  const int n = static_cast<int>(c.size());
  const int m = static_cast<int>(G.rows());
  const int p = static_cast<int>(E.rows());
  const int rows = m + p;

  // Columns: [w (n) | slacks (m) | artificials].
  std::vector<int> art_of_row(static_cast<size_t>(rows), -1);
  int nart = 0;
  for (int i = 0; i < m; ++i)
    if (g(i) < 0) art_of_row[static_cast<size_t>(i)] = nart++;
  for (int i = 0; i < p; ++i) art_of_row[static_cast<size_t>(m + i)] = nart++;

  Tableau tb;
  tb.ncols = n + m + nart;
  tb.T.setZero(rows, tb.ncols + 1);
  tb.basis.assign(static_cast<size_t>(rows), -1);
  for (int i = 0; i < m; ++i) {
    double s = g(i) < 0 ? -1.0 : 1.0;
    if (n > 0) tb.T.row(i).head(n) = s * G.row(i);
    tb.T(i, n + i) = s;
    tb.T(i, tb.ncols) = s * g(i);
  }
  for (int i = 0; i < p; ++i) {
    double s = e(i) < 0 ? -1.0 : 1.0;
    if (n > 0) tb.T.row(m + i).head(n) = s * E.row(i);
    tb.T(m + i, tb.ncols) = s * e(i);
  }
  for (int r = 0; r < rows; ++r) {
    int a = art_of_row[static_cast<size_t>(r)];
    tb.basis[static_cast<size_t>(r)] = a >= 0 ? n + m + a : n + r;
    if (a >= 0) tb.T(r, n + m + a) = 1.0;
  }

  LpResult res;
  if (nart > 0) {
    tb.cost.setZero(tb.ncols + 1);
    for (int a = 0; a < nart; ++a) tb.cost(n + m + a) = 1.0;
    tb.price_out();
    LpStatus st = tb.run(tb.ncols);
    if (st != LpStatus::Optimal || -tb.cost(tb.ncols) > 1e-8) {
      res.status = LpStatus::Infeasible;
      return res;
    }
    // Pivot remaining zero-level artificials out; rows that cannot be
    // cleared are redundant and get dropped.
    std::vector<int> keep;
    for (int r = 0; r < rows; ++r) {
      if (tb.basis[static_cast<size_t>(r)] < n + m) {
        keep.push_back(r);
        continue;
      }
      int col = -1;
      for (int cidx = 0; cidx < n + m; ++cidx)
        if (std::abs(tb.T(r, cidx)) > 1e-9) {
          col = cidx;
          break;
        }
      if (col >= 0) {
        tb.pivot(r, col);
        keep.push_back(r);
      }
    }
    if (static_cast<int>(keep.size()) != rows) tb.drop_rows(keep);
  }

  // Phase 2 over the original columns only.
  tb.cost.setZero(tb.ncols + 1);
  tb.cost.head(n) = c;
  tb.price_out();
  LpStatus st = tb.run(n + m);
  if (st == LpStatus::Unbounded) {
    res.status = LpStatus::Unbounded;
    return res;
  }

  res.status = LpStatus::Optimal;
  res.x.setZero(n);
  for (size_t r = 0; r < tb.basis.size(); ++r) {
    int bc = tb.basis[r];
    if (bc < n) res.x(bc) = tb.T(static_cast<int>(r), tb.ncols);
  }
  res.objective = c.dot(res.x);
  res.unique = true;
  std::vector<char> is_basic(static_cast<size_t>(tb.ncols), 0);
  for (int bc : tb.basis) is_basic[static_cast<size_t>(bc)] = 1;
  for (int cidx = 0; cidx < n + m; ++cidx) {
    if (!is_basic[static_cast<size_t>(cidx)] && tb.cost(cidx) <= kTol) {
      res.unique = false;
      break;
    }
  }
  return res;
}

LpResult solve_lp_free(const Eigen::VectorXd& c,
                       const Eigen::MatrixXd& G, const Eigen::VectorXd& g,
                       const Eigen::MatrixXd& E, const Eigen::VectorXd& e) {
  const int n = static_cast<int>(c.size());
  Eigen::VectorXd c2(2 * n);
  c2 << c, -c;
  Eigen::MatrixXd G2(G.rows(), 2 * n);
  G2 << G, -G;
  Eigen::MatrixXd E2(E.rows(), 2 * n);
  E2 << E, -E;
  LpResult r = solve_lp_nonneg(c2, G2, g, E2, e);
  if (r.status == LpStatus::Optimal) r.x = (r.x.head(n) - r.x.tail(n)).eval();
  return r;
}

}  // namespace vibrd::detail
