/**
 * Brute-force LP oracle by basic-solution enumeration on the standard form
 * min c.u s.t. M u = b, u >= 0: every m-column basis is inverted and the
 * best feasible basic solution wins. Exponential, for d <= 6 test instances
 * only. Used as the independent check of the interior-point solver.
 */
#pragma once

#include <Eigen/Dense>
#include <limits>
#include <vector>

namespace oracle {

struct LpVertexResult {
  double objective = std::numeric_limits<double>::infinity();
  Eigen::VectorXd u;
  bool feasible = false;
};

inline LpVertexResult lpByVertexEnumeration(const Eigen::VectorXd& c, const Eigen::MatrixXd& M,
                                            const Eigen::VectorXd& b, double feasTol = 1e-9) {
  const int m = static_cast<int>(M.rows());
  const int n = static_cast<int>(M.cols());
  LpVertexResult best;

  std::vector<int> combo(m);
  for (int i = 0; i < m; ++i) combo[i] = i;
  auto advance = [&]() {
    int i = m - 1;
    while (i >= 0 && combo[i] == n - m + i) --i;
    if (i < 0) return false;
    ++combo[i];
    for (int j = i + 1; j < m; ++j) combo[j] = combo[j - 1] + 1;
    return true;
  };

  Eigen::MatrixXd basis(m, m);
  do {
    for (int j = 0; j < m; ++j) basis.col(j) = M.col(combo[j]);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(basis);
    if (!lu.isInvertible()) continue;
    const Eigen::VectorXd ub = lu.solve(b);
    bool feasible = true;
    for (int j = 0; j < m; ++j) feasible &= (ub[j] >= -feasTol);
    if (!feasible) continue;
    double obj = 0.0;
    for (int j = 0; j < m; ++j) obj += c[combo[j]] * ub[j];
    if (obj < best.objective) {
      best.objective = obj;
      best.feasible = true;
      best.u = Eigen::VectorXd::Zero(n);
      for (int j = 0; j < m; ++j) best.u[combo[j]] = std::max(0.0, ub[j]);
    }
  } while (advance());
  return best;
}

/// Weighted basis pursuit in standard form via the split x = p - q:
/// min w.(p+q) s.t. [A, -A] (p;q) = y, p,q >= 0.
inline LpVertexResult weightedBasisPursuitOracle(const Eigen::MatrixXd& A,
                                                 const Eigen::VectorXd& y,
                                                 const Eigen::VectorXd& w) {
  const int d = static_cast<int>(A.cols());
  Eigen::MatrixXd M(A.rows(), 2 * d);
  M << A, -A;
  Eigen::VectorXd c(2 * d);
  c << w, w;
  return lpByVertexEnumeration(c, M, y);
}

}  // namespace oracle
