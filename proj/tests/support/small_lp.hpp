/**
 * Small dense inequality-form LP, min c.v s.t. G v <= h, solved by a plain
 * Mehrotra predictor-corrector with a dense normal-equation factorization.
 * Needs a strictly feasible start. Used by the recovery tests to decide
 * whether the descent cone meets the measurement kernel (an LP over the
 * kernel basis), independently of the basis-pursuit solver's structure.
 */
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace oracle {

struct SmallLpResult {
  Eigen::VectorXd v;
  double objective = 0.0;
  bool converged = false;
};

inline SmallLpResult solveInequalityLp(const Eigen::VectorXd& c, const Eigen::MatrixXd& G,
                                       const Eigen::VectorXd& h, const Eigen::VectorXd& v0,
                                       double tol = 1e-8, int maxIter = 200) {
  const int n = static_cast<int>(G.cols());
  const int p = static_cast<int>(G.rows());
  Eigen::VectorXd v = v0;
  Eigen::VectorXd s = h - G * v;
  Eigen::VectorXd z = Eigen::VectorXd::Ones(p);
  const double cScale = 1.0 + c.lpNorm<Eigen::Infinity>();

  auto stepLimit = [](const Eigen::VectorXd& x, const Eigen::VectorXd& dx) {
    double alpha = 1.0;
    for (Eigen::Index i = 0; i < x.size(); ++i)
      if (dx[i] < 0.0) alpha = std::min(alpha, -x[i] / dx[i]);
    return alpha;
  };

  SmallLpResult result;
  result.v = v;
  result.objective = c.dot(v);
  for (int iter = 0; iter < maxIter; ++iter) {
    if (!v.allFinite() || !s.allFinite() || !z.allFinite()) return result;
    const Eigen::VectorXd rd = c + G.transpose() * z;
    const Eigen::VectorXd rg = G * v + s - h;
    const double mu = s.dot(z) / p;
    result.v = v;
    result.objective = c.dot(v);
    if (rd.lpNorm<Eigen::Infinity>() / cScale <= tol &&
        rg.lpNorm<Eigen::Infinity>() <= tol && mu / (1.0 + std::abs(result.objective)) <= tol) {
      result.converged = true;
      return result;
    }

    const Eigen::ArrayXd w = z.array() / s.array();
    Eigen::MatrixXd H = G.transpose() * w.matrix().asDiagonal() * G;
    H.diagonal().array() += 1e-13 * (1.0 + H.diagonal().maxCoeff());
    Eigen::LDLT<Eigen::MatrixXd> ldlt(H);

    Eigen::VectorXd dv, ds, dz;
    auto direction = [&](const Eigen::VectorXd& rc) {
      const Eigen::ArrayXd phi = (rc.array() + z.array() * rg.array()) / s.array();
      dv = ldlt.solve(-rd - G.transpose() * phi.matrix());
      ds = -rg - G * dv;
      dz = ((rc.array() - z.array() * ds.array()) / s.array()).matrix();
    };

    const Eigen::VectorXd comp = -(s.array() * z.array()).matrix();
    direction(comp);
    const double aP = stepLimit(s, ds), aD = stepLimit(z, dz);
    const double muAff = (s + aP * ds).dot(z + aD * dz) / p;
    const double sigma = std::pow(std::clamp(muAff / mu, 0.0, 1.0), 3);
    direction((comp.array() - ds.array() * dz.array() + sigma * mu).matrix());

    const double eta = std::max(0.995, 1.0 - mu);
    const double alphaP = std::min(1.0, eta * stepLimit(s, ds));
    const double alphaD = std::min(1.0, eta * stepLimit(z, dz));
    v += alphaP * dv;
    s += alphaP * ds;
    z += alphaD * dz;
  }
  result.v = v;
  result.objective = c.dot(v);
  return result;
}

/**
 * Minimum of the weighted-l1 directional derivative at x0 over the kernel of
 * A, normalized by an l-infinity box:
 *
 *   min sum_{i in I} w_i sign(x0_i) v_i + sum_{j notin I} w_j |v_j|
 *   s.t. v = K u, |u| <= 1,
 *
 * where K spans ker(A). Negative optimum (beyond tolerance) means the descent
 * cone meets the kernel nontrivially, i.e. recovery must fail.
 */
inline double descentFeasibilityValue(const Eigen::MatrixXd& A, const Eigen::VectorXd& x0,
                                      const Eigen::VectorXd& w) {
  const int d = static_cast<int>(A.cols());
  const int m = static_cast<int>(A.rows());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
  const int nk = d - m;
  const Eigen::MatrixXd K = svd.matrixV().rightCols(nk);

  std::vector<int> offSupport;
  Eigen::VectorXd signedWeights = Eigen::VectorXd::Zero(d);
  for (int i = 0; i < d; ++i) {
    if (x0[i] != 0.0) {
      signedWeights[i] = w[i] * (x0[i] > 0.0 ? 1.0 : -1.0);
    } else {
      offSupport.push_back(i);
    }
  }
  const int nj = static_cast<int>(offSupport.size());

  // variables (u, tau); constraints |K_j u| <= tau_j and |u| <= 1
  const int n = nk + nj;
  const int rows = 2 * nj + 2 * nk;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
  c.head(nk) = K.transpose() * signedWeights;
  for (int j = 0; j < nj; ++j) c[nk + j] = w[offSupport[j]];

  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(rows, n);
  Eigen::VectorXd h = Eigen::VectorXd::Zero(rows);
  for (int j = 0; j < nj; ++j) {
    G.block(2 * j, 0, 1, nk) = K.row(offSupport[j]);
    G(2 * j, nk + j) = -1.0;
    G.block(2 * j + 1, 0, 1, nk) = -K.row(offSupport[j]);
    G(2 * j + 1, nk + j) = -1.0;
  }
  for (int l = 0; l < nk; ++l) {
    G(2 * nj + 2 * l, l) = 1.0;
    h[2 * nj + 2 * l] = 1.0;
    G(2 * nj + 2 * l + 1, l) = -1.0;
    h[2 * nj + 2 * l + 1] = 1.0;
  }

  Eigen::VectorXd v0 = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < nj; ++j) v0[nk + j] = 1.0;
  return solveInequalityLp(c, G, h, v0).objective;
}

}  // namespace oracle
