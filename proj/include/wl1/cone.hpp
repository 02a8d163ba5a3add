/**
 * Descent cones of weighted l1 balls and the closed-form Euclidean
 * projection onto them.
 *
 * For a support I with 1 <= |I| <= d-1 and positive weights w, the descent
 * cone D(I, w) splits orthogonally as
 *
 *   D(I, w)  =  cone{ e0'/a +- e_j/w_j : j in J }  (+)  L,
 *
 * where J is the complement of I, a = sqrt(sum_{i in I} w_i^2),
 * e0' = -(1/a) sum_{i in I} w_i e_i, and L is the (|I|-1)-dimensional
 * lineality space { x : sum_{i in I} w_i x_i = 0, x_J = 0 }.
 *
 * Working in the orthonormal basis (e0', {e_j : j in J}, q_1..q_{k-1}) the
 * projection reduces to a sort of |z_j|/w_j followed by a threshold scan; the
 * projected point lands in the relative interior of a face whose dimension is
 * read off directly. `project` implements this; `verifyWitness` checks any
 * claimed projection against the cone's generator representation.
 */
#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "wl1/weights.hpp"

namespace wl1 {

struct ConeSpec {
  int d;
  std::vector<int> support;    // I, sorted, 0-based
  std::vector<int> cosupport;  // J = [d] \ I, sorted
  WeightVector w;
  double a;  // sqrt(sum_{i in I} w_i^2)

  int k() const { return static_cast<int>(support.size()); }

  static ConeSpec make(int d, std::vector<int> support, WeightVector w) {
    if (w.dim() != d) throw std::invalid_argument("ConeSpec: weight dimension mismatch");
    std::sort(support.begin(), support.end());
    const int k = static_cast<int>(support.size());
    if (k < 1 || k > d - 1)
      throw std::invalid_argument("ConeSpec: support size must satisfy 1 <= k <= d-1");
    for (int i : support)
      if (i < 0 || i >= d) throw std::invalid_argument("ConeSpec: support index out of range");
    if (std::adjacent_find(support.begin(), support.end()) != support.end())
      throw std::invalid_argument("ConeSpec: duplicate support index");
    std::vector<int> cosupport;
    cosupport.reserve(d - k);
    std::vector<char> inSupport(d, 0);
    for (int i : support) inSupport[i] = 1;
    for (int j = 0; j < d; ++j)
      if (!inSupport[j]) cosupport.push_back(j);
    double a2 = 0.0;
    for (int i : support) a2 += w[i] * w[i];
    return ConeSpec{d, std::move(support), std::move(cosupport), std::move(w), std::sqrt(a2)};
  }
};

/// Coordinates of a point in the cone-adapted orthonormal basis. gL may be
/// absent for face-dimension-only queries (the dimension never depends on it).
struct ConeCoordinates {
  double z0 = 0.0;
  Eigen::VectorXd zJ;                   // ordered as cone.cosupport
  std::optional<Eigen::VectorXd> gL;    // k-1 lineality coefficients
};

/// Deterministic orthonormal basis q_1..q_{k-1} of the lineality space:
/// Gram-Schmidt over w_{i_{l+1}} e_{i_l} - w_{i_l} e_{i_{l+1}} for
/// consecutive support indices, processed in index order.
inline Eigen::MatrixXd linealityBasis(const ConeSpec& cone) {
  const int k = cone.k();
  Eigen::MatrixXd basis(cone.d, k - 1);
  for (int l = 0; l + 1 < k; ++l) {
    const int i1 = cone.support[l];
    const int i2 = cone.support[l + 1];
    Eigen::VectorXd v = Eigen::VectorXd::Zero(cone.d);
    v[i1] = cone.w[i2];
    v[i2] = -cone.w[i1];
    for (int pass = 0; pass < 2; ++pass)  // re-orthogonalize once
      for (int p = 0; p < l; ++p) v -= basis.col(p).dot(v) * basis.col(p);
    basis.col(l) = v / v.norm();
  }
  return basis;
}

inline Eigen::VectorXd coneAxis(const ConeSpec& cone) {
  Eigen::VectorXd e0 = Eigen::VectorXd::Zero(cone.d);
  for (int i : cone.support) e0[i] = -cone.w[i] / cone.a;
  return e0;
}

inline ConeCoordinates toConeCoordinates(const ConeSpec& cone, const Eigen::VectorXd& z) {
  if (z.size() != cone.d) throw std::invalid_argument("toConeCoordinates: dimension mismatch");
  ConeCoordinates coords;
  double s = 0.0;
  for (int i : cone.support) s += cone.w[i] * z[i];
  coords.z0 = -s / cone.a;
  coords.zJ.resize(static_cast<Eigen::Index>(cone.cosupport.size()));
  for (std::size_t p = 0; p < cone.cosupport.size(); ++p)
    coords.zJ[static_cast<Eigen::Index>(p)] = z[cone.cosupport[p]];
  const Eigen::MatrixXd basis = linealityBasis(cone);
  coords.gL = basis.transpose() * z;
  return coords;
}

inline Eigen::VectorXd fromConeCoordinates(const ConeSpec& cone, const ConeCoordinates& coords) {
  if (!coords.gL) throw std::invalid_argument("fromConeCoordinates: lineality part required");
  Eigen::VectorXd z = coords.z0 * coneAxis(cone);
  for (std::size_t p = 0; p < cone.cosupport.size(); ++p)
    z[cone.cosupport[p]] += coords.zJ[static_cast<Eigen::Index>(p)];
  z += linealityBasis(cone) * *coords.gL;
  return z;
}

/// Sorted ordering of J by |z_j|/w_j (descending, ties by index) together
/// with the selection thresholds b_0 <= b_1 <= ... <= b_{d-k}.
struct ThresholdTable {
  std::vector<int> order;  // canonical indices j_1..j_{d-k}
  Eigen::VectorXd b;       // d-k+1 entries, b[l] = b_l
};

inline ThresholdTable thresholds(const ConeSpec& cone, const ConeCoordinates& coords) {
  const int n = static_cast<int>(cone.cosupport.size());
  std::vector<int> pos(n);
  std::iota(pos.begin(), pos.end(), 0);
  std::vector<double> ratio(n);
  for (int p = 0; p < n; ++p)
    ratio[p] = std::abs(coords.zJ[p]) / cone.w[cone.cosupport[p]];
  std::sort(pos.begin(), pos.end(), [&](int lhs, int rhs) {
    if (ratio[lhs] != ratio[rhs]) return ratio[lhs] > ratio[rhs];
    return cone.cosupport[lhs] < cone.cosupport[rhs];
  });

  ThresholdTable table;
  table.order.resize(n);
  table.b.resize(n + 1);
  double prefixWZ = 0.0;  // sum_{i<=l} w_{j_i} |z_{j_i}|
  double prefixW2 = 0.0;  // sum_{i<=l} w_{j_i}^2
  const double a2 = cone.a * cone.a;
  for (int l = 0; l < n; ++l) {
    const int j = cone.cosupport[pos[l]];
    table.order[l] = j;
    const double absZ = std::abs(coords.zJ[pos[l]]);
    table.b[l] = prefixWZ - (a2 + prefixW2) / cone.w[j] * absZ;
    prefixWZ += cone.w[j] * absZ;
    prefixW2 += cone.w[j] * cone.w[j];
  }
  table.b[n] = prefixWZ;
  return table;
}

/**
 * Output of `project`. m counts the active off-support generators; the face
 * containing pi in its relative interior has dimension m + k - 1, except in
 * the interior case m = d-k+1 where pi = z and faceDim = d. pi (canonical
 * coordinates) is filled only when the input carried a lineality part.
 */
struct ProjectionWitness {
  int m = 0;
  int faceDim = 0;
  double t = 0.0;                      // multiplier; 0 in the interior case
  Eigen::VectorXd alphas;              // m strictly positive coefficients
  std::vector<int> order;              // canonical indices j_1..j_{d-k}
  double sqNorm = 0.0;                 // ||pi||^2
  std::optional<Eigen::VectorXd> pi;   // canonical coordinates

  bool interior(int d) const { return faceDim == d; }
};

inline ProjectionWitness project(const ConeSpec& cone, const ConeCoordinates& coords) {
  const int n = static_cast<int>(cone.cosupport.size());
  if (coords.zJ.size() != n) throw std::invalid_argument("project: coordinate size mismatch");
  ThresholdTable table = thresholds(cone, coords);

  const double az0 = cone.a * coords.z0;
  int m = n + 1;  // interior unless a threshold bracket is found
  for (int l = 0; l <= n; ++l) {
    if (az0 <= table.b[l]) {
      m = l;
      break;
    }
  }

  std::vector<int> posOf(cone.d, -1);  // canonical index -> position in zJ
  for (int p = 0; p < n; ++p) posOf[cone.cosupport[p]] = p;

  const double gNormSq = coords.gL ? coords.gL->squaredNorm() : 0.0;
  ProjectionWitness wit;
  wit.order = std::move(table.order);
  wit.m = m;

  if (m == n + 1) {
    // a z0 > b_{d-k}: z already lies in the cone's interior.
    wit.faceDim = cone.d;
    wit.sqNorm = coords.z0 * coords.z0 + coords.zJ.squaredNorm() + gNormSq;
    if (coords.gL) wit.pi = fromConeCoordinates(cone, coords);
    return wit;
  }

  double sumWZ = 0.0, sumW2 = 0.0;
  for (int i = 0; i < m; ++i) {
    const int j = wit.order[i];
    sumWZ += cone.w[j] * std::abs(coords.zJ[posOf[j]]);
    sumW2 += cone.w[j] * cone.w[j];
  }
  const double a2 = cone.a * cone.a;
  const double t = (-az0 + sumWZ) / (a2 + sumW2);
  wit.t = t;
  wit.faceDim = m + cone.k() - 1;
  wit.alphas.resize(m);
  double residSq = 0.0;
  for (int i = 0; i < m; ++i) {
    const int j = wit.order[i];
    const double absZ = std::abs(coords.zJ[posOf[j]]);
    wit.alphas[i] = cone.w[j] * absZ - cone.w[j] * cone.w[j] * t;
    const double r = absZ - cone.w[j] * t;
    residSq += r * r;
  }
  const double axial = coords.z0 + cone.a * t;
  wit.sqNorm = axial * axial + residSq + gNormSq;

  if (coords.gL) {
    Eigen::VectorXd pi = axial * coneAxis(cone);  // e0' component is (sum alphas)/a = z0 + a t
    for (int i = 0; i < m; ++i) {
      const int j = wit.order[i];
      const double sign = coords.zJ[posOf[j]] < 0.0 ? -1.0 : 1.0;
      pi[j] += sign * wit.alphas[i] / cone.w[j];
    }
    pi += linealityBasis(cone) * *coords.gL;
    wit.pi = pi;
  }
  return wit;
}

inline ProjectionWitness project(const ConeSpec& cone, const Eigen::VectorXd& z) {
  return project(cone, toConeCoordinates(cone, z));
}

/**
 * Optimality check for a claimed projection, built from the cone's generator
 * representation rather than the threshold scan. The projected point is
 * reconstructed from the witness multipliers; the report carries one residual
 * per KKT condition:
 *   primal          max(0, -min alpha_i)          (pi must lie in the cone)
 *   dual            max over generators g of <z - pi, g>   (z - pi in polar)
 *   complementarity |<pi, z - pi>|
 */
struct VerifyReport {
  double primalResidual = 0.0;
  double dualResidual = 0.0;
  double complementarity = 0.0;
  bool primalOk = false, dualOk = false, complementarityOk = false;
  bool ok() const { return primalOk && dualOk && complementarityOk; }
};

inline VerifyReport verifyWitness(const ConeSpec& cone, const Eigen::VectorXd& z,
                                  const ProjectionWitness& witness, double tol = 1e-10) {
  Eigen::VectorXd pi;
  if (witness.interior(cone.d)) {
    pi = z;
  } else {
    const Eigen::MatrixXd basis = linealityBasis(cone);
    const Eigen::VectorXd axis = coneAxis(cone);
    ConeCoordinates coords = toConeCoordinates(cone, z);
    std::vector<int> posOf(cone.d, -1);
    for (std::size_t p = 0; p < cone.cosupport.size(); ++p)
      posOf[cone.cosupport[p]] = static_cast<int>(p);
    pi = Eigen::VectorXd::Zero(cone.d);
    for (int i = 0; i < witness.m; ++i) {
      const int j = witness.order[i];
      const double sign = coords.zJ[posOf[j]] < 0.0 ? -1.0 : 1.0;
      // u_i = e0'/a + sign(z_{j_i})/w_{j_i} e_{j_i}
      pi += witness.alphas[i] * (axis / cone.a);
      pi[j] += witness.alphas[i] * sign / cone.w[j];
    }
    pi += basis * (basis.transpose() * z);
  }

  VerifyReport report;
  if (witness.m > 0 && witness.alphas.size() > 0)
    report.primalResidual = std::max(0.0, -witness.alphas.minCoeff());
  report.primalOk = report.primalResidual <= tol;

  const Eigen::VectorXd resid = z - pi;
  // Generators of D(I, w): +-e_j/w_j - y for j in J with y the barycentric
  // point of the face, plus the lineality basis and its negation.
  Eigen::VectorXd y = Eigen::VectorXd::Zero(cone.d);
  for (int i : cone.support) y[i] = 1.0 / (cone.k() * cone.w[i]);
  double worst = -std::numeric_limits<double>::infinity();
  for (int j : cone.cosupport) {
    const double base = -resid.dot(y);
    worst = std::max(worst, base + resid[j] / cone.w[j]);
    worst = std::max(worst, base - resid[j] / cone.w[j]);
  }
  const Eigen::MatrixXd basis = linealityBasis(cone);
  for (Eigen::Index l = 0; l < basis.cols(); ++l)
    worst = std::max(worst, std::abs(resid.dot(basis.col(l))));
  report.dualResidual = std::max(0.0, worst);
  report.dualOk = report.dualResidual <= tol;

  report.complementarity = std::abs(pi.dot(resid));
  report.complementarityOk = report.complementarity <= tol;
  return report;
}

}  // namespace wl1
