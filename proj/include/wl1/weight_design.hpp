/**
 * Closed-form weight design from marginal support probabilities, and the
 * statistical-dimension upper bounds the design minimizes.
 *
 * The designed weight for marginal beta solves
 *
 *   lambda * beta / (1 - beta)  =  sqrt(2/pi) * J1(lambda),
 *
 * whose left side increases from 0 and right side decreases to 0, so
 * bisection converges unconditionally. The scale of the weight vector is
 * irrelevant to both the recovery problem and the cone geometry; the
 * returned weights fix tau = 1.
 */
#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "wl1/special_functions.hpp"
#include "wl1/weights.hpp"

namespace wl1 {

inline constexpr double kSqrt2OverPi = 0.79788456080286535588;  // sqrt(2/pi)

/// Root of lambda*beta/(1-beta) = sqrt(2/pi)*J1(lambda), to residual <= tol.
inline double solveLambda(double beta, double tol = 1e-10) {
  if (!(beta > 0.0) || !(beta < 1.0)) throw std::invalid_argument("solveLambda: beta outside (0,1)");
  if (!(tol > 0.0)) throw std::invalid_argument("solveLambda: tol must be positive");
  const double slope = beta / (1.0 - beta);
  auto residual = [&](double lambda) { return lambda * slope - kSqrt2OverPi * momentJ1(lambda); };
  double lo = 0.0, hi = 1.0;
  while (residual(hi) < 0.0) hi *= 2.0;
  double mid = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    mid = 0.5 * (lo + hi);
    const double r = residual(mid);
    if (std::abs(r) <= tol) break;
    (r < 0.0 ? lo : hi) = mid;
  }
  return mid;
}

inline WeightVector weightsFromBeta(const BetaVector& beta, double tol = 1e-10) {
  Eigen::VectorXd w(beta.dim());
  for (int i = 0; i < beta.dim(); ++i) w[i] = solveLambda(beta[i], tol);
  return WeightVector(std::move(w));
}

struct BoundValue {
  double bound;
  double tau;  // minimizer (capped for supports whose infimum sits at infinity)
};

namespace detail {

/// Minimizes a differentiable strictly convex function on tau >= 0 given its
/// derivative; the derivative is negative at 0 (else tau = 0 is optimal) and
/// the bracket doubles until it turns positive or hits the cap.
template <class Deriv>
double minimizeConvexOnRay(Deriv&& derivative, double relTol = 1e-12) {
  constexpr double kTauCap = 1e8;
  if (derivative(0.0) >= 0.0) return 0.0;
  double hi = 1.0;
  while (derivative(hi) < 0.0) {
    hi *= 2.0;
    if (hi >= kTauCap) return kTauCap;
  }
  double lo = hi * 0.5 > 0.0 ? hi * 0.5 : 0.0;
  if (derivative(lo) > 0.0) lo = 0.0;
  while (hi - lo > relTol * hi) {
    const double mid = 0.5 * (lo + hi);
    (derivative(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/**
 * Per-support statistical-dimension bound
 *   delta(D(I,w)) <= inf_{tau>=0} |I| + tau^2 sum_{i in I} w_i^2
 *                                + sum_{i not in I} sqrt(2/pi) J2(tau w_i).
 * Any support size 0..d is accepted. For I = [d] the minimizer is tau = 0;
 * for I = {} the infimum (value 0) is approached as tau -> inf and the
 * returned tau is capped.
 */
inline BoundValue deltaBoundSupport(const std::vector<int>& support, const WeightVector& w) {
  const int d = w.dim();
  std::vector<char> inSupport(d, 0);
  for (int i : support) {
    if (i < 0 || i >= d) throw std::invalid_argument("deltaBoundSupport: index out of range");
    inSupport[i] = 1;
  }
  double a2 = 0.0;
  for (int i : support) a2 += w[i] * w[i];
  auto derivative = [&](double tau) {
    double dv = 2.0 * tau * a2;
    for (int i = 0; i < d; ++i)
      if (!inSupport[i]) dv -= 2.0 * kSqrt2OverPi * w[i] * momentJ1(tau * w[i]);
    return dv;
  };
  const double tau = detail::minimizeConvexOnRay(derivative);
  double value = static_cast<double>(support.size()) + tau * tau * a2;
  for (int i = 0; i < d; ++i)
    if (!inSupport[i]) value += kSqrt2OverPi * momentJ2(tau * w[i]);
  return {value, tau};
}

/// Expected-statistical-dimension bound at a fixed tau:
///   sum beta_i + sum_j [ beta_j (tau w_j)^2 + (1-beta_j) sqrt(2/pi) J2(tau w_j) ].
inline double expectedDeltaUpperBound(const BetaVector& beta, const WeightVector& w, double tau) {
  if (beta.dim() != w.dim()) throw std::invalid_argument("expectedDeltaUpperBound: dim mismatch");
  if (!(tau >= 0.0)) throw std::invalid_argument("expectedDeltaUpperBound: tau must be >= 0");
  // grouped per coordinate so the tau = 0 value is exactly d
  double value = 0.0;
  for (int j = 0; j < w.dim(); ++j) {
    const double lam = tau * w[j];
    value += beta[j] + (beta[j] * lam * lam + (1.0 - beta[j]) * (kSqrt2OverPi * momentJ2(lam)));
  }
  return value;
}

inline BoundValue expectedDeltaUpperBoundMin(const BetaVector& beta, const WeightVector& w) {
  auto derivative = [&](double tau) {
    double dv = 0.0;
    for (int j = 0; j < w.dim(); ++j) {
      const double lam = tau * w[j];
      dv += 2.0 * w[j] * (beta[j] * lam - (1.0 - beta[j]) * kSqrt2OverPi * momentJ1(lam));
    }
    return dv;
  };
  const double tau = detail::minimizeConvexOnRay(derivative);
  return {expectedDeltaUpperBound(beta, w, tau), tau};
}

}  // namespace wl1
