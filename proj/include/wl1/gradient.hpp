/**
 * Monte Carlo gradient of the expected statistical dimension with respect to
 * the weights, and a backtracking steepest-descent driver.
 *
 * A single sample differentiates ||pi_C(z)||^2 analytically through a, z0 and
 * t while the sorted ordering and the active count m stay fixed; that reading
 * is valid on the open set where the ordering comparisons and the threshold
 * bracket hold strictly, so boundary samples are flagged invalid and redrawn.
 * Correctness is pinned by a central-finite-difference contract in the test
 * suite (relative error <= 1e-5 on non-boundary samples).
 */
#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "wl1/cone.hpp"
#include "wl1/distributions.hpp"
#include "wl1/estimators.hpp"
#include "wl1/parallel.hpp"
#include "wl1/rng.hpp"

namespace wl1 {

struct GradientSample {
  Eigen::VectorXd grad;
  bool valid = false;
};

/// d ||pi_{D(I,w)}(z)||^2 / dw for a fixed canonical point z.
inline GradientSample gradientSample(const std::vector<int>& support, const WeightVector& w,
                                     const Eigen::VectorXd& z, double tieTol = 1e-12) {
  const int d = w.dim();
  const int k = static_cast<int>(support.size());
  if (k < 1 || k > d - 1)
    throw std::invalid_argument("gradientSample: support size must satisfy 1 <= k <= d-1");
  if (z.size() != d) throw std::invalid_argument("gradientSample: dimension mismatch");

  ConeSpec cone = ConeSpec::make(d, support, w);
  const int n = d - k;
  ConeCoordinates coords;
  double s1 = 0.0;
  for (int i : cone.support) s1 += cone.w[i] * z[i];
  const double a = cone.a;
  coords.z0 = -s1 / a;
  coords.zJ.resize(n);
  for (int p = 0; p < n; ++p) coords.zJ[p] = z[cone.cosupport[p]];

  const ThresholdTable table = thresholds(cone, coords);
  GradientSample sample;
  sample.grad = Eigen::VectorXd::Zero(d);

  std::vector<int> posOf(d, -1);
  for (int p = 0; p < n; ++p) posOf[cone.cosupport[p]] = p;

  // Strictness guards: sorted ratios must be strictly decreasing and a z0 must
  // sit strictly between thresholds.
  for (int i = 0; i + 1 < n; ++i) {
    const int ja = table.order[i], jb = table.order[i + 1];
    const double ra = std::abs(coords.zJ[posOf[ja]]) / cone.w[ja];
    const double rb = std::abs(coords.zJ[posOf[jb]]) / cone.w[jb];
    if (ra - rb <= tieTol * std::max(1.0, ra)) return sample;
  }
  const double az0 = a * coords.z0;
  for (int l = 0; l <= n; ++l)
    if (std::abs(az0 - table.b[l]) <= tieTol * std::max({1.0, std::abs(az0), std::abs(table.b[l])}))
      return sample;

  int m = n + 1;
  for (int l = 0; l <= n; ++l) {
    if (az0 <= table.b[l]) {
      m = l;
      break;
    }
  }
  sample.valid = true;
  if (m == n + 1) return sample;  // interior: ||pi||^2 = ||z||^2 locally

  double sumWZ = 0.0, sumW2 = 0.0;
  for (int i = 0; i < m; ++i) {
    const int j = table.order[i];
    sumWZ += cone.w[j] * std::abs(coords.zJ[posOf[j]]);
    sumW2 += cone.w[j] * cone.w[j];
  }
  const double denom = a * a + sumW2;
  const double t = (s1 + sumWZ) / denom;
  const double u0 = coords.z0 + a * t;
  const double common = sumWZ - t * sumW2;  // sum_i (|z_{j_i}| - w_{j_i} t) w_{j_i}

  for (int i : cone.support) {
    const double da = cone.w[i] / a;
    const double dz0 = -z[i] / a - coords.z0 * cone.w[i] / (a * a);
    const double dt = (z[i] - 2.0 * t * cone.w[i]) / denom;
    const double du0 = dz0 + t * da + a * dt;
    sample.grad[i] = 2.0 * u0 * du0 - 2.0 * coords.z0 * dz0 - 2.0 * common * dt;
  }
  for (int i = 0; i < m; ++i) {
    const int j = table.order[i];
    const double absZ = std::abs(coords.zJ[posOf[j]]);
    const double dt = (absZ - 2.0 * t * cone.w[j]) / denom;
    const double du0 = a * dt;
    sample.grad[j] = 2.0 * u0 * du0 - 2.0 * common * dt - 2.0 * (absZ - cone.w[j] * t) * t;
  }
  return sample;
}

struct GradientEstimate {
  Eigen::VectorXd grad;
  Eigen::VectorXd standardError;
  std::uint64_t n = 0;
  std::uint64_t redraws = 0;
};

inline GradientEstimate estimateGradient(const SupportDistribution& dist, const WeightVector& w,
                                         std::uint64_t nSamples, std::uint64_t seed,
                                         int workers = 1) {
  if (nSamples < 1) throw std::invalid_argument("estimateGradient: n must be >= 1");
  const int d = w.dim();
  const std::uint64_t stream = streamTag("gradient");
  struct Acc {
    Eigen::VectorXd sum, sumSq;
    std::uint64_t redraws = 0;
  };
  Acc init{Eigen::VectorXd::Zero(d), Eigen::VectorXd::Zero(d), 0};
  auto parts = runPartitioned(nSamples, workers, init, [&](Acc& acc, std::uint64_t idx) {
    Rng rng = Rng::forSample(seed, stream, idx);
    const auto support = sampleSupport(dist, rng);
    const int k = static_cast<int>(support.size());
    if (k == 0 || k == d) return;  // cone independent of w: zero contribution
    Eigen::VectorXd z(d);
    for (int attempt = 0; attempt < 100; ++attempt) {
      for (int i = 0; i < d; ++i) z[i] = rng.normal();
      GradientSample sample = gradientSample(support, w, z);
      if (sample.valid) {
        acc.sum += sample.grad;
        acc.sumSq += sample.grad.cwiseProduct(sample.grad);
        return;
      }
      ++acc.redraws;
    }
    throw std::runtime_error("estimateGradient: persistent boundary sample");
  });
  GradientEstimate est;
  est.n = nSamples;
  est.grad = Eigen::VectorXd::Zero(d);
  est.standardError = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd sumSq = Eigen::VectorXd::Zero(d);
  for (const auto& part : parts) {
    est.grad += part.sum;
    sumSq += part.sumSq;
    est.redraws += part.redraws;
  }
  est.grad /= static_cast<double>(nSamples);
  if (nSamples > 1) {
    const double n = static_cast<double>(nSamples);
    for (int i = 0; i < d; ++i) {
      const double variance =
          std::max(0.0, (sumSq[i] - n * est.grad[i] * est.grad[i]) / (n - 1.0));
      est.standardError[i] = std::sqrt(variance / n);
    }
  }
  return est;
}

struct DescentConfig {
  std::uint64_t nGradSamples = 20000;
  std::uint64_t nEvalSamples = 20000;
  double initialStep = 1.0;
  int maxIters = 20;
  double minStep = 1e-4;
  std::uint64_t seed = 0;
  bool commonRandomNumbers = true;
  int workers = 1;

  void validate() const {
    if (nGradSamples < 1 || nEvalSamples < 1 || !(initialStep > 0.0) || maxIters < 1 ||
        !(minStep > 0.0) || !(minStep < initialStep))
      throw std::invalid_argument("DescentConfig: invalid parameters");
  }
};

struct DescentStep {
  int iter = 0;
  Eigen::VectorXd w;         // iterate after this step
  double deltaBefore = 0.0;  // estimate at the previous iterate
  double seBefore = 0.0;
  double deltaAfter = 0.0;   // estimate that won acceptance
  double seAfter = 0.0;
  double step = 0.0;
  bool accepted = false;
};

struct DescentTrajectory {
  std::vector<DescentStep> steps;
  Eigen::VectorXd finalW;
  std::string termination;  // "max-iterations" | "min-step" | "zero-gradient" | "floor"
};

inline constexpr double kWeightFloor = 1e-8;

/// Steepest descent on the expected statistical dimension. A candidate step
/// is accepted only when its fresh delta estimate improves on the current one
/// by more than one standard error; otherwise the step is halved down to
/// cfg.minStep. Common random numbers (default) evaluate current and
/// candidate with the same substream.
inline DescentTrajectory descend(const SupportDistribution& dist, const WeightVector& w0,
                                 const DescentConfig& cfg) {
  cfg.validate();
  const int d = w0.dim();
  DescentTrajectory traj;
  Eigen::VectorXd w = w0.values();

  {
    DeltaEstimate start = estimateExpectedDelta(dist, WeightVector(w), cfg.nEvalSamples,
                                                DeltaMode::FaceDimension,
                                                deriveStream(cfg.seed, "descend-eval", 0),
                                                cfg.workers);
    traj.steps.push_back({0, w, start.mean, start.standardError, start.mean,
                          start.standardError, 0.0, true});
  }

  for (int iter = 1; iter <= cfg.maxIters; ++iter) {
    const GradientEstimate g =
        estimateGradient(dist, WeightVector(w), cfg.nGradSamples,
                         deriveStream(cfg.seed, "descend-grad", iter), cfg.workers);
    if (g.grad.lpNorm<Eigen::Infinity>() == 0.0) {
      traj.termination = "zero-gradient";
      break;
    }
    double tau = cfg.initialStep;
    for (int i = 0; i < d; ++i)
      if (g.grad[i] > 0.0) tau = std::min(tau, (w[i] - kWeightFloor) / g.grad[i]);
    if (!(tau > 0.0)) {
      traj.termination = "floor";
      break;
    }

    const std::uint64_t evalSeed = deriveStream(cfg.seed, "descend-eval", iter);
    const DeltaEstimate cur = estimateExpectedDelta(dist, WeightVector(w), cfg.nEvalSamples,
                                                    DeltaMode::FaceDimension, evalSeed,
                                                    cfg.workers);
    bool accepted = false;
    int halvings = 0;
    while (tau >= cfg.minStep) {
      Eigen::VectorXd candidate = (w - tau * g.grad).cwiseMax(kWeightFloor);
      const std::uint64_t candSeed =
          cfg.commonRandomNumbers
              ? evalSeed
              : deriveStream(evalSeed, "candidate", static_cast<std::uint64_t>(halvings));
      const DeltaEstimate cand = estimateExpectedDelta(dist, WeightVector(candidate),
                                                       cfg.nEvalSamples,
                                                       DeltaMode::FaceDimension, candSeed,
                                                       cfg.workers);
      if (cand.mean < cur.mean - cur.standardError) {
        w = candidate;
        traj.steps.push_back({iter, w, cur.mean, cur.standardError, cand.mean,
                              cand.standardError, tau, true});
        accepted = true;
        break;
      }
      tau *= 0.5;
      ++halvings;
    }
    if (!accepted) {
      traj.termination = "min-step";
      break;
    }
  }
  if (traj.termination.empty()) traj.termination = "max-iterations";
  traj.finalW = w;
  return traj;
}

}  // namespace wl1
