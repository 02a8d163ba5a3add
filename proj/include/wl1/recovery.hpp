/**
 * End-to-end weighted basis-pursuit recovery experiments: Gaussian
 * measurement ensembles, the equality-constrained weighted l1 solve, the
 * success criterion, and phase-transition sweeps over the number of
 * measurements.
 */
#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "wl1/distributions.hpp"
#include "wl1/lp.hpp"
#include "wl1/parallel.hpp"
#include "wl1/rng.hpp"
#include "wl1/weights.hpp"

namespace wl1 {

struct MeasurementEnsemble {
  Eigen::MatrixXd A;
  int m = 0, d = 0;
  std::uint64_t seed = 0;
};

/// i.i.d. N(0,1) entries, filled row-major from the seeded stream.
inline MeasurementEnsemble sampleGaussianMatrix(int m, int d, std::uint64_t seed) {
  if (m < 1 || d < 1) throw std::invalid_argument("sampleGaussianMatrix: m, d must be >= 1");
  MeasurementEnsemble ensemble{Eigen::MatrixXd(m, d), m, d, seed};
  Rng rng(seed);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < d; ++j) ensemble.A(i, j) = rng.normal();
  return ensemble;
}

struct RecoveryOutcome {
  Eigen::VectorXd xHat;
  double primalObjective = 0.0;
  double equalityResidual = 0.0;
  double stationarityResidual = 0.0;
  double complementarityResidual = 0.0;
  LpStatus status = LpStatus::NumericalFailure;
  bool solved = false;
  bool success = false;
  double relErr = 0.0;
};

inline RecoveryOutcome solveWeightedBP(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                                       const WeightVector& w, double tol = 1e-8) {
  const LpResult lp = solveBasisPursuitLp(A, y, w, tol);
  RecoveryOutcome outcome;
  outcome.xHat = lp.x;
  outcome.primalObjective = lp.objective;
  outcome.equalityResidual = lp.equalityResidual;
  outcome.stationarityResidual = lp.stationarityResidual;
  outcome.complementarityResidual = lp.complementarityResidual;
  outcome.status = lp.status;
  outcome.solved = lp.status == LpStatus::Optimal;
  return outcome;
}

/// Success iff ||xHat - x0||_2 / max(1, ||x0||_2) <= tol (inclusive).
inline bool isSuccess(const Eigen::VectorXd& xHat, const Eigen::VectorXd& x0,
                      double tol = 1e-5) {
  if (xHat.size() != x0.size()) throw std::invalid_argument("isSuccess: size mismatch");
  const double relErr = (xHat - x0).norm() / std::max(1.0, x0.norm());
  return relErr <= tol;
}

enum class MagnitudeModel {
  GaussianSigned,  // |N(0,1)| magnitudes with independent random signs
  Ones             // all entries 1 on the support
};

/// Signal with the given support; draws consume `rng` only for the Gaussian
/// model.
inline Eigen::VectorXd sampleSignal(int d, const std::vector<int>& support,
                                    MagnitudeModel model, Rng& rng) {
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(d);
  for (int i : support) {
    if (model == MagnitudeModel::GaussianSigned) {
      const double magnitude = std::abs(rng.normal());
      x0[i] = rng.bernoulli(0.5) ? magnitude : -magnitude;
    } else {
      x0[i] = 1.0;
    }
  }
  return x0;
}

struct PhasePoint {
  int m = 0;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  std::uint64_t solveFailures = 0;  // counted as recovery failures
  double frequency = 0.0;
};

struct PhaseOptions {
  MagnitudeModel magnitudes = MagnitudeModel::GaussianSigned;
  double successTol = 1e-5;
  double lpTol = 1e-8;
  int workers = 1;
};

/// For each m: fresh (x0, A) pairs, solve, count successes. Per-trial
/// substreams are derived from (seed, m, trial).
inline std::vector<PhasePoint> phaseTransitionCurve(const SupportDistribution& dist,
                                                    const WeightVector& w,
                                                    const std::vector<int>& mGrid,
                                                    std::uint64_t trialsPerM, std::uint64_t seed,
                                                    const PhaseOptions& opts = {}) {
  const int d = w.dim();
  if (trialsPerM < 1) throw std::invalid_argument("phaseTransitionCurve: trials must be >= 1");
  for (int m : mGrid)
    if (m < 1 || m > d) throw std::invalid_argument("phaseTransitionCurve: m outside 1..d");

  std::vector<PhasePoint> curve;
  curve.reserve(mGrid.size());
  for (int m : mGrid) {
    const std::uint64_t stream = deriveStream(seed, "phase", static_cast<std::uint64_t>(m));
    struct Tally {
      std::uint64_t successes = 0, solveFailures = 0;
    };
    auto parts = runPartitioned(trialsPerM, opts.workers, Tally{}, [&](Tally& tally,
                                                                       std::uint64_t trial) {
      Rng rng = Rng::forSample(seed, stream, trial);
      const auto support = sampleSupport(dist, rng);
      const Eigen::VectorXd x0 = sampleSignal(d, support, opts.magnitudes, rng);
      Eigen::MatrixXd A(m, d);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < d; ++j) A(i, j) = rng.normal();
      const RecoveryOutcome outcome = solveWeightedBP(A, A * x0, w, opts.lpTol);
      if (!outcome.solved) {
        ++tally.solveFailures;
        return;
      }
      if (isSuccess(outcome.xHat, x0, opts.successTol)) ++tally.successes;
    });
    PhasePoint point;
    point.m = m;
    point.trials = trialsPerM;
    for (const auto& part : parts) {
      point.successes += part.successes;
      point.solveFailures += part.solveFailures;
    }
    point.frequency = static_cast<double>(point.successes) / static_cast<double>(trialsPerM);
    curve.push_back(point);
  }
  return curve;
}

}  // namespace wl1
