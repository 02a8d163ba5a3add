#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>

#include "support/small_lp.hpp"
#include "wl1/estimators.hpp"
#include "wl1/recovery.hpp"

using namespace wl1;

TEST_CASE("sampleGaussianMatrix") {
  SECTION("deterministic given the seed") {
    const auto a = sampleGaussianMatrix(4, 7, 123);
    const auto b = sampleGaussianMatrix(4, 7, 123);
    REQUIRE(a.A == b.A);
    REQUIRE(sampleGaussianMatrix(4, 7, 124).A != a.A);
  }
  SECTION("column means satisfy the CLT") {
    const auto ensemble = sampleGaussianMatrix(100000, 3, 5);
    for (int j = 0; j < 3; ++j)
      REQUIRE(std::abs(ensemble.A.col(j).mean()) < 3.0 / std::sqrt(100000.0));
  }
  SECTION("degenerate size") {
    const auto ensemble = sampleGaussianMatrix(1, 1, 9);
    REQUIRE(ensemble.A.rows() == 1);
    REQUIRE(ensemble.A.cols() == 1);
  }
}

TEST_CASE("isSuccess conventions") {
  Eigen::VectorXd x0(2);
  x0 << 1.0, 0.0;
  REQUIRE(isSuccess(x0, x0));
  Eigen::VectorXd off = x0;
  off[0] += 1e-3;
  REQUIRE_FALSE(isSuccess(off, x0));
  Eigen::VectorXd boundary = x0;
  boundary[0] += 1e-5;  // relErr exactly 1e-5 with ||x0|| = 1
  REQUIRE(isSuccess(boundary, x0));
}

TEST_CASE("solveWeightedBP fills the outcome") {
  const auto ensemble = sampleGaussianMatrix(3, 6, 17);
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(6);
  x0[1] = 2.0;
  const RecoveryOutcome outcome = solveWeightedBP(ensemble.A, ensemble.A * x0,
                                                  WeightVector::ones(6));
  REQUIRE(outcome.solved);
  REQUIRE(outcome.equalityResidual <= 1e-8);
  REQUIRE(outcome.primalObjective == Catch::Approx(2.0).margin(1e-6));
  REQUIRE(isSuccess(outcome.xHat, x0));
}

TEST_CASE("full measurement count always recovers") {
  const auto dist = SupportDistribution::mixture(3, {{0, 2}}, {1.0});
  const auto curve = phaseTransitionCurve(dist, WeightVector::ones(3), {3}, 50, 21);
  REQUIRE(curve.size() == 1);
  REQUIRE(curve[0].frequency == 1.0);
  REQUIRE(curve[0].solveFailures == 0);
}

TEST_CASE("wedge recovery frequency is one half at m = 1") {
  const auto dist = SupportDistribution::mixture(2, {{0}}, {1.0});
  const auto curve = phaseTransitionCurve(dist, WeightVector::ones(2), {1}, 400, 22);
  // kinematic formula: success probability exactly 1 - 2 h_2 = 1/2
  REQUIRE(std::abs(curve[0].frequency - 0.5) < 3.0 * std::sqrt(0.25 / 400));
}

TEST_CASE("phase curve is deterministic and worker-invariant") {
  const auto dist = bernoulliBlocks(6, 2, {0.5, 0.2});
  PhaseOptions opts;
  const auto a = phaseTransitionCurve(dist, WeightVector::ones(6), {2, 4}, 40, 7, opts);
  const auto b = phaseTransitionCurve(dist, WeightVector::ones(6), {2, 4}, 40, 7, opts);
  for (std::size_t i = 0; i < a.size(); ++i) REQUIRE(a[i].successes == b[i].successes);
  opts.workers = 3;
  const auto c = phaseTransitionCurve(dist, WeightVector::ones(6), {2, 4}, 40, 7, opts);
  for (std::size_t i = 0; i < a.size(); ++i) REQUIRE(a[i].successes == c[i].successes);
}

TEST_CASE("all-ones magnitudes recover the same supports") {
  const auto dist = bernoulliBlocks(6, 2, {0.4, 0.2});
  PhaseOptions opts;
  opts.magnitudes = MagnitudeModel::Ones;
  const auto curve = phaseTransitionCurve(dist, WeightVector::ones(6), {6}, 30, 8, opts);
  REQUIRE(curve[0].frequency == 1.0);
}

TEST_CASE("empirical frequency matches the kinematic prediction") {
  // d = 4 mixture; compare LP frequency against 1 - 2 hBar_{m+1}
  const auto dist = SupportDistribution::mixture(4, {{0}, {1, 3}}, {0.5, 0.5});
  const WeightVector w = WeightVector::ones(4);
  const VolumeEstimate vol = estimateIntrinsicVolumes(dist, w, 2000, 50, 31);
  const std::uint64_t trials = 400;
  const auto curve = phaseTransitionCurve(dist, w, {1, 2, 3}, trials, 32);
  for (const auto& point : curve) {
    const double predicted = 1.0 - failureProbability(vol, point.m);
    const double seFreq = std::sqrt(0.25 / static_cast<double>(trials));
    const double seVol = 1.96 / std::sqrt(static_cast<double>(vol.n));
    CAPTURE(point.m, point.frequency, predicted);
    REQUIRE(std::abs(point.frequency - predicted) <= 3.0 * (seFreq + 2.0 * seVol));
  }
}

TEST_CASE("LP success agrees with the descent-cone kernel check") {
  Rng rng(55);
  const int trials = 500;
  int agree = 0;
  for (int trial = 0; trial < trials; ++trial) {
    const int d = 3 + static_cast<int>(rng.uniform() * 2);  // 3 or 4
    const int m = 1 + static_cast<int>(rng.uniform() * (d - 1));
    const int k = 1 + static_cast<int>(rng.uniform() * (d - 1));
    Eigen::VectorXd w(d);
    for (int i = 0; i < d; ++i) w[i] = 0.3 + 2.0 * rng.uniform();
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(d);
    for (int i = 0; i < k; ++i) {
      const double magnitude = 0.5 + rng.uniform();
      x0[i] = rng.bernoulli(0.5) ? magnitude : -magnitude;
    }
    Eigen::MatrixXd A(m, d);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < d; ++j) A(i, j) = rng.normal();

    const RecoveryOutcome outcome = solveWeightedBP(A, A * x0, WeightVector(w));
    if (!outcome.solved) continue;
    const bool lpSuccess = isSuccess(outcome.xHat, x0);
    const double descentValue = oracle::descentFeasibilityValue(A, x0, w);
    const bool coneSaysSuccess = descentValue >= -1e-7;
    agree += (lpSuccess == coneSaysSuccess);
  }
  REQUIRE(agree >= static_cast<int>(0.99 * trials));
}
