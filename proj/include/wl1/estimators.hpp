/**
 * Monte Carlo estimators for the geometry of random descent cones: expected
 * statistical dimension, expected intrinsic volumes with tail and half-tail
 * functionals, failure probabilities, and per-support concentration
 * diagnostics.
 *
 * Sampling follows the face-dimension identification of the closed-form
 * projection: a Gaussian point needs only its z0 and z_J coefficients, since
 * the face dimension never depends on the lineality part. Supports of size 0
 * and d bypass the cone construction — their cones are {0} and a halfspace,
 * with intrinsic volumes known exactly.
 */
#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "wl1/cone.hpp"
#include "wl1/distributions.hpp"
#include "wl1/parallel.hpp"
#include "wl1/rng.hpp"
#include "wl1/weights.hpp"

namespace wl1 {

enum class DeltaMode { FaceDimension, SquaredNorm };

struct DeltaEstimate {
  double mean = 0.0;
  double standardError = 0.0;
  std::uint64_t n = 0;
  DeltaMode mode = DeltaMode::FaceDimension;
};

struct VolumeEstimate {
  std::vector<std::uint64_t> counts;  // face-dimension histogram, size d+1
  std::uint64_t n = 0;
  Eigen::VectorXd nuBar;        // size d+1
  Eigen::VectorXd tBar;         // size d+2, tBar[k] = sum_{j>=k} nuBar[j]
  Eigen::VectorXd hBar;         // size d+2, every-other tail
  Eigen::VectorXd ciHalfWidth;  // size d+1, NaN where counts < 10

  int dim() const { return static_cast<int>(counts.size()) - 1; }
};

namespace detail {

/// Face dimension of the projection of a Gaussian point onto D(I, w),
/// drawing only the needed z0 and z_J coefficients from `rng`.
inline int faceDimensionDraw(const std::vector<int>& support, const WeightVector& w, Rng& rng) {
  const int d = w.dim();
  const int k = static_cast<int>(support.size());
  if (k == 0) return 0;
  if (k == d) return rng.bernoulli(0.5) ? d : d - 1;  // halfspace: nu_d = nu_{d-1} = 1/2
  ConeSpec cone = ConeSpec::make(d, support, w);
  ConeCoordinates coords;
  coords.z0 = rng.normal();
  coords.zJ.resize(d - k);
  for (int p = 0; p < d - k; ++p) coords.zJ[p] = rng.normal();
  return project(cone, coords).faceDim;
}

/// Squared-norm sample of delta: the off-lineality part of ||pi||^2 plus the
/// exact k-1 lineality expectation (variance reduction).
inline double squaredNormDraw(const std::vector<int>& support, const WeightVector& w, Rng& rng) {
  const int d = w.dim();
  const int k = static_cast<int>(support.size());
  if (k == 0) return 0.0;
  if (k == d) return d - 0.5;  // halfspace delta, exactly
  ConeSpec cone = ConeSpec::make(d, support, w);
  ConeCoordinates coords;
  coords.z0 = rng.normal();
  coords.zJ.resize(d - k);
  for (int p = 0; p < d - k; ++p) coords.zJ[p] = rng.normal();
  return project(cone, coords).sqNorm + (k - 1);
}

struct MomentAccumulator {
  double sum = 0.0;
  double sumSq = 0.0;
  std::uint64_t n = 0;
  void add(double v) {
    sum += v;
    sumSq += v * v;
    ++n;
  }
};

inline DeltaEstimate finishMoments(const std::vector<MomentAccumulator>& parts, DeltaMode mode) {
  MomentAccumulator total;
  for (const auto& p : parts) {
    total.sum += p.sum;
    total.sumSq += p.sumSq;
    total.n += p.n;
  }
  DeltaEstimate est;
  est.n = total.n;
  est.mode = mode;
  est.mean = total.sum / static_cast<double>(total.n);
  if (total.n > 1) {
    const double variance =
        std::max(0.0, (total.sumSq - total.sum * total.sum / static_cast<double>(total.n)) /
                          static_cast<double>(total.n - 1));
    est.standardError = std::sqrt(variance / static_cast<double>(total.n));
  }
  return est;
}

}  // namespace detail

inline int sampleFaceDimension(const SupportDistribution& dist, const WeightVector& w, Rng& rng) {
  return detail::faceDimensionDraw(sampleSupport(dist, rng), w, rng);
}

inline DeltaEstimate estimateExpectedDelta(const SupportDistribution& dist, const WeightVector& w,
                                           std::uint64_t n, DeltaMode mode, std::uint64_t seed,
                                           int workers = 1) {
  if (n < 1) throw std::invalid_argument("estimateExpectedDelta: n must be >= 1");
  const std::uint64_t stream = streamTag("delta");
  auto parts = runPartitioned(n, workers, detail::MomentAccumulator{},
                              [&](detail::MomentAccumulator& acc, std::uint64_t i) {
                                Rng rng = Rng::forSample(seed, stream, i);
                                const auto support = sampleSupport(dist, rng);
                                acc.add(mode == DeltaMode::FaceDimension
                                            ? detail::faceDimensionDraw(support, w, rng)
                                            : detail::squaredNormDraw(support, w, rng));
                              });
  return detail::finishMoments(parts, mode);
}

inline VolumeEstimate volumeEstimateFromCounts(std::vector<std::uint64_t> counts) {
  VolumeEstimate est;
  est.counts = std::move(counts);
  const int d = est.dim();
  est.n = 0;
  for (auto c : est.counts) est.n += c;
  const double n = static_cast<double>(est.n);
  est.nuBar.resize(d + 1);
  est.ciHalfWidth.resize(d + 1);
  for (int k = 0; k <= d; ++k) {
    const double p = est.counts[k] / n;
    est.nuBar[k] = p;
    est.ciHalfWidth[k] = est.counts[k] >= 10
                             ? 1.96 * std::sqrt(p * (1.0 - p) / n)
                             : std::numeric_limits<double>::quiet_NaN();
  }
  est.tBar.setZero(d + 2);
  est.hBar.setZero(d + 2);
  for (int k = d; k >= 0; --k) {
    // integer suffix sums, divided once
    std::uint64_t tail = 0, half = 0;
    for (int j = k; j <= d; ++j) {
      tail += est.counts[j];
      if ((j - k) % 2 == 0) half += est.counts[j];
    }
    est.tBar[k] = tail / n;
    est.hBar[k] = half / n;
  }
  return est;
}

/// Nested protocol: nSupports supports, nPointsPerSupport Gaussian points
/// each; the face-dimension histogram estimates the expected intrinsic
/// volumes of the random descent cone.
inline VolumeEstimate estimateIntrinsicVolumes(const SupportDistribution& dist,
                                               const WeightVector& w, std::uint64_t nSupports,
                                               std::uint64_t nPointsPerSupport, std::uint64_t seed,
                                               int workers = 1) {
  if (nSupports < 1 || nPointsPerSupport < 1)
    throw std::invalid_argument("estimateIntrinsicVolumes: sample counts must be >= 1");
  const int d = w.dim();
  const std::uint64_t stream = streamTag("volumes");
  using Counts = std::vector<std::uint64_t>;
  auto parts = runPartitioned(nSupports, workers, Counts(d + 1, 0),
                              [&](Counts& counts, std::uint64_t s) {
                                Rng rng = Rng::forSample(seed, stream, s);
                                const auto support = sampleSupport(dist, rng);
                                for (std::uint64_t p = 0; p < nPointsPerSupport; ++p)
                                  ++counts[detail::faceDimensionDraw(support, w, rng)];
                              });
  Counts total(d + 1, 0);
  for (const auto& part : parts)
    for (int k = 0; k <= d; ++k) total[k] += part[k];
  return volumeEstimateFromCounts(std::move(total));
}

/// Failure probability of recovery with m measurements: 2 * hBar_{m+1}.
inline double failureProbability(const VolumeEstimate& v, int m) {
  if (m < 0 || m > v.dim()) throw std::invalid_argument("failureProbability: m outside 0..d");
  return 2.0 * v.hBar[m + 1];
}

struct SupportDelta {
  std::vector<int> support;
  double mean = 0.0;
  double standardError = 0.0;
};

/// One delta estimate per sampled support (face-dimension mode); feeds the
/// concentration diagnostics behind the phase-transition statements.
inline std::vector<SupportDelta> perSupportDeltaHistogram(const SupportDistribution& dist,
                                                          const WeightVector& w,
                                                          std::uint64_t nSupports,
                                                          std::uint64_t nPointsPerSupport,
                                                          std::uint64_t seed, int workers = 1) {
  if (nSupports < 1 || nPointsPerSupport < 1)
    throw std::invalid_argument("perSupportDeltaHistogram: sample counts must be >= 1");
  const std::uint64_t stream = streamTag("histogram");
  std::vector<SupportDelta> out(nSupports);
  struct Nothing {};
  runPartitioned(nSupports, workers, Nothing{}, [&](Nothing&, std::uint64_t s) {
    Rng rng = Rng::forSample(seed, stream, s);
    SupportDelta& entry = out[s];
    entry.support = sampleSupport(dist, rng);
    detail::MomentAccumulator acc;
    for (std::uint64_t p = 0; p < nPointsPerSupport; ++p)
      acc.add(detail::faceDimensionDraw(entry.support, w, rng));
    entry.mean = acc.sum / static_cast<double>(acc.n);
    if (acc.n > 1) {
      const double variance = std::max(
          0.0, (acc.sumSq - acc.sum * acc.sum / static_cast<double>(acc.n)) /
                   static_cast<double>(acc.n - 1));
      entry.standardError = std::sqrt(variance / static_cast<double>(acc.n));
    }
  });
  return out;
}

/// Hoeffding sample count guaranteeing additive error t with confidence
/// 1 - eps when averaging face dimensions: ceil(log(2/eps) d^2 / (2 t^2)).
inline std::uint64_t hoeffdingSamples(double eps, double t, int d) {
  if (!(eps > 0.0) || !(eps < 1.0)) throw std::invalid_argument("hoeffdingSamples: eps outside (0,1)");
  if (!(t > 0.0)) throw std::invalid_argument("hoeffdingSamples: t must be positive");
  if (d < 1) throw std::invalid_argument("hoeffdingSamples: d must be >= 1");
  return static_cast<std::uint64_t>(
      std::ceil(std::log(2.0 / eps) * static_cast<double>(d) * d / (2.0 * t * t)));
}

/// Phase-transition width constant a_eta = sqrt(8 log(4/eta)).
inline double aEta(double eta) {
  if (!(eta > 0.0) || !(eta < 1.0)) throw std::invalid_argument("aEta: eta outside (0,1)");
  return std::sqrt(8.0 * std::log(4.0 / eta));
}

/// Variant used by the random-support phase transition: sqrt(8 log(8/eta)).
inline double aEtaHalf(double eta) {
  if (!(eta > 0.0) || !(eta < 1.0)) throw std::invalid_argument("aEtaHalf: eta outside (0,1)");
  return std::sqrt(8.0 * std::log(8.0 / eta));
}

}  // namespace wl1
