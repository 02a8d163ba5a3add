/// Strong types for the two per-coordinate vectors the library is built
/// around: strictly positive weights and marginal support probabilities.
#pragma once

#include <Eigen/Core>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace wl1 {

class WeightVector {
 public:
  explicit WeightVector(Eigen::VectorXd w) : w_(std::move(w)) {
    if (w_.size() < 1) throw std::invalid_argument("WeightVector: empty");
    for (Eigen::Index i = 0; i < w_.size(); ++i) {
      if (!(w_[i] > 0.0) || !std::isfinite(w_[i]))
        throw std::invalid_argument("WeightVector: entries must be positive and finite");
    }
  }

  static WeightVector ones(int d) { return WeightVector(Eigen::VectorXd::Ones(d)); }

  int dim() const { return static_cast<int>(w_.size()); }
  double operator[](int i) const { return w_[i]; }
  const Eigen::VectorXd& values() const { return w_; }

 private:
  Eigen::VectorXd w_;
};

/// Marginal probabilities beta_i that coordinate i belongs to the random
/// support. The library requires 0 < beta_i < 1; empirical or mixture
/// marginals that hit 0 or 1 exactly are clipped (see `clipped`).
class BetaVector {
 public:
  static constexpr double kClip = 1e-6;

  explicit BetaVector(Eigen::VectorXd beta) : beta_(std::move(beta)) {
    for (Eigen::Index i = 0; i < beta_.size(); ++i) {
      if (!(beta_[i] > 0.0) || !(beta_[i] < 1.0))
        throw std::invalid_argument("BetaVector: entries must lie in (0,1)");
    }
  }

  /// Clips raw marginals into [kClip, 1-kClip]. `clippedCount`, when given,
  /// receives the number of entries that had to be moved.
  static BetaVector clipped(Eigen::VectorXd raw, int* clippedCount = nullptr) {
    int n = 0;
    for (Eigen::Index i = 0; i < raw.size(); ++i) {
      if (raw[i] < kClip) {
        raw[i] = kClip;
        ++n;
      } else if (raw[i] > 1.0 - kClip) {
        raw[i] = 1.0 - kClip;
        ++n;
      }
    }
    if (clippedCount) *clippedCount = n;
    return BetaVector(std::move(raw));
  }

  int dim() const { return static_cast<int>(beta_.size()); }
  double operator[](int i) const { return beta_[i]; }
  const Eigen::VectorXd& values() const { return beta_; }

 private:
  Eigen::VectorXd beta_;
};

}  // namespace wl1
