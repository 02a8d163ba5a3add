/**
 * Generative models of random supports: independent per-coordinate Bernoulli,
 * finite mixtures of explicit supports, and empirical mask datasets.
 *
 * Distributions are immutable after construction; sampling draws from a
 * caller-provided generator so estimators control substreams.
 */
#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "wl1/rng.hpp"
#include "wl1/weights.hpp"

namespace wl1 {

struct IndependentBernoulli {
  BetaVector beta;
};

struct FiniteMixture {
  std::vector<std::vector<int>> supports;  // each sorted, 0-based
  std::vector<double> probs;
  std::vector<double> cumulative;
};

struct Empirical {
  std::vector<std::vector<std::uint8_t>> masks;  // each of length d, entries 0/1
};

class SupportDistribution {
 public:
  using Model = std::variant<IndependentBernoulli, FiniteMixture, Empirical>;

  SupportDistribution(int d, Model model) : d_(d), model_(std::move(model)) { validate(); }

  int dim() const { return d_; }
  const Model& model() const { return model_; }

  static SupportDistribution bernoulli(BetaVector beta) {
    const int d = beta.dim();
    return SupportDistribution(d, IndependentBernoulli{std::move(beta)});
  }

  static SupportDistribution mixture(int d, std::vector<std::vector<int>> supports,
                                     std::vector<double> probs) {
    if (supports.size() != probs.size() || supports.empty())
      throw std::invalid_argument("mixture: supports/probs size mismatch");
    const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-12)
      throw std::invalid_argument("mixture: probabilities must sum to 1");
    for (auto& s : supports) {
      std::sort(s.begin(), s.end());
      if (std::adjacent_find(s.begin(), s.end()) != s.end())
        throw std::invalid_argument("mixture: duplicate index in support");
      for (int i : s)
        if (i < 0 || i >= d) throw std::invalid_argument("mixture: index out of range");
    }
    FiniteMixture mix{std::move(supports), std::move(probs), {}};
    mix.cumulative.resize(mix.probs.size());
    std::partial_sum(mix.probs.begin(), mix.probs.end(), mix.cumulative.begin());
    mix.cumulative.back() = 1.0;
    return SupportDistribution(d, std::move(mix));
  }

  static SupportDistribution empirical(int d, std::vector<std::vector<std::uint8_t>> masks) {
    if (masks.empty()) throw std::invalid_argument("empirical: no masks");
    for (const auto& mask : masks)
      if (static_cast<int>(mask.size()) != d)
        throw std::invalid_argument("empirical: mask length mismatch");
    return SupportDistribution(d, Empirical{std::move(masks)});
  }

 private:
  void validate() const {
    if (d_ < 1) throw std::invalid_argument("SupportDistribution: d must be >= 1");
    if (const auto* b = std::get_if<IndependentBernoulli>(&model_))
      if (b->beta.dim() != d_) throw std::invalid_argument("SupportDistribution: beta dim mismatch");
  }

  int d_;
  Model model_;
};

inline std::vector<int> sampleSupport(const SupportDistribution& dist, Rng& rng) {
  std::vector<int> support;
  if (const auto* b = std::get_if<IndependentBernoulli>(&dist.model())) {
    for (int i = 0; i < dist.dim(); ++i)
      if (rng.bernoulli(b->beta[i])) support.push_back(i);
  } else if (const auto* mix = std::get_if<FiniteMixture>(&dist.model())) {
    support = mix->supports[rng.categorical(mix->cumulative)];
  } else {
    const auto& emp = std::get<Empirical>(dist.model());
    const auto& mask = emp.masks[static_cast<std::size_t>(rng.uniform() * emp.masks.size())];
    for (int i = 0; i < dist.dim(); ++i)
      if (mask[i]) support.push_back(i);
  }
  return support;
}

/// Marginals beta_i = P(i in supp). Exact for Bernoulli and mixtures, a
/// frequency count for empirical masks; values at 0 or 1 are clipped into
/// (0,1) and the clip count is reported through `clippedCount`.
inline BetaVector betaOf(const SupportDistribution& dist, int* clippedCount = nullptr) {
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(dist.dim());
  if (const auto* b = std::get_if<IndependentBernoulli>(&dist.model())) {
    beta = b->beta.values();
  } else if (const auto* mix = std::get_if<FiniteMixture>(&dist.model())) {
    for (std::size_t s = 0; s < mix->supports.size(); ++s)
      for (int i : mix->supports[s]) beta[i] += mix->probs[s];
  } else {
    const auto& emp = std::get<Empirical>(dist.model());
    for (const auto& mask : emp.masks)
      for (int i = 0; i < dist.dim(); ++i) beta[i] += mask[i];
    beta /= static_cast<double>(emp.masks.size());
  }
  return BetaVector::clipped(std::move(beta), clippedCount);
}

/// Independent Bernoulli with block-constant parameters: d/nBlocks contiguous
/// coordinates per block, block b using params[b].
inline SupportDistribution bernoulliBlocks(int d, int nBlocks, const std::vector<double>& params) {
  if (nBlocks < 1 || d % nBlocks != 0)
    throw std::invalid_argument("bernoulliBlocks: nBlocks must divide d");
  if (static_cast<int>(params.size()) != nBlocks)
    throw std::invalid_argument("bernoulliBlocks: params size must equal nBlocks");
  const int blockLen = d / nBlocks;
  Eigen::VectorXd beta(d);
  for (int i = 0; i < d; ++i) beta[i] = params[i / blockLen];
  return SupportDistribution::bernoulli(BetaVector(std::move(beta)));
}

/// Mask file: one sample per line, exactly d characters from {0,1}.
inline SupportDistribution loadMasks(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("loadMasks: cannot open " + path);
  std::vector<std::vector<std::uint8_t>> masks;
  std::string line;
  int lineNo = 0;
  int d = -1;
  while (std::getline(in, line)) {
    ++lineNo;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (d < 0) d = static_cast<int>(line.size());
    if (static_cast<int>(line.size()) != d)
      throw std::runtime_error("loadMasks: line " + std::to_string(lineNo) +
                               ": expected " + std::to_string(d) + " characters");
    std::vector<std::uint8_t> mask(d);
    for (int i = 0; i < d; ++i) {
      if (line[i] == '0') {
        mask[i] = 0;
      } else if (line[i] == '1') {
        mask[i] = 1;
      } else {
        throw std::runtime_error("loadMasks: line " + std::to_string(lineNo) +
                                 ": invalid character '" + line.substr(i, 1) + "'");
      }
    }
    masks.push_back(std::move(mask));
  }
  if (masks.empty()) throw std::runtime_error("loadMasks: " + path + " contains no masks");
  return SupportDistribution::empirical(d, std::move(masks));
}

}  // namespace wl1
