#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <string>

#include "wl1/distributions.hpp"
#include "wl1/harness.hpp"
#include "wl1/rng.hpp"

using namespace wl1;

namespace {

std::string writeTempFile(const std::string& name, const std::string& content) {
  const std::string path = "/tmp/wl1_test_" + name;
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path;
}

Eigen::VectorXd marginalFrequencies(const SupportDistribution& dist, int n, std::uint64_t seed) {
  Eigen::VectorXd freq = Eigen::VectorXd::Zero(dist.dim());
  for (int i = 0; i < n; ++i) {
    Rng rng = Rng::forSample(seed, streamTag("marginals"), i);
    for (int idx : sampleSupport(dist, rng)) freq[idx] += 1.0;
  }
  return freq / n;
}

}  // namespace

TEST_CASE("bernoulli sampling frequency") {
  const auto dist = SupportDistribution::bernoulli(BetaVector(Eigen::VectorXd::Constant(1, 0.5)));
  const Eigen::VectorXd freq = marginalFrequencies(dist, 20000, 1);
  REQUIRE(std::abs(freq[0] - 0.5) < 3.0 * std::sqrt(0.25 / 20000));
}

TEST_CASE("single-support mixture is a point mass") {
  const auto dist = SupportDistribution::mixture(4, {{1, 2}}, {1.0});
  Rng rng(9);
  for (int i = 0; i < 50; ++i) REQUIRE(sampleSupport(dist, rng) == std::vector<int>{1, 2});
}

TEST_CASE("empirical with two masks splits evenly") {
  const auto dist = SupportDistribution::empirical(2, {{1, 0}, {1, 1}});
  int second = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    Rng rng = Rng::forSample(3, streamTag("emp"), i);
    second += sampleSupport(dist, rng).size() == 2;
  }
  REQUIRE(std::abs(second / double(n) - 0.5) < 3.0 * std::sqrt(0.25 / n));
}

TEST_CASE("betaOf") {
  SECTION("mixture marginals are exact counts") {
    const auto dist = SupportDistribution::mixture(
        4, {{0}, {0, 1}, {0, 1, 2}, {1, 2, 3}}, {0.25, 0.25, 0.25, 0.25});
    const BetaVector beta = betaOf(dist);
    REQUIRE(beta[0] == 0.75);
    REQUIRE(beta[1] == 0.75);
    REQUIRE(beta[2] == 0.5);
    REQUIRE(beta[3] == 0.25);
  }
  SECTION("bernoulli returns its own beta") {
    Eigen::VectorXd b(3);
    b << 0.2, 0.4, 0.6;
    const auto dist = SupportDistribution::bernoulli(BetaVector(b));
    REQUIRE(betaOf(dist).values() == b);
  }
  SECTION("empirical frequencies, clipped at 1") {
    const auto dist = SupportDistribution::empirical(2, {{1, 0}, {1, 1}});
    int clipped = 0;
    const BetaVector beta = betaOf(dist, &clipped);
    REQUIRE(clipped == 1);
    REQUIRE(beta[0] == 1.0 - BetaVector::kClip);
    REQUIRE(beta[1] == 0.5);
  }
}

TEST_CASE("bernoulliBlocks") {
  SECTION("block layout") {
    const auto dist = bernoulliBlocks(4, 2, {0.5, 0.25});
    const BetaVector beta = betaOf(dist);
    REQUIRE(beta[0] == 0.5);
    REQUIRE(beta[1] == 0.5);
    REQUIRE(beta[2] == 0.25);
    REQUIRE(beta[3] == 0.25);
  }
  SECTION("divisibility enforced") { REQUIRE_THROWS(bernoulliBlocks(4, 3, {0.1, 0.2, 0.3})); }
  SECTION("dyadic example dimensions") {
    std::vector<double> params;
    for (int b = 1; b <= 8; ++b) params.push_back(std::pow(2.0, -b));
    const auto dist = bernoulliBlocks(128, 8, params);
    const BetaVector beta = betaOf(dist);
    REQUIRE(beta[0] == 0.5);
    REQUIRE(beta[127] == Catch::Approx(std::pow(2.0, -8)));
  }
}

TEST_CASE("loadMasks") {
  SECTION("two masks") {
    const auto dist = loadMasks(writeTempFile("ok.txt", "10\n11\n"));
    REQUIRE(dist.dim() == 2);
    REQUIRE(std::get<Empirical>(dist.model()).masks.size() == 2);
  }
  SECTION("empty file is an error") {
    REQUIRE_THROWS(loadMasks(writeTempFile("empty.txt", "")));
  }
  SECTION("invalid character reports the line") {
    try {
      loadMasks(writeTempFile("bad.txt", "102\n"));
      FAIL("expected error");
    } catch (const std::runtime_error& e) {
      REQUIRE(std::string(e.what()).find("line 1") != std::string::npos);
    }
  }
  SECTION("length mismatch reports the line") {
    try {
      loadMasks(writeTempFile("short.txt", "10\n110\n"));
      FAIL("expected error");
    } catch (const std::runtime_error& e) {
      REQUIRE(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }
}

TEST_CASE("sampled marginals converge to betaOf for all variants") {
  std::vector<SupportDistribution> dists;
  Eigen::VectorXd b(3);
  b << 0.2, 0.5, 0.8;
  dists.push_back(SupportDistribution::bernoulli(BetaVector(b)));
  dists.push_back(SupportDistribution::mixture(3, {{0}, {1, 2}}, {0.3, 0.7}));
  dists.push_back(SupportDistribution::empirical(3, {{1, 0, 0}, {0, 1, 1}, {1, 1, 0}}));
  const int n = 40000;
  for (const auto& dist : dists) {
    const Eigen::VectorXd freq = marginalFrequencies(dist, n, 17);
    const BetaVector beta = betaOf(dist);
    for (int i = 0; i < dist.dim(); ++i) {
      const double se = std::sqrt(beta[i] * (1.0 - beta[i]) / n);
      REQUIRE(std::abs(freq[i] - beta[i]) < 3.5 * se + 1e-6);
    }
  }
}

TEST_CASE("config round trip for every variant") {
  std::vector<SupportDistribution> dists;
  Eigen::VectorXd b(3);
  b << 0.25, 0.5, 0.125;
  dists.push_back(SupportDistribution::bernoulli(BetaVector(b)));
  dists.push_back(SupportDistribution::mixture(4, {{0, 3}, {1}}, {0.5, 0.5}));
  dists.push_back(SupportDistribution::empirical(2, {{1, 0}, {0, 1}, {1, 1}}));

  for (const auto& dist : dists) {
    const std::string text = "d = " + std::to_string(dist.dim()) + "\n" + distToConfigText(dist);
    const SupportDistribution reloaded = distFromConfig(Config::fromString(text), dist.dim());
    REQUIRE(reloaded.dim() == dist.dim());
    REQUIRE(reloaded.model().index() == dist.model().index());
    if (const auto* orig = std::get_if<IndependentBernoulli>(&dist.model())) {
      REQUIRE(std::get<IndependentBernoulli>(reloaded.model()).beta.values() ==
              orig->beta.values());
    } else if (const auto* orig = std::get_if<FiniteMixture>(&dist.model())) {
      const auto& got = std::get<FiniteMixture>(reloaded.model());
      REQUIRE(got.supports == orig->supports);
      REQUIRE(got.probs == orig->probs);
    } else {
      REQUIRE(std::get<Empirical>(reloaded.model()).masks ==
              std::get<Empirical>(dist.model()).masks);
    }
  }
}
