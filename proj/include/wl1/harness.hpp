/**
 * Experiment orchestration shared by the CLI and the test suites. Each
 * command reads an ExperimentConfig, runs the corresponding estimator or
 * sweep, and writes CSV files whose first line records the configuration
 * hash, the effective seed and worker count, and the code version. All
 * randomness flows from the single master seed through named substreams, so
 * a rerun with identical (config, seed, workers) reproduces every file byte
 * for byte.
 *
 * Commands and outputs:
 *   weights    -> weights.csv                (index,beta,lambda)
 *   volumes    -> volumes.csv                (k,count,nu_bar,t_bar,h_bar,ci)
 *   phase      -> phase.csv, predicted.csv   (m,trials,successes,frequency / m,predicted)
 *   descend    -> trajectory.csv, weights.csv(index,weight)
 *   histogram  -> deltahist.csv              (sample,k,delta,stderr,support)
 */
#pragma once

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "wl1/config.hpp"
#include "wl1/csv.hpp"
#include "wl1/distributions.hpp"
#include "wl1/estimators.hpp"
#include "wl1/gradient.hpp"
#include "wl1/recovery.hpp"
#include "wl1/rng.hpp"
#include "wl1/version.hpp"
#include "wl1/weight_design.hpp"

namespace wl1 {

/// Distribution described by the [dist] section. Mixture supports use
/// 1-based indices, semicolon-separated groups; empirical masks come either
/// inline (semicolon-separated 0/1 strings) or from a file.
inline SupportDistribution distFromConfig(const Config& cfg, int d) {
  const std::string type = cfg.getString("dist.type");
  if (type == "bernoulli") {
    Eigen::VectorXd beta(d);
    const auto values = cfg.getDoubleList("dist.beta");
    if (static_cast<int>(values.size()) != d)
      throw std::runtime_error("dist.beta must list d values");
    for (int i = 0; i < d; ++i) beta[i] = values[i];
    return SupportDistribution::bernoulli(BetaVector(std::move(beta)));
  }
  if (type == "bernoulli-blocks") {
    const int blocks = static_cast<int>(cfg.getInt("dist.blocks"));
    return bernoulliBlocks(d, blocks, cfg.getDoubleList("dist.params"));
  }
  if (type == "mixture") {
    std::vector<std::vector<int>> supports;
    std::stringstream groups(cfg.getString("dist.supports"));
    std::string group;
    while (std::getline(groups, group, ';')) {
      std::vector<int> s;
      for (const auto& token : Config::splitList(group)) s.push_back(std::stoi(token) - 1);
      supports.push_back(std::move(s));
    }
    return SupportDistribution::mixture(d, std::move(supports), cfg.getDoubleList("dist.probs"));
  }
  if (type == "masks") {
    if (cfg.has("dist.path")) return loadMasks(cfg.getString("dist.path"));
    std::vector<std::vector<std::uint8_t>> masks;
    std::stringstream rows(cfg.getString("dist.masks"));
    std::string row;
    while (std::getline(rows, row, ';')) {
      row = Config::trim(row);
      if (row.empty()) continue;
      std::vector<std::uint8_t> mask;
      for (char c : row) {
        if (c != '0' && c != '1') throw std::runtime_error("dist.masks: invalid character");
        mask.push_back(c == '1');
      }
      masks.push_back(std::move(mask));
    }
    return SupportDistribution::empirical(d, std::move(masks));
  }
  throw std::runtime_error("dist.type must be bernoulli | bernoulli-blocks | mixture | masks");
}

/// Inverse of distFromConfig (masks are always inlined).
inline std::string distToConfigText(const SupportDistribution& dist) {
  std::ostringstream out;
  out << "[dist]\n";
  if (const auto* b = std::get_if<IndependentBernoulli>(&dist.model())) {
    out << "type = bernoulli\nbeta = ";
    for (int i = 0; i < dist.dim(); ++i) out << (i ? "," : "") << formatDouble(b->beta[i]);
    out << "\n";
  } else if (const auto* mix = std::get_if<FiniteMixture>(&dist.model())) {
    out << "type = mixture\nsupports = ";
    for (std::size_t s = 0; s < mix->supports.size(); ++s) {
      if (s) out << "; ";
      for (std::size_t i = 0; i < mix->supports[s].size(); ++i)
        out << (i ? " " : "") << mix->supports[s][i] + 1;
    }
    out << "\nprobs = ";
    for (std::size_t s = 0; s < mix->probs.size(); ++s)
      out << (s ? "," : "") << formatDouble(mix->probs[s]);
    out << "\n";
  } else {
    const auto& emp = std::get<Empirical>(dist.model());
    out << "type = masks\nmasks = ";
    for (std::size_t r = 0; r < emp.masks.size(); ++r) {
      if (r) out << ";";
      for (auto bit : emp.masks[r]) out << (bit ? '1' : '0');
    }
    out << "\n";
  }
  return out.str();
}

struct ExperimentConfig {
  Config raw;
  int d = 0;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string outDir = ".";
  double successTol = 1e-5;
  double lpTol = 1e-8;

  std::string weightSource = "unit";  // unit | theorem | file | descend
  std::string weightsPath;
  double weightTol = 1e-10;

  std::vector<int> mGrid;
  std::uint64_t trialsPerM = 100;
  MagnitudeModel magnitudes = MagnitudeModel::GaussianSigned;

  std::uint64_t volSupports = 1000, volPoints = 100;
  std::uint64_t histSupports = 1000, histPoints = 100;

  DescentConfig descent;
};

inline ExperimentConfig experimentFromConfig(Config cfg) {
  ExperimentConfig ec;
  ec.raw = std::move(cfg);
  const Config& c = ec.raw;
  ec.d = static_cast<int>(c.getInt("d"));
  if (ec.d < 1) throw std::runtime_error("config: d must be >= 1");
  ec.seed = c.getU64("seed", 0);
  ec.workers = static_cast<int>(c.getInt("workers", 1));
  ec.outDir = c.getString("out", ".");
  ec.successTol = c.getDouble("tolerances.success_tol", 1e-5);
  ec.lpTol = c.getDouble("tolerances.lp_tol", 1e-8);

  ec.weightSource = c.getString("weights.source", "unit");
  ec.weightsPath = c.getString("weights.path", "");
  ec.weightTol = c.getDouble("weights.tol", 1e-10);

  if (c.has("phase.m_grid")) ec.mGrid = c.getIntList("phase.m_grid");
  ec.trialsPerM = c.getU64("phase.trials_per_m", 100);
  const std::string magnitudes = c.getString("phase.magnitudes", "gaussian");
  if (magnitudes == "gaussian") {
    ec.magnitudes = MagnitudeModel::GaussianSigned;
  } else if (magnitudes == "ones") {
    ec.magnitudes = MagnitudeModel::Ones;
  } else {
    throw std::runtime_error("phase.magnitudes must be gaussian | ones");
  }

  ec.volSupports = c.getU64("volumes.n_supports", 1000);
  ec.volPoints = c.getU64("volumes.n_points", 100);
  ec.histSupports = c.getU64("histogram.n_supports", 1000);
  ec.histPoints = c.getU64("histogram.n_points", 100);

  ec.descent.nGradSamples = c.getU64("descend.n_grad_samples", 20000);
  ec.descent.nEvalSamples = c.getU64("descend.n_eval_samples", 20000);
  ec.descent.initialStep = c.getDouble("descend.initial_step", 1.0);
  ec.descent.maxIters = static_cast<int>(c.getInt("descend.max_iters", 20));
  ec.descent.minStep = c.getDouble("descend.min_step", 1e-4);
  ec.descent.commonRandomNumbers = c.getInt("descend.common_random_numbers", 1) != 0;
  return ec;
}

inline ExperimentConfig loadExperiment(const std::string& path) {
  return experimentFromConfig(Config::fromFile(path));
}

namespace detail {

inline std::string headerLine(const ExperimentConfig& cfg) {
  char hashHex[20];
  std::snprintf(hashHex, sizeof(hashHex), "%016llx",
                static_cast<unsigned long long>(cfg.raw.hash()));
  std::ostringstream out;
  out << "config_hash=" << hashHex << " seed=" << cfg.seed << " workers=" << cfg.workers
      << " version=" << kVersion;
  return out.str();
}

inline std::string outPath(const ExperimentConfig& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.outDir);
  return (std::filesystem::path(cfg.outDir) / name).string();
}

inline WeightVector weightsFromFile(const std::string& path, int d) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("weights: cannot open " + path);
  Eigen::VectorXd w(d);
  double value;
  int i = 0;
  while (in >> value) {
    if (i >= d) throw std::runtime_error("weights: too many values in " + path);
    w[i++] = value;
  }
  if (i != d) throw std::runtime_error("weights: expected " + std::to_string(d) + " values");
  return WeightVector(std::move(w));
}

}  // namespace detail

/// Weights the experiment runs with, per [weights] source. For "descend" the
/// descent starts from unit weights under the config's descent parameters.
inline WeightVector resolveWeights(const ExperimentConfig& cfg, const SupportDistribution& dist) {
  if (cfg.weightSource == "unit") return WeightVector::ones(cfg.d);
  if (cfg.weightSource == "theorem") {
    int clipped = 0;
    const BetaVector beta = betaOf(dist, &clipped);
    if (clipped > 0)
      std::cerr << "warning: clipped " << clipped << " beta entries into (0,1)\n";
    return weightsFromBeta(beta, cfg.weightTol);
  }
  if (cfg.weightSource == "file") return detail::weightsFromFile(cfg.weightsPath, cfg.d);
  if (cfg.weightSource == "descend") {
    DescentConfig dc = cfg.descent;
    dc.seed = deriveStream(cfg.seed, "descend");
    dc.workers = cfg.workers;
    return WeightVector(descend(dist, WeightVector::ones(cfg.d), dc).finalW);
  }
  throw std::runtime_error("weights.source must be unit | theorem | file | descend");
}

inline int cmdWeights(const ExperimentConfig& cfg) {
  const SupportDistribution dist = distFromConfig(cfg.raw, cfg.d);
  int clipped = 0;
  const BetaVector beta = betaOf(dist, &clipped);
  if (clipped > 0) std::cerr << "warning: clipped " << clipped << " beta entries into (0,1)\n";
  CsvWriter csv(detail::outPath(cfg, "weights.csv"));
  csv.comment(detail::headerLine(cfg));
  csv.row({"index", "beta", "lambda"});
  for (int i = 0; i < cfg.d; ++i)
    csv.row({CsvWriter::cell(i + 1), CsvWriter::cell(beta[i]),
             CsvWriter::cell(solveLambda(beta[i], cfg.weightTol))});
  return 0;
}

inline int cmdVolumes(const ExperimentConfig& cfg) {
  const SupportDistribution dist = distFromConfig(cfg.raw, cfg.d);
  const WeightVector w = resolveWeights(cfg, dist);
  const VolumeEstimate est = estimateIntrinsicVolumes(dist, w, cfg.volSupports, cfg.volPoints,
                                                      cfg.seed, cfg.workers);
  CsvWriter csv(detail::outPath(cfg, "volumes.csv"));
  csv.comment(detail::headerLine(cfg));
  csv.row({"k", "count", "nu_bar", "t_bar", "h_bar", "ci"});
  for (int k = 0; k <= cfg.d; ++k)
    csv.row({CsvWriter::cell(k), CsvWriter::cell(est.counts[k]), CsvWriter::cell(est.nuBar[k]),
             CsvWriter::cell(est.tBar[k]), CsvWriter::cell(est.hBar[k]),
             CsvWriter::cell(est.ciHalfWidth[k])});
  return 0;
}

inline int cmdPhase(const ExperimentConfig& cfg) {
  if (cfg.mGrid.empty()) throw std::runtime_error("phase: phase.m_grid is required");
  const SupportDistribution dist = distFromConfig(cfg.raw, cfg.d);
  const WeightVector w = resolveWeights(cfg, dist);
  PhaseOptions opts;
  opts.magnitudes = cfg.magnitudes;
  opts.successTol = cfg.successTol;
  opts.lpTol = cfg.lpTol;
  opts.workers = cfg.workers;
  const auto curve = phaseTransitionCurve(dist, w, cfg.mGrid, cfg.trialsPerM, cfg.seed, opts);

  CsvWriter csv(detail::outPath(cfg, "phase.csv"));
  csv.comment(detail::headerLine(cfg));
  csv.row({"m", "trials", "successes", "frequency"});
  std::uint64_t solveFailures = 0;
  for (const auto& point : curve) {
    csv.row({CsvWriter::cell(point.m), CsvWriter::cell(point.trials),
             CsvWriter::cell(point.successes), CsvWriter::cell(point.frequency)});
    solveFailures += point.solveFailures;
  }
  if (solveFailures > 0)
    std::cerr << "warning: " << solveFailures << " LP solves did not converge (counted as failures)\n";

  const VolumeEstimate est = estimateIntrinsicVolumes(dist, w, cfg.volSupports, cfg.volPoints,
                                                      cfg.seed, cfg.workers);
  CsvWriter predicted(detail::outPath(cfg, "predicted.csv"));
  predicted.comment(detail::headerLine(cfg));
  predicted.row({"m", "predicted"});
  for (int m : cfg.mGrid)
    predicted.row({CsvWriter::cell(m), CsvWriter::cell(1.0 - failureProbability(est, m))});
  return 0;
}

inline int cmdDescend(const ExperimentConfig& cfg) {
  const SupportDistribution dist = distFromConfig(cfg.raw, cfg.d);
  WeightVector w0 = cfg.weightSource == "descend" ? WeightVector::ones(cfg.d)
                                                  : resolveWeights(cfg, dist);
  DescentConfig dc = cfg.descent;
  dc.seed = deriveStream(cfg.seed, "descend");
  dc.workers = cfg.workers;
  const DescentTrajectory traj = descend(dist, w0, dc);

  CsvWriter csv(detail::outPath(cfg, "trajectory.csv"));
  csv.comment(detail::headerLine(cfg));
  csv.comment("termination=" + traj.termination);
  {
    std::vector<std::string> header = {"iter",        "step",     "delta_before", "se_before",
                                       "delta_after", "se_after", "accepted"};
    for (int i = 0; i < cfg.d; ++i) header.push_back("w" + std::to_string(i + 1));
    bool first = true;
    std::ostringstream line;
    for (const auto& cell : header) {
      if (!first) line << ',';
      line << cell;
      first = false;
    }
    csv.row({line.str()});
  }
  for (const auto& step : traj.steps) {
    std::ostringstream line;
    line << step.iter << ',' << formatDouble(step.step) << ',' << formatDouble(step.deltaBefore)
         << ',' << formatDouble(step.seBefore) << ',' << formatDouble(step.deltaAfter) << ','
         << formatDouble(step.seAfter) << ',' << (step.accepted ? 1 : 0);
    for (int i = 0; i < cfg.d; ++i) line << ',' << formatDouble(step.w[i]);
    csv.row({line.str()});
  }

  CsvWriter weights(detail::outPath(cfg, "weights.csv"));
  weights.comment(detail::headerLine(cfg));
  weights.row({"index", "weight"});
  for (int i = 0; i < cfg.d; ++i)
    weights.row({CsvWriter::cell(i + 1), CsvWriter::cell(traj.finalW[i])});
  return 0;
}

inline int cmdHistogram(const ExperimentConfig& cfg) {
  const SupportDistribution dist = distFromConfig(cfg.raw, cfg.d);
  const WeightVector w = resolveWeights(cfg, dist);
  const auto hist = perSupportDeltaHistogram(dist, w, cfg.histSupports, cfg.histPoints, cfg.seed,
                                             cfg.workers);
  CsvWriter csv(detail::outPath(cfg, "deltahist.csv"));
  csv.comment(detail::headerLine(cfg));
  csv.row({"sample", "k", "delta", "stderr", "support"});
  for (std::size_t s = 0; s < hist.size(); ++s) {
    std::ostringstream support;
    for (std::size_t i = 0; i < hist[s].support.size(); ++i)
      support << (i ? ":" : "") << hist[s].support[i] + 1;
    csv.row({CsvWriter::cell(static_cast<std::uint64_t>(s)),
             CsvWriter::cell(static_cast<int>(hist[s].support.size())),
             CsvWriter::cell(hist[s].mean), CsvWriter::cell(hist[s].standardError),
             support.str()});
  }
  return 0;
}

}  // namespace wl1
