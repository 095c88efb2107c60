#pragma once

// Seeded regression experiments: synthesize an improper process on a grid,
// add improper noise, train on a random subset of nodes and score the widely
// and/or strictly complex GPR means against the noise-free process.

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "wcgpr/noise.hpp"
#include "wcgpr/synthesis.hpp"

namespace wcgpr {

enum class PredictorSelection { kWidely, kProper, kBoth };

PredictorSelection parse_predictor(const std::string& name);
std::string to_string(PredictorSelection p);

struct ExperimentConfig {
  WidelyLinearFilterModel filter;
  double noise_sigma = 0.0165;
  std::complex<double> rho = std::polar(0.8, 1.5 * std::numbers::pi);
  Eigen::Index n = 500;
  std::vector<Eigen::Index> sweep;
  int trials = 1;
  std::uint64_t seed = 1;
  PredictorSelection predictor = PredictorSelection::kWidely;
  std::string output;
  /// Kernel descriptor; the filter-induced pair of `filter` when absent.
  std::optional<nlohmann::json> kernel;

  NoiseModel noise() const { return {noise_sigma * noise_sigma, rho}; }
  void validate() const;

  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

ExperimentConfig load_config(const std::string& path);

/// Raised when a stage of an experiment fails; the message names the stage.
class ExperimentError : public std::runtime_error {
 public:
  ExperimentError(std::string stage, const std::string& detail);
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct TrialRow {
  int trial = 0;
  std::string predictor;
  Eigen::Index n = 0;
  double mse = 0.0;
  double mse_db = 0.0;
};

struct SummaryRow {
  std::string predictor;
  Eigen::Index n = 0;
  double mean_mse_db = 0.0;  // average of the per-trial dB values
  double mean_mse = 0.0;
  int trials = 0;
};

struct ExperimentReport {
  nlohmann::json config;
  std::vector<TrialRow> rows;
  std::vector<SummaryRow> summary;

  const SummaryRow* find(const std::string& predictor, Eigen::Index n) const;
};

inline constexpr double kMseDbFloor = -300.0;

double mean_squared_error(const Eigen::VectorXcd& estimate, const Eigen::VectorXcd& truth);
/// 10 log10 of the mean squared error; kMseDbFloor below 1e-30.
double mse_db(const Eigen::VectorXcd& estimate, const Eigen::VectorXcd& truth);
double to_db(double mse);

/// Seed of trial `trial` derived from the experiment seed.
std::uint64_t trial_seed(std::uint64_t seed, int trial);

/// One training size (config.n).
ExperimentReport run_single(const ExperimentConfig& config);
/// Every size in config.sweep. Within a trial all sizes and predictors share
/// the sample function, the noise and a nested prefix of one random
/// permutation of the grid nodes.
ExperimentReport run_sweep(const ExperimentConfig& config);

/// Columns trial,predictor,n,mse,mse_db.
void write_csv(std::ostream& out, const ExperimentReport& report);
void write_summary(std::ostream& out, const ExperimentReport& report);

}  // namespace wcgpr
