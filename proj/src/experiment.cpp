#include "wcgpr/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>

#include "rng.hpp"
#include "wcgpr/errors.hpp"
#include "wcgpr/estimators.hpp"
#include "wcgpr/kernels.hpp"

namespace wcgpr {

namespace {

constexpr const char* kWidely = "widely";
constexpr const char* kProper = "proper";

nlohmann::json axis_to_json(const AxisSpec& a) { return {a.min, a.max, a.count}; }

AxisSpec axis_from_json(const nlohmann::json& j) {
  const auto v = j.get<std::vector<double>>();
  if (v.size() != 3) throw StructuralError("grid axes are [min, max, count]");
  return {v[0], v[1], static_cast<Eigen::Index>(v[2])};
}

template <typename F>
auto stage(const char* name, int trial, F&& f) {
  try {
    return f();
  } catch (const ExperimentError&) {
    throw;
  } catch (const std::exception& e) {
    throw ExperimentError(name, "trial " + std::to_string(trial) + ": " + e.what());
  }
}

ExperimentReport run_sizes(const ExperimentConfig& config, const std::vector<Eigen::Index>& sizes) {
  config.validate();
  const GridSpec& grid = config.filter.grid;
  const NoiseModel noise = config.noise();
  const bool want_widely = config.predictor != PredictorSelection::kProper;
  const bool want_proper = config.predictor != PredictorSelection::kWidely;

  const DiscreteFilters filters =
      stage("filters", -1, [&] { return discretize_filters(config.filter); });
  const KernelPair kernel = stage("kernel", -1, [&] {
    return config.kernel ? kernel_from_descriptor(*config.kernel) : filter_induced_kernel(filters);
  });
  const ComplexInputSet all_nodes = ComplexInputSet::from_scalars(grid.nodes());
  const Eigen::Index total = grid.size();

  ExperimentReport report;
  report.config = config.to_json();

  for (int trial = 0; trial < config.trials; ++trial) {
    const std::uint64_t seed = trial_seed(config.seed, trial);
    const Eigen::VectorXcd truth =
        stage("synthesis", trial, [&] { return generate_improper_gp(filters, grid, seed).flattened(); });
    const Eigen::VectorXcd observed =
        truth + stage("noise", trial, [&] { return generate_improper_noise(noise, total, seed); });

    std::vector<Eigen::Index> order(static_cast<std::size_t>(total));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    auto engine = detail::make_engine(seed, detail::kTrainingIndices);
    std::shuffle(order.begin(), order.end(), engine);

    for (Eigen::Index n : sizes) {
      std::vector<Eigen::Index> train(order.begin(), order.begin() + n);
      const ComplexInputSet x = all_nodes.subset(train);
      Eigen::VectorXcd y(n);
      for (Eigen::Index i = 0; i < n; ++i) y(i) = observed(train[static_cast<std::size_t>(i)]);

      auto record = [&](const char* name, const Eigen::VectorXcd& estimate) {
        const double mse = mean_squared_error(estimate, truth);
        report.rows.push_back({trial, name, n, mse, to_db(mse)});
      };
      if (want_widely) {
        record(kWidely, stage("widely prediction", trial, [&] {
                 return WidelyGpr(kernel, noise, x, y).mean(all_nodes);
               }));
      }
      if (want_proper) {
        record(kProper, stage("proper prediction", trial, [&] {
                 return ProperGpr(kernel.k, noise.sigma2, x, y).mean(all_nodes);
               }));
      }
    }
  }

  std::map<std::pair<Eigen::Index, std::string>, SummaryRow> groups;
  for (const TrialRow& row : report.rows) {
    SummaryRow& s = groups[{row.n, row.predictor}];
    s.predictor = row.predictor;
    s.n = row.n;
    s.mean_mse_db += row.mse_db;
    s.mean_mse += row.mse;
    s.trials += 1;
  }
  for (auto& [key, s] : groups) {
    s.mean_mse_db /= s.trials;
    s.mean_mse /= s.trials;
    report.summary.push_back(s);
  }
  return report;
}

}  // namespace

PredictorSelection parse_predictor(const std::string& name) {
  if (name == "widely") return PredictorSelection::kWidely;
  if (name == "proper") return PredictorSelection::kProper;
  if (name == "both") return PredictorSelection::kBoth;
  throw StructuralError("predictor must be widely, proper or both, got '" + name + "'");
}

std::string to_string(PredictorSelection p) {
  switch (p) {
    case PredictorSelection::kWidely: return "widely";
    case PredictorSelection::kProper: return "proper";
    case PredictorSelection::kBoth: return "both";
  }
  return "widely";
}

void ExperimentConfig::validate() const {
  filter.validate();
  noise().validate();
  if (trials < 1) throw StructuralError("trial count must be at least 1");
  const Eigen::Index total = filter.grid.size();
  auto check_n = [&](Eigen::Index v) {
    if (v < 0 || v > total) {
      throw StructuralError("training size " + std::to_string(v) + " must lie in [0, " +
                            std::to_string(total) + "]");
    }
  };
  check_n(n);
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    check_n(sweep[i]);
    if (i > 0 && sweep[i] <= sweep[i - 1]) throw StructuralError("sweep list must be strictly increasing");
  }
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  if (j.contains("filter")) {
    const auto& f = j.at("filter");
    c.filter.gamma = f.value("gamma", c.filter.gamma);
    c.filter.amplitudes = f.value("amplitudes", c.filter.amplitudes);
    c.filter.normalize = f.value("normalize", c.filter.normalize);
    if (f.contains("grid")) {
      const auto& g = f.at("grid");
      if (g.contains("re")) c.filter.grid.re = axis_from_json(g.at("re"));
      if (g.contains("im")) c.filter.grid.im = axis_from_json(g.at("im"));
    }
  }
  if (j.contains("noise")) {
    const auto& nz = j.at("noise");
    c.noise_sigma = nz.value("sigma", c.noise_sigma);
    if (nz.contains("rho")) {
      const auto& r = nz.at("rho");
      if (r.contains("magnitude") || r.contains("phase")) {
        c.rho = std::polar(r.value("magnitude", 0.0), r.value("phase", 0.0));
      } else {
        c.rho = {r.value("re", 0.0), r.value("im", 0.0)};
      }
    }
  }
  c.n = j.value("n", c.n);
  c.sweep = j.value("sweep", c.sweep);
  c.trials = j.value("trials", c.trials);
  c.seed = j.value("seed", c.seed);
  if (j.contains("predictor")) c.predictor = parse_predictor(j.at("predictor").get<std::string>());
  c.output = j.value("output", c.output);
  if (j.contains("kernel") && !j.at("kernel").is_null()) c.kernel = j.at("kernel");
  return c;
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j = {
      {"filter",
       {{"gamma", filter.gamma},
        {"amplitudes", filter.amplitudes},
        {"grid", {{"re", axis_to_json(filter.grid.re)}, {"im", axis_to_json(filter.grid.im)}}},
        {"normalize", filter.normalize}}},
      {"noise", {{"sigma", noise_sigma}, {"rho", {{"re", rho.real()}, {"im", rho.imag()}}}}},
      {"n", n},
      {"sweep", sweep},
      {"trials", trials},
      {"seed", seed},
      {"predictor", wcgpr::to_string(predictor)},
      {"output", output},
  };
  j["kernel"] = kernel ? *kernel : nlohmann::json(nullptr);
  return j;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ExperimentError("config", "cannot open '" + path + "'");
  try {
    return ExperimentConfig::from_json(nlohmann::json::parse(in, nullptr, true, true));
  } catch (const std::exception& e) {
    throw ExperimentError("config", path + ": " + e.what());
  }
}

ExperimentError::ExperimentError(std::string stage, const std::string& detail)
    : std::runtime_error("[" + stage + "] " + detail), stage_(std::move(stage)) {}

const SummaryRow* ExperimentReport::find(const std::string& predictor, Eigen::Index n) const {
  for (const auto& s : summary) {
    if (s.predictor == predictor && s.n == n) return &s;
  }
  return nullptr;
}

double mean_squared_error(const Eigen::VectorXcd& estimate, const Eigen::VectorXcd& truth) {
  if (estimate.size() != truth.size()) throw StructuralError("estimate and truth differ in length");
  if (truth.size() == 0) throw StructuralError("mean squared error of an empty vector");
  return (estimate - truth).squaredNorm() / static_cast<double>(truth.size());
}

double to_db(double mse) { return mse < 1e-30 ? kMseDbFloor : 10.0 * std::log10(mse); }

double mse_db(const Eigen::VectorXcd& estimate, const Eigen::VectorXcd& truth) {
  return to_db(mean_squared_error(estimate, truth));
}

std::uint64_t trial_seed(std::uint64_t seed, int trial) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(trial) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

ExperimentReport run_single(const ExperimentConfig& config) { return run_sizes(config, {config.n}); }

ExperimentReport run_sweep(const ExperimentConfig& config) {
  if (config.sweep.empty()) throw ExperimentError("config", "sweep list is empty");
  return run_sizes(config, config.sweep);
}

void write_csv(std::ostream& out, const ExperimentReport& report) {
  const auto old_precision = out.precision(17);
  out << "trial,predictor,n,mse,mse_db\n";
  for (const auto& r : report.rows) {
    out << r.trial << ',' << r.predictor << ',' << r.n << ',' << r.mse << ',' << r.mse_db << '\n';
  }
  out.precision(old_precision);
}

void write_summary(std::ostream& out, const ExperimentReport& report) {
  out << "config: " << report.config.dump() << '\n';
  out << "predictor       n   trials   mean 10log10(MSE) [dB]\n";
  for (const auto& s : report.summary) {
    char line[128];
    std::snprintf(line, sizeof line, "%-10s %6lld %8d %14.3f\n", s.predictor.c_str(),
                  static_cast<long long>(s.n), s.trials, s.mean_mse_db);
    out << line;
  }
}

}  // namespace wcgpr
