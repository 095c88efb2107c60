// Command-line harness for the complex GPR experiments.
//
//   wcgpr run      --config cfg.json [--seed S] [--trials T] [--predictor widely|proper|both] [--out results.csv]
//   wcgpr sweep    ...same flags; uses the config's sweep list
//   wcgpr validate --config cfg.json
//   wcgpr synth    --config cfg.json [--seed S] --out sample.csv

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "wcgpr/errors.hpp"
#include "wcgpr/experiment.hpp"
#include "wcgpr/kernels.hpp"
#include "wcgpr/synthesis.hpp"

namespace {

struct Flags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<std::string> predictor;
  std::string out;
};

wcgpr::ExperimentConfig resolve_config(const Flags& flags) {
  wcgpr::ExperimentConfig config =
      flags.config_path.empty() ? wcgpr::ExperimentConfig{} : wcgpr::load_config(flags.config_path);
  if (flags.seed) config.seed = *flags.seed;
  if (flags.trials) config.trials = *flags.trials;
  if (flags.predictor) config.predictor = wcgpr::parse_predictor(*flags.predictor);
  if (!flags.out.empty()) config.output = flags.out;
  try {
    config.validate();
  } catch (const std::exception& e) {
    throw wcgpr::ExperimentError("config", e.what());
  }
  return config;
}

void emit_report(const wcgpr::ExperimentReport& report, const std::string& output) {
  if (output.empty() || output == "-") {
    wcgpr::write_csv(std::cout, report);
    wcgpr::write_summary(std::cerr, report);
    return;
  }
  std::ofstream csv(output);
  if (!csv) throw wcgpr::ExperimentError("output", "cannot write '" + output + "'");
  wcgpr::write_csv(csv, report);
  wcgpr::write_summary(std::cout, report);
}

int validate(const wcgpr::ExperimentConfig& config) {
  const wcgpr::KernelPair kp = config.kernel ? wcgpr::kernel_from_descriptor(*config.kernel)
                                             : wcgpr::filter_induced_kernel(config.filter);
  const auto nodes = wcgpr::ComplexInputSet::from_scalars(config.filter.grid.nodes());
  const Eigen::Index subset_size = std::min<Eigen::Index>(50, nodes.size());
  std::mt19937_64 engine(config.seed);
  bool all_passed = true;
  for (int s = 0; s < 5; ++s) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(nodes.size()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::shuffle(order.begin(), order.end(), engine);
    order.resize(static_cast<std::size_t>(subset_size));
    const auto report = wcgpr::validate_kernel_pair(kp, nodes.subset(order));
    std::printf("subset %d: hermitian=%.3e symmetry=%.3e eig=[%.3e, %.3e] %s\n", s,
                report.hermitian_residual, report.symmetry_residual, report.min_eigenvalue,
                report.max_eigenvalue, report.passed ? "PASS" : "FAIL");
    all_passed = all_passed && report.passed;
  }
  std::printf("kernel: %s\n", kp.descriptor.dump().c_str());
  std::printf("config: valid\n");
  return all_passed ? 0 : 1;
}

int synth(const wcgpr::ExperimentConfig& config) {
  const auto sample = wcgpr::generate_improper_gp(config.filter, config.seed);
  if (config.output.empty() || config.output == "-") {
    wcgpr::write_sample_csv(std::cout, sample);
    return 0;
  }
  std::ofstream out(config.output);
  if (!out) throw wcgpr::ExperimentError("output", "cannot write '" + config.output + "'");
  wcgpr::write_sample_csv(out, sample);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Widely complex Gaussian process regression experiments"};
  app.require_subcommand(1);
  Flags flags;
  app.add_option("--config", flags.config_path, "JSON experiment configuration");
  app.add_option("--seed", flags.seed, "Experiment seed");
  app.add_option("--trials", flags.trials, "Number of trials")->check(CLI::PositiveNumber);
  app.add_option("--predictor", flags.predictor, "widely | proper | both")
      ->check(CLI::IsMember({"widely", "proper", "both"}));
  app.add_option("--out", flags.out, "Output CSV path ('-' for stdout)");

  auto* run = app.add_subcommand("run", "Single experiment at the configured training size")->fallthrough();
  auto* sweep = app.add_subcommand("sweep", "Training-size sweep")->fallthrough();
  auto* check = app.add_subcommand("validate", "Validate the configuration and kernel pair")->fallthrough();
  auto* synth_cmd = app.add_subcommand("synth", "Write one synthesized sample function as CSV")->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    wcgpr::ExperimentConfig config = resolve_config(flags);
    if (*run) {
      emit_report(wcgpr::run_single(config), config.output);
    } else if (*sweep) {
      if (config.sweep.empty()) config.sweep = {50, 100, 200, 300, 400, 500};
      emit_report(wcgpr::run_sweep(config), config.output);
    } else if (*check) {
      return validate(config);
    } else if (*synth_cmd) {
      return synth(config);
    }
  } catch (const wcgpr::ExperimentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: [unexpected] " << e.what() << '\n';
    return 1;
  }
  return 0;
}
