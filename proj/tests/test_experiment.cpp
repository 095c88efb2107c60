#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "test_support.hpp"
#include "wcgpr/errors.hpp"
#include "wcgpr/experiment.hpp"

using namespace wcgpr;
using namespace wcgpr::testing;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.filter.grid = {{-1.5, 1.5, 16}, {-1.5, 1.5, 16}};
  c.n = 60;
  c.trials = 2;
  c.seed = 3;
  c.predictor = PredictorSelection::kBoth;
  return c;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("mse_db examples") {
  const Eigen::VectorXcd truth = Eigen::VectorXcd::LinSpaced(4, cdouble(0.0, 1.0), cdouble(3.0, -2.0));
  CHECK(mse_db(truth, truth) == kMseDbFloor);
  Eigen::VectorXcd off = truth;
  off.array() += std::polar(std::sqrt(0.1), 0.7);
  CHECK(mse_db(off, truth) == doctest::Approx(-10.0).epsilon(1e-12));
  CHECK_THROWS_AS(mse_db(truth, Eigen::VectorXcd::Zero(3)), StructuralError);
  CHECK_THROWS_AS(mse_db(Eigen::VectorXcd(0), Eigen::VectorXcd(0)), StructuralError);
}

TEST_CASE("config defaults and validation") {
  const ExperimentConfig d;
  CHECK(d.filter.gamma == 0.6);
  CHECK(d.filter.amplitudes == std::array<double, 4>{4.0, 5.0, 1.0, -3.0});
  CHECK(d.filter.grid.size() == 10000);
  CHECK(d.filter.normalize);
  CHECK(d.noise_sigma == 0.0165);
  CHECK(std::abs(d.rho - std::polar(0.8, 1.5 * M_PI)) < 1e-15);
  CHECK(d.n == 500);
  CHECK_NOTHROW(d.validate());

  ExperimentConfig c = small_config();
  c.n = 257;
  CHECK_THROWS_AS(c.validate(), StructuralError);
  c = small_config();
  c.trials = 0;
  CHECK_THROWS_AS(c.validate(), StructuralError);
  c = small_config();
  c.sweep = {10, 10};
  CHECK_THROWS_AS(c.validate(), StructuralError);
  c = small_config();
  c.rho = {1.0, 0.5};
  CHECK_THROWS_AS(c.validate(), StructuralError);
  CHECK_THROWS_AS(parse_predictor("median"), StructuralError);
}

TEST_CASE("config JSON round trip and rho forms") {
  ExperimentConfig c = small_config();
  c.sweep = {10, 20};
  c.kernel = squared_exponential_pair(1.0, 0.5, {0.3, 0.1}).descriptor;
  const ExperimentConfig back = ExperimentConfig::from_json(c.to_json());
  CHECK(back.to_json() == c.to_json());

  const ExperimentConfig polar = ExperimentConfig::from_json(
      nlohmann::json::parse(R"({"noise": {"sigma": 0.2, "rho": {"magnitude": 0.5, "phase": 1.0}}})"));
  CHECK(std::abs(polar.rho - std::polar(0.5, 1.0)) < 1e-15);
  CHECK(polar.noise().sigma2 == doctest::Approx(0.04));
  CHECK(polar.n == 500);

  const std::string path = "test_experiment_bad.json";
  {
    std::ofstream out(path);
    out << "{ not json";
  }
  try {
    load_config(path);
    FAIL("expected a config error");
  } catch (const ExperimentError& e) {
    CHECK(e.stage() == "config");
  }
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_config("no/such/file.json"), ExperimentError);
}

TEST_CASE("run_single bookkeeping, determinism and paired predictors") {
  const ExperimentConfig c = small_config();
  const ExperimentReport a = run_single(c);
  CHECK(a.rows.size() == 4);
  CHECK(a.summary.size() == 2);
  const SummaryRow* widely = a.find("widely", 60);
  const SummaryRow* proper = a.find("proper", 60);
  REQUIRE(widely != nullptr);
  REQUIRE(proper != nullptr);
  CHECK(widely->trials == 2);
  double sum = 0.0;
  for (const auto& r : a.rows) {
    CHECK(std::isfinite(r.mse_db));
    CHECK(r.mse_db == to_db(r.mse));
    if (r.predictor == "widely") sum += r.mse_db;
  }
  CHECK(widely->mean_mse_db == doctest::Approx(sum / 2.0));
  CHECK(a.rows[0].mse != a.rows[2].mse);

  const ExperimentReport b = run_single(c);
  for (std::size_t i = 0; i < a.rows.size(); ++i) CHECK(a.rows[i].mse == b.rows[i].mse);
  CHECK(a.config == c.to_json());

  ExperimentConfig only = c;
  only.predictor = PredictorSelection::kWidely;
  const ExperimentReport w = run_single(only);
  CHECK(w.rows.size() == 2);
  CHECK(w.rows[0].mse == a.rows[0].mse);
}

TEST_CASE("proper generative model: both predictors agree") {
  ExperimentConfig c = small_config();
  c.filter.amplitudes = {4.0, 5.0, 0.0, 0.0};
  c.rho = 0.0;
  const ExperimentReport r = run_single(c);
  CHECK(std::abs(r.find("widely", 60)->mean_mse_db - r.find("proper", 60)->mean_mse_db) < 1e-6);
}

TEST_CASE("sweep of length one matches run_single") {
  ExperimentConfig c = small_config();
  c.sweep = {60};
  const ExperimentReport s = run_sweep(c);
  const ExperimentReport r = run_single(c);
  REQUIRE(s.rows.size() == r.rows.size());
  for (std::size_t i = 0; i < s.rows.size(); ++i) {
    CHECK(s.rows[i].mse == r.rows[i].mse);
    CHECK(s.rows[i].predictor == r.rows[i].predictor);
  }
  c.sweep.clear();
  CHECK_THROWS_AS(run_sweep(c), ExperimentError);
}

TEST_CASE("sweep rows and CSV output") {
  ExperimentConfig c = small_config();
  c.sweep = {20, 40, 80};
  const ExperimentReport s = run_sweep(c);
  CHECK(s.rows.size() == 2 * 3 * 2);
  CHECK(s.summary.size() == 6);

  std::ostringstream out;
  write_csv(out, s);
  const auto rows = parse_csv(out.str());
  REQUIRE(rows.size() == s.rows.size() + 1);
  CHECK(rows[0] == std::vector<std::string>{"trial", "predictor", "n", "mse", "mse_db"});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i].size() == 5);
    const double mse = std::stod(rows[i][3]);
    CHECK(mse == s.rows[i - 1].mse);
    CHECK(std::stod(rows[i][4]) == doctest::Approx(10.0 * std::log10(mse)).epsilon(1e-14));
  }

  std::ostringstream summary;
  write_summary(summary, s);
  CHECK(summary.str().find("widely") != std::string::npos);
}

TEST_CASE("failing stages are named") {
  ExperimentConfig c = small_config();
  c.kernel = nlohmann::json{{"type", "unknown"}};
  try {
    run_single(c);
    FAIL("expected a kernel error");
  } catch (const ExperimentError& e) {
    CHECK(e.stage() == "kernel");
    CHECK(std::string(e.what()).find("[kernel]") == 0);
  }
}

TEST_CASE("trial seeds are distinct and stable") {
  CHECK(trial_seed(1, 0) == trial_seed(1, 0));
  CHECK(trial_seed(1, 0) != trial_seed(1, 1));
  CHECK(trial_seed(1, 0) != trial_seed(2, 0));
}
