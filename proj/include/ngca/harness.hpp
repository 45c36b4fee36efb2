#pragma once

// Experiment harness: grids of synthetic trials over (n, gamma2), each
// algorithm scored against the known non-Gaussian subspace span{e_1, e_2}.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ngca/common.hpp"
#include "ngca/dataset.hpp"
#include "ngca/imak.hpp"
#include "ngca/lsngca.hpp"
#include "ngca/mipp.hpp"
#include "ngca/serialize.hpp"

namespace ngca::harness {

enum class Algorithm { lsngca, mipp, imak, pca };

std::string_view to_string(Algorithm a);
Algorithm algorithm_from_string(std::string_view text);

struct ExperimentConfig {
  std::vector<Algorithm> algorithms{Algorithm::lsngca};
  dataset::GeneratorKind generator = dataset::GeneratorKind::gaussian_mixture;
  std::vector<Index> n_grid{500, 1000, 2000, 4000};
  std::vector<double> gamma2_grid{0.0};
  Index d_x = 10;
  Index d_s = 2;
  int trials = 10;
  Seed seed{0};
  // Wall-clock time is the only non-reproducible column; switching it off
  // makes the CSV a pure function of the config.
  bool record_time = true;
  std::string output = "results.csv";
  lsngca::Options lsngca;
  mipp::Config mipp = mipp::Config::defaults();
  imak::Config imak;

  void validate() const;
};

ExperimentConfig config_from_json(const io::Json& j);
io::Json to_json(const ExperimentConfig& cfg);

struct TrialRecord {
  std::string algorithm;
  std::string generator;
  Index n = 0;
  double gamma2 = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;
  double error_E = 0.0;
  double distance_D = 0.0;
  std::optional<double> time_sec;
  std::string error_msg;

  bool failed() const { return !error_msg.empty(); }
};

inline constexpr std::string_view kCsvHeader =
    "algorithm,generator,n,gamma2,trial,seed,error_E,distance_D,time_sec,error_msg";

/// Seeds for one (algorithm, n, gamma2, trial) cell; data seeds use the
/// pseudo-algorithm id "data" so every algorithm sees the same sample.
Seed child_seed(Seed master, std::string_view tag, Index n, double gamma2, int trial);

Subspace run_algorithm(Algorithm a, const DataMatrix& X, Index d_s, const ExperimentConfig& cfg, Seed seed);

std::vector<TrialRecord> run_experiment(const ExperimentConfig& cfg);

std::string to_csv(const std::vector<TrialRecord>& records);
std::vector<TrialRecord> parse_results_csv(std::string_view text);
std::vector<TrialRecord> load_results(const std::filesystem::path& path);
void write_results(const std::filesystem::path& path, const std::vector<TrialRecord>& records);

enum class Metric { E, D };
Metric metric_from_string(std::string_view text);

struct RateFit {
  double slope = 0.0;
  double slope_stderr = 0.0;
  double intercept = 0.0;
  std::vector<Index> n;
  std::vector<double> mean_metric;
};

/// OLS of log(mean metric) on log(n) across the distinct n present.
RateFit fit_rate(const std::vector<TrialRecord>& records, std::string_view algorithm, Metric metric,
                 std::optional<double> gamma2 = std::nullopt);

/// Rows basis^T (x_i - mean).
Matrix project(const DataMatrix& X, const Subspace& s);
void export_projection(const DataMatrix& X, const Subspace& s, const std::filesystem::path& path);

}  // namespace ngca::harness
