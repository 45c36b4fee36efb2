// Command-line front end for the NGCA experiment harness.
//
//   ngca run <config.json> [--output results.csv]
//   ngca rate <results.csv> --algorithm lsngca --metric D [--gamma2 0]
//   ngca estimate <data.csv> <subspace.json> --algorithm lsngca --ds 2 [--seed 0]
//   ngca project <data.csv> <subspace.json> <out.csv>

#include <cstdio>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "ngca/dataset.hpp"
#include "ngca/harness.hpp"
#include "ngca/serialize.hpp"

namespace {

using namespace ngca;

int cmd_run(const std::string& config_path, const std::string& output_override) {
  auto cfg = harness::config_from_json(io::read_json(config_path));
  if (!output_override.empty()) cfg.output = output_override;
  const auto records = harness::run_experiment(cfg);
  harness::write_results(cfg.output, records);
  std::size_t failed = 0;
  for (const auto& r : records) failed += r.failed() ? 1 : 0;
  std::cerr << "wrote " << records.size() << " records to " << cfg.output;
  if (failed > 0) std::cerr << " (" << failed << " failed trials)";
  std::cerr << '\n';
  return 0;
}

int cmd_rate(const std::string& results, const std::string& algorithm, const std::string& metric,
             std::optional<double> gamma2) {
  const auto records = harness::load_results(results);
  const auto fit = harness::fit_rate(records, algorithm, harness::metric_from_string(metric), gamma2);
  std::cout << "n,mean_" << metric << '\n';
  for (std::size_t i = 0; i < fit.n.size(); ++i) {
    std::cout << fit.n[i] << ',' << fit.mean_metric[i] << '\n';
  }
  std::printf("slope %.6f stderr %.6f intercept %.6f\n", fit.slope, fit.slope_stderr, fit.intercept);
  return 0;
}

int cmd_estimate(const std::string& data, const std::string& out, const std::string& algorithm, Index d_s,
                 std::uint64_t seed) {
  const DataMatrix X = dataset::load_csv(data);
  harness::ExperimentConfig cfg;
  const Subspace s = harness::run_algorithm(harness::algorithm_from_string(algorithm), X, d_s, cfg, Seed{seed});
  io::write_json(out, io::to_json(s));
  if (s.degenerate_gap) std::cerr << "warning: eigen-gap at d_s is degenerate\n";
  return 0;
}

int cmd_project(const std::string& data, const std::string& subspace, const std::string& out) {
  const DataMatrix X = dataset::load_csv(data);
  const Subspace s = io::subspace_from_json(io::read_json(subspace));
  harness::export_projection(X, s, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-Gaussian component analysis: LSNGCA, MIPP, IMAK and PCA benchmark harness"};
  app.require_subcommand(1);

  std::string config_path, output_override;
  auto* run = app.add_subcommand("run", "Run a JSON-configured experiment grid and write a results CSV");
  run->add_option("config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("-o,--output", output_override, "Override the config's output path");

  std::string results, algorithm = "lsngca", metric = "D";
  std::optional<double> gamma2;
  auto* rate = app.add_subcommand("rate", "Fit log(mean metric) against log(n)");
  rate->add_option("results", results, "Results CSV written by `run`")->required()->check(CLI::ExistingFile);
  rate->add_option("--algorithm", algorithm, "Algorithm id")->capture_default_str();
  rate->add_option("--metric", metric, "E or D")->check(CLI::IsMember({"E", "D"}))->capture_default_str();
  rate->add_option("--gamma2", gamma2, "Restrict to one noise level");

  std::string data, subspace, out;
  Index d_s = 2;
  std::uint64_t seed = 0;
  std::string est_algorithm = "lsngca";
  auto* estimate = app.add_subcommand("estimate", "Estimate a subspace from a data CSV and save it as JSON");
  estimate->add_option("data", data, "Data CSV, one sample per row")->required()->check(CLI::ExistingFile);
  estimate->add_option("subspace", subspace, "Output subspace JSON")->required();
  estimate->add_option("--algorithm", est_algorithm, "lsngca, mipp, imak or pca")->capture_default_str();
  estimate->add_option("--ds", d_s, "Subspace dimension")->capture_default_str();
  estimate->add_option("--seed", seed, "Random seed")->capture_default_str();

  std::string proj_data, proj_subspace, proj_out;
  auto* project = app.add_subcommand("project", "Project centred data onto a saved subspace");
  project->add_option("data", proj_data, "Data CSV")->required()->check(CLI::ExistingFile);
  project->add_option("subspace", proj_subspace, "Subspace JSON")->required()->check(CLI::ExistingFile);
  project->add_option("out", proj_out, "Output CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path, output_override);
    if (*rate) return cmd_rate(results, algorithm, metric, gamma2);
    if (*estimate) return cmd_estimate(data, subspace, est_algorithm, d_s, seed);
    if (*project) return cmd_project(proj_data, proj_subspace, proj_out);
  } catch (const ngca::Error& e) {
    std::cerr << "error (" << ngca::to_string(e.code()) << "): " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
