#include "ngca/harness.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "ngca/csv.hpp"
#include "ngca/metrics.hpp"

namespace ngca::harness {

namespace {

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string sanitize(std::string msg) {
  for (char& c : msg) {
    if (c == ',') c = ';';
    if (c == '\n' || c == '\r') c = ' ';
  }
  return msg;
}

template <typename T>
std::vector<T> list_of(const io::Json& j, const char* field) {
  if (!j.is_array()) throw Error(Errc::configuration, std::string("'") + field + "' must be an array");
  std::vector<T> out;
  for (const auto& item : j) out.push_back(item.get<T>());
  return out;
}

}  // namespace

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::lsngca: return "lsngca";
    case Algorithm::mipp: return "mipp";
    case Algorithm::imak: return "imak";
    case Algorithm::pca: return "pca";
  }
  return "unknown";
}

Algorithm algorithm_from_string(std::string_view text) {
  for (auto a : {Algorithm::lsngca, Algorithm::mipp, Algorithm::imak, Algorithm::pca}) {
    if (to_string(a) == text) return a;
  }
  throw Error(Errc::configuration, "unknown algorithm '" + std::string(text) + "'");
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(Errc::configuration, msg); };
  if (algorithms.empty()) fail("no algorithms selected");
  if (n_grid.empty()) fail("n_grid is empty");
  if (!std::is_sorted(n_grid.begin(), n_grid.end())) fail("n_grid must be ascending");
  if (gamma2_grid.empty()) fail("gamma2_grid is empty");
  for (double g : gamma2_grid) {
    if (!(g >= 0.0)) fail("gamma2 values must be non-negative");
  }
  if (trials < 1) fail("trials must be >= 1");
  if (d_s != dataset::kSignalDims) fail("the synthetic generators have exactly 2 signal dimensions; d_s must be 2");
  if (d_x <= d_s) fail("d_x must exceed d_s");
  if (n_grid.front() <= d_x) fail("every n must exceed d_x");
}

ExperimentConfig config_from_json(const io::Json& j) {
  static const std::set<std::string> known{"algorithms", "generator", "n_grid", "gamma2_grid", "d_x",
                                           "d_s", "trials", "seed", "record_time", "output",
                                           "lsldg", "mipp", "imak"};
  if (!j.is_object()) throw Error(Errc::configuration, "config must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw Error(Errc::configuration, "unknown config key '" + key + "'");
  }
  ExperimentConfig cfg;
  try {
    if (j.contains("algorithms")) {
      cfg.algorithms.clear();
      for (const auto& name : list_of<std::string>(j["algorithms"], "algorithms")) {
        cfg.algorithms.push_back(algorithm_from_string(name));
      }
    }
    if (j.contains("generator")) cfg.generator = dataset::generator_from_string(j["generator"].get<std::string>());
    if (j.contains("n_grid")) cfg.n_grid = list_of<Index>(j["n_grid"], "n_grid");
    if (j.contains("gamma2_grid")) cfg.gamma2_grid = list_of<double>(j["gamma2_grid"], "gamma2_grid");
    cfg.d_x = j.value("d_x", cfg.d_x);
    cfg.d_s = j.value("d_s", cfg.d_s);
    cfg.trials = j.value("trials", cfg.trials);
    cfg.seed = Seed{j.value("seed", std::uint64_t{0})};
    cfg.record_time = j.value("record_time", cfg.record_time);
    cfg.output = j.value("output", cfg.output);

    if (j.contains("lsldg")) {
      const auto& b = j["lsldg"];
      auto& fit = cfg.lsngca.lsldg;
      fit.folds = b.value("folds", fit.folds);
      if (b.contains("sigma_grid")) fit.grid.sigmas = list_of<double>(b["sigma_grid"], "sigma_grid");
      if (b.contains("lambda_grid")) fit.grid.lambdas = list_of<double>(b["lambda_grid"], "lambda_grid");
    }
    if (j.contains("mipp")) {
      const auto& b = j["mipp"];
      cfg.mipp.k_dir = b.value("k_dir", cfg.mipp.k_dir);
      cfg.mipp.iters = b.value("iters", cfg.mipp.iters);
      if (b.contains("profiles")) {
        cfg.mipp.family.clear();
        for (const auto& p : b["profiles"]) {
          mipp::ProfileSpec spec;
          spec.profile = mipp::profile_from_string(p.at("name").get<std::string>());
          spec.params = p.contains("params") ? list_of<double>(p["params"], "params") : std::vector<double>{1.0};
          cfg.mipp.family.push_back(std::move(spec));
        }
      }
    }
    if (j.contains("imak")) {
      const auto& b = j["imak"];
      if (b.contains("sigma2_grid")) cfg.imak.sigma2_grid = list_of<double>(b["sigma2_grid"], "sigma2_grid");
      cfg.imak.outer_iters = b.value("outer_iters", cfg.imak.outer_iters);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::configuration, std::string("malformed config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

io::Json to_json(const ExperimentConfig& cfg) {
  io::Json algs = io::Json::array();
  for (auto a : cfg.algorithms) algs.push_back(std::string(to_string(a)));
  io::Json profiles = io::Json::array();
  for (const auto& p : cfg.mipp.family) {
    profiles.push_back({{"name", std::string(mipp::to_string(p.profile))}, {"params", p.params}});
  }
  return io::Json{{"algorithms", algs},
                  {"generator", std::string(dataset::to_string(cfg.generator))},
                  {"n_grid", cfg.n_grid},
                  {"gamma2_grid", cfg.gamma2_grid},
                  {"d_x", cfg.d_x},
                  {"d_s", cfg.d_s},
                  {"trials", cfg.trials},
                  {"seed", cfg.seed.value},
                  {"record_time", cfg.record_time},
                  {"output", cfg.output},
                  {"lsldg",
                   {{"folds", cfg.lsngca.lsldg.folds},
                    {"sigma_grid", cfg.lsngca.lsldg.grid.sigmas},
                    {"lambda_grid", cfg.lsngca.lsldg.grid.lambdas}}},
                  {"mipp", {{"k_dir", cfg.mipp.k_dir}, {"iters", cfg.mipp.iters}, {"profiles", profiles}}},
                  {"imak", {{"sigma2_grid", cfg.imak.sigma2_grid}, {"outer_iters", cfg.imak.outer_iters}}}};
}

Seed child_seed(Seed master, std::string_view tag, Index n, double gamma2, int trial) {
  std::uint64_t h = fnv1a(tag);
  h = mix64(h ^ static_cast<std::uint64_t>(n));
  h = mix64(h ^ std::bit_cast<std::uint64_t>(gamma2));
  h = mix64(h ^ static_cast<std::uint64_t>(trial));
  return derive_seed(master, h);
}

Subspace run_algorithm(Algorithm a, const DataMatrix& X, Index d_s, const ExperimentConfig& cfg, Seed seed) {
  switch (a) {
    case Algorithm::lsngca: return lsngca::run_lsngca(X, d_s, seed, cfg.lsngca);
    case Algorithm::mipp: return mipp::run_mipp(X, d_s, cfg.mipp, seed);
    case Algorithm::imak: return imak::run_imak(X, d_s, cfg.imak);
    case Algorithm::pca: return metrics::pca_baseline(X, d_s);
  }
  throw Error(Errc::configuration, "unknown algorithm");
}

std::vector<TrialRecord> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto truth = metrics::coordinate_subspace(cfg.d_x, cfg.d_s);
  const std::string generator(dataset::to_string(cfg.generator));
  std::vector<TrialRecord> records;

  for (Index n : cfg.n_grid) {
    for (double gamma2 : cfg.gamma2_grid) {
      for (int trial = 0; trial < cfg.trials; ++trial) {
        const Seed data_seed = child_seed(cfg.seed, "data/" + generator, n, gamma2, trial);
        DataMatrix X;
        std::string data_error;
        try {
          const auto signals = dataset::sample_signals(cfg.generator, n, derive_seed(data_seed, 1));
          X = dataset::assemble(signals, cfg.d_x, gamma2, derive_seed(data_seed, 2));
        } catch (const std::exception& e) {
          data_error = sanitize(e.what());
        }

        for (Algorithm a : cfg.algorithms) {
          TrialRecord rec;
          rec.algorithm = std::string(to_string(a));
          rec.generator = generator;
          rec.n = n;
          rec.gamma2 = gamma2;
          rec.trial = trial;
          const Seed seed = child_seed(cfg.seed, rec.algorithm, n, gamma2, trial);
          rec.seed = seed.value;
          const double nan = std::numeric_limits<double>::quiet_NaN();
          if (!data_error.empty()) {
            rec.error_E = rec.distance_D = nan;
            rec.error_msg = data_error;
            records.push_back(std::move(rec));
            continue;
          }
          const auto start = std::chrono::steady_clock::now();
          try {
            const Subspace est = run_algorithm(a, X, cfg.d_s, cfg, seed);
            const auto stop = std::chrono::steady_clock::now();
            rec.error_E = metrics::subspace_error(est, truth);
            rec.distance_D = metrics::subspace_distance(est, truth);
            if (cfg.record_time) {
              const double elapsed = std::chrono::duration<double>(stop - start).count();
              rec.time_sec = std::max(elapsed, std::numeric_limits<double>::min());
            }
          } catch (const std::exception& e) {
            rec.error_E = rec.distance_D = nan;
            rec.error_msg = sanitize(e.what());
            if (rec.error_msg.empty()) rec.error_msg = "unknown failure";
          }
          records.push_back(std::move(rec));
        }
      }
    }
  }
  return records;
}

std::string to_csv(const std::vector<TrialRecord>& records) {
  std::ostringstream out;
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.algorithm << ',' << r.generator << ',' << r.n << ',' << csv::format_double(r.gamma2) << ','
        << r.trial << ',' << r.seed << ',' << csv::format_double(r.error_E) << ','
        << csv::format_double(r.distance_D) << ',' << (r.time_sec ? csv::format_double(*r.time_sec) : "")
        << ',' << sanitize(r.error_msg) << '\n';
  }
  return out.str();
}

std::vector<TrialRecord> parse_results_csv(std::string_view text) {
  const auto lines = csv::split_lines(text);
  if (lines.empty() || lines.front() != kCsvHeader) {
    throw Error(Errc::parse, "results file does not start with the expected header");
  }
  std::vector<TrialRecord> out;
  for (std::size_t row = 1; row < lines.size(); ++row) {
    if (lines[row].empty()) continue;
    const auto cells = csv::split_cells(lines[row]);
    if (cells.size() != 10) {
      throw Error(Errc::parse, "results row " + std::to_string(row + 1) + ": expected 10 fields");
    }
    auto number = [&](std::size_t c) {
      const auto v = csv::parse_double(cells[c]);
      if (!v) throw Error(Errc::parse, "results row " + std::to_string(row + 1) + ", column " + std::to_string(c + 1));
      return *v;
    };
    TrialRecord r;
    r.algorithm = std::string(cells[0]);
    r.generator = std::string(cells[1]);
    r.n = static_cast<Index>(number(2));
    r.gamma2 = number(3);
    r.trial = static_cast<int>(number(4));
    std::uint64_t seed = 0;
    auto [ptr, ec] = std::from_chars(cells[5].data(), cells[5].data() + cells[5].size(), seed);
    if (ec != std::errc() || ptr != cells[5].data() + cells[5].size()) {
      throw Error(Errc::parse, "results row " + std::to_string(row + 1) + ": bad seed");
    }
    r.seed = seed;
    r.error_E = number(6);
    r.distance_D = number(7);
    if (!cells[8].empty()) r.time_sec = number(8);
    r.error_msg = std::string(cells[9]);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<TrialRecord> load_results(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_results_csv(buffer.str());
}

void write_results(const std::filesystem::path& path, const std::vector<TrialRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io, "cannot write '" + path.string() + "'");
  out << to_csv(records);
  if (!out) throw Error(Errc::io, "failed writing '" + path.string() + "'");
}

Metric metric_from_string(std::string_view text) {
  if (text == "E") return Metric::E;
  if (text == "D") return Metric::D;
  throw Error(Errc::configuration, "metric must be E or D, got '" + std::string(text) + "'");
}

RateFit fit_rate(const std::vector<TrialRecord>& records, std::string_view algorithm, Metric metric,
                 std::optional<double> gamma2) {
  std::set<double> gammas;
  std::map<Index, std::pair<double, int>> by_n;
  for (const auto& r : records) {
    if (r.algorithm != algorithm) continue;
    if (gamma2 && r.gamma2 != *gamma2) continue;
    const double v = metric == Metric::E ? r.error_E : r.distance_D;
    if (!std::isfinite(v)) continue;
    gammas.insert(r.gamma2);
    auto& slot = by_n[r.n];
    slot.first += v;
    slot.second += 1;
  }
  if (gammas.size() > 1) {
    throw Error(Errc::fit, "fit_rate: records span several gamma2 values; select one");
  }
  if (by_n.size() < 3) {
    throw Error(Errc::fit, "fit_rate: need at least 3 distinct n with finite values, have " +
                               std::to_string(by_n.size()));
  }
  RateFit fit;
  std::vector<double> xs, ys;
  for (const auto& [n, acc] : by_n) {
    const double mean = acc.first / acc.second;
    if (!(mean > 0.0)) {
      throw Error(Errc::fit, "fit_rate: mean metric at n=" + std::to_string(n) + " is not positive");
    }
    fit.n.push_back(n);
    fit.mean_metric.push_back(mean);
    xs.push_back(std::log(static_cast<double>(n)));
    ys.push_back(std::log(mean));
  }
  const double k = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double resid = ys[i] - fit.intercept - fit.slope * xs[i];
    rss += resid * resid;
  }
  fit.slope_stderr = std::sqrt(rss / (k - 2.0) / sxx);
  return fit;
}

Matrix project(const DataMatrix& X, const Subspace& s) {
  if (s.frame != Frame::original) {
    throw Error(Errc::frame_mismatch, "project: subspace must be in the original frame");
  }
  if (s.ambient_dim() != X.cols()) {
    throw Error(Errc::dimension, "project: subspace has d_x=" + std::to_string(s.ambient_dim()) +
                                     " but data has " + std::to_string(X.cols()) + " columns");
  }
  const Matrix centred = X.rowwise() - X.colwise().mean();
  return centred * s.basis;
}

void export_projection(const DataMatrix& X, const Subspace& s, const std::filesystem::path& path) {
  dataset::write_csv(path, project(X, s));
}

}  // namespace ngca::harness
