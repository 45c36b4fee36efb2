#include "ngca/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "ngca/csv.hpp"

namespace ngca::dataset {

namespace {

// Composite Simpson rule on [a, b] with an even number of panels.
double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double sum = f(a) + f(b);
  for (int k = 1; k < panels; ++k) {
    sum += f(a + k * h) * (k % 2 == 1 ? 4.0 : 2.0);
  }
  return sum * h / 3.0;
}

// Variance of the symmetric density exp(-phi(|s|)) integrated on [0, upper].
double symmetric_variance(const std::function<double(double)>& log_density, double upper) {
  constexpr int kPanels = 20000;
  const double mass = simpson([&](double s) { return std::exp(log_density(s)); }, 0.0, upper, kPanels);
  const double second = simpson([&](double s) { return s * s * std::exp(log_density(s)); }, 0.0, upper, kPanels);
  return second / mass;
}

// Bisection for an increasing variance(param) = target.
double bisect_variance(const std::function<double(double)>& variance, double lo, double hi) {
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (variance(mid) < kSignalVariance) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double laplace_draw(double alpha, Rng& rng) {
  std::uniform_real_distribution<double> unit(-0.5, 0.5);
  const double u = unit(rng);
  const double magnitude = -alpha * std::log1p(-2.0 * std::abs(u));
  return u < 0.0 ? -magnitude : magnitude;
}

double mixture_draw(Rng& rng) {
  std::bernoulli_distribution coin(0.5);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double centre = coin(rng) ? 3.0 : -3.0;
  return centre + normal(rng);
}

}  // namespace

std::string_view to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::gaussian_mixture: return "gaussian_mixture";
    case GeneratorKind::super_gaussian: return "super_gaussian";
    case GeneratorKind::sub_gaussian: return "sub_gaussian";
    case GeneratorKind::mixed_super_sub: return "mixed_super_sub";
  }
  return "unknown";
}

GeneratorKind generator_from_string(std::string_view text) {
  for (auto kind : {GeneratorKind::gaussian_mixture, GeneratorKind::super_gaussian,
                    GeneratorKind::sub_gaussian, GeneratorKind::mixed_super_sub}) {
    if (to_string(kind) == text) return kind;
  }
  throw Error(Errc::configuration, "unknown generator '" + std::string(text) + "'");
}

double laplace_scale() {
  static const double alpha = bisect_variance(
      [](double a) { return symmetric_variance([a](double s) { return -s / a; }, 60.0 * a); },
      1e-3, 1e3);
  return alpha;
}

double quartic_beta() {
  static const double beta = bisect_variance(
      [](double b) {
        return symmetric_variance([b](double s) { return -(s * s * s * s) / b; },
                                  std::pow(60.0 * b, 0.25));
      },
      1e-3, 1e6);
  return beta;
}

QuarticSampler::QuarticSampler(double beta) : beta_(beta) {
  const double limit = 6.0 * std::sqrt(3.0);
  nodes_.resize(kGridPoints);
  cdf_.resize(kGridPoints);
  const double step = 2.0 * limit / (kGridPoints - 1);
  auto density = [beta](double s) { return std::exp(-(s * s * s * s) / beta); };
  nodes_[0] = -limit;
  cdf_[0] = 0.0;
  for (int k = 1; k < kGridPoints; ++k) {
    nodes_[k] = -limit + k * step;
    cdf_[k] = cdf_[k - 1] + 0.5 * step * (density(nodes_[k - 1]) + density(nodes_[k]));
  }
  const double total = cdf_.back();
  for (double& c : cdf_) c /= total;
}

double QuarticSampler::quantile(double u) const {
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.begin()) return nodes_.front();
  if (it == cdf_.end()) return nodes_.back();
  const auto k = static_cast<std::size_t>(it - cdf_.begin());
  const double width = cdf_[k] - cdf_[k - 1];
  if (width <= 0.0) return nodes_[k - 1];
  const double t = (u - cdf_[k - 1]) / width;
  return nodes_[k - 1] + t * (nodes_[k] - nodes_[k - 1]);
}

double QuarticSampler::cdf(double s) const {
  if (s <= nodes_.front()) return 0.0;
  if (s >= nodes_.back()) return 1.0;
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), s);
  const auto k = static_cast<std::size_t>(it - nodes_.begin());
  const double t = (s - nodes_[k - 1]) / (nodes_[k] - nodes_[k - 1]);
  return cdf_[k - 1] + t * (cdf_[k] - cdf_[k - 1]);
}

double QuarticSampler::operator()(Rng& rng) const {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  return quantile(unit(rng));
}

SignalMatrix sample_signals(GeneratorKind kind, Index n, Seed seed) {
  if (n <= 0) throw Error(Errc::empty_input, "sample_signals: n must be positive");
  Rng rng = make_rng(seed);
  SignalMatrix s(n, kSignalDims);

  const double alpha = laplace_scale();
  static const QuarticSampler quartic(quartic_beta());

  for (Index i = 0; i < n; ++i) {
    for (Index c = 0; c < kSignalDims; ++c) {
      switch (kind) {
        case GeneratorKind::gaussian_mixture:
          s(i, c) = mixture_draw(rng);
          break;
        case GeneratorKind::super_gaussian:
          s(i, c) = laplace_draw(alpha, rng);
          break;
        case GeneratorKind::sub_gaussian:
          s(i, c) = quartic(rng);
          break;
        case GeneratorKind::mixed_super_sub:
          s(i, c) = c == 0 ? laplace_draw(alpha, rng) : quartic(rng);
          break;
      }
    }
  }
  return s;
}

DataMatrix assemble(const SignalMatrix& signals, Index d_x, double gamma2, Seed seed) {
  if (d_x <= kSignalDims) {
    throw Error(Errc::dimension, "assemble: d_x must exceed " + std::to_string(kSignalDims) +
                                     ", got " + std::to_string(d_x));
  }
  if (signals.cols() != kSignalDims) {
    throw Error(Errc::dimension, "assemble: expected 2 signal columns");
  }
  if (!(gamma2 >= 0.0)) {
    throw Error(Errc::configuration, "assemble: noise variance must be non-negative");
  }
  Rng rng = make_rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double noise_sd = std::sqrt(gamma2);

  const Index n = signals.rows();
  DataMatrix X(n, d_x);
  for (Index i = 0; i < n; ++i) {
    for (Index c = 0; c < d_x; ++c) {
      const double z = normal(rng);
      X(i, c) = c < kSignalDims ? signals(i, c) + noise_sd * z : z;
    }
  }
  return X;
}

Whitening center_whiten(const DataMatrix& X) {
  const Index n = X.rows();
  const Index d = X.cols();
  if (n == 0 || d == 0) throw Error(Errc::empty_input, "center_whiten: empty data");
  if (n <= d) {
    throw Error(Errc::dimension, "center_whiten: need more samples than dimensions (n=" +
                                     std::to_string(n) + ", d=" + std::to_string(d) + ")");
  }
  require_finite(X, "data matrix");

  Whitening w;
  w.mean = X.colwise().mean().transpose();
  const Matrix centred = X.rowwise() - w.mean.transpose();
  w.covariance = (centred.transpose() * centred) / static_cast<double>(n);
  w.covariance = 0.5 * (w.covariance + w.covariance.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Matrix> eig(w.covariance);
  if (eig.info() != Eigen::Success) {
    throw Error(Errc::numeric, "center_whiten: covariance eigendecomposition failed");
  }
  const Vector& lambda = eig.eigenvalues();
  const double largest = lambda.maxCoeff();
  const double smallest = lambda.minCoeff();
  if (!(largest > 0.0) || smallest < 1e-12 * largest) {
    std::ostringstream msg;
    msg << "center_whiten: singular covariance, eigenvalue " << smallest << " vs largest " << largest;
    throw Error(Errc::singular_covariance, msg.str());
  }
  const Matrix& U = eig.eigenvectors();
  w.whitener = U * lambda.cwiseInverse().cwiseSqrt().asDiagonal() * U.transpose();
  w.whitener = 0.5 * (w.whitener + w.whitener.transpose()).eval();
  w.whitened = centred * w.whitener;
  return w;
}

DataMatrix parse_csv(std::string_view text) {
  std::vector<std::vector<double>> rows;
  std::size_t expected_cols = 0;
  std::size_t line_no = 0;
  bool first_line = true;

  for (const auto& line : csv::split_lines(text)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = csv::split_cells(line);
    std::vector<double> row;
    row.reserve(cells.size());
    bool numeric = true;
    std::size_t bad_col = 0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto value = csv::parse_double(cells[c]);
      if (!value || !std::isfinite(*value)) {
        numeric = false;
        bad_col = c + 1;
        break;
      }
      row.push_back(*value);
    }
    if (!numeric) {
      if (first_line) {
        first_line = false;
        continue;  // header
      }
      throw Error(Errc::parse, "non-numeric cell at row " + std::to_string(line_no) + ", column " +
                                   std::to_string(bad_col));
    }
    first_line = false;
    if (rows.empty()) {
      expected_cols = row.size();
    } else if (row.size() != expected_cols) {
      throw Error(Errc::parse, "ragged row " + std::to_string(line_no) + ": expected " +
                                   std::to_string(expected_cols) + " columns, found " +
                                   std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(Errc::empty_input, "csv contains no data rows");

  DataMatrix X(static_cast<Index>(rows.size()), static_cast<Index>(expected_cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t c = 0; c < expected_cols; ++c) {
      X(static_cast<Index>(i), static_cast<Index>(c)) = rows[i][c];
    }
  }
  return X;
}

DataMatrix load_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str());
}

void write_csv(const std::filesystem::path& path, const Matrix& values) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io, "cannot write '" + path.string() + "'");
  for (Index i = 0; i < values.rows(); ++i) {
    for (Index c = 0; c < values.cols(); ++c) {
      if (c > 0) out << ',';
      out << csv::format_double(values(i, c));
    }
    out << '\n';
  }
  if (!out) throw Error(Errc::io, "failed writing '" + path.string() + "'");
}

}  // namespace ngca::dataset
