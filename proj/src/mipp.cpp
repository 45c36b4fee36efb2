#include "ngca/mipp.hpp"

#include <cmath>
#include <string>

#include "ngca/dataset.hpp"
#include "ngca/kernels.hpp"
#include "ngca/linalg.hpp"
#include "ngca/lsngca.hpp"

namespace ngca::mipp {

std::string_view to_string(Profile p) {
  switch (p) {
    case Profile::linear: return "linear";
    case Profile::pow3: return "pow3";
    case Profile::tanh: return "tanh";
    case Profile::fourier_sin: return "fourier_sin";
    case Profile::fourier_cos: return "fourier_cos";
  }
  return "unknown";
}

Profile profile_from_string(std::string_view text) {
  for (auto p : {Profile::linear, Profile::pow3, Profile::tanh, Profile::fourier_sin,
                 Profile::fourier_cos}) {
    if (to_string(p) == text) return p;
  }
  throw Error(Errc::configuration, "unknown MIPP profile '" + std::string(text) + "'");
}

double IndexFunction::r(double z) const {
  switch (profile) {
    case Profile::linear: return z;
    case Profile::pow3: return z * z * z;
    case Profile::tanh: return std::tanh(param * z);
    case Profile::fourier_sin: return std::sin(param * z);
    case Profile::fourier_cos: return std::cos(param * z);
  }
  return 0.0;
}

double IndexFunction::r_prime(double z) const {
  switch (profile) {
    case Profile::linear: return 1.0;
    case Profile::pow3: return 3.0 * z * z;
    case Profile::tanh: {
      const double t = std::tanh(param * z);
      return param * (1.0 - t * t);
    }
    case Profile::fourier_sin: return param * std::cos(param * z);
    case Profile::fourier_cos: return -param * std::sin(param * z);
  }
  return 0.0;
}

namespace {

kernels::BetaStatistics statistics(const Matrix& Y, const IndexFunction& h) {
  if (h.omega.size() != Y.cols()) throw Error(Errc::dimension, "index direction dimension mismatch");
  const Vector z = Y * h.omega;
  Vector r(z.size()), rp(z.size());
  for (Index i = 0; i < z.size(); ++i) {
    r(i) = h.r(z(i));
    rp(i) = h.r_prime(z(i));
  }
  return kernels::serial::beta_statistics(Y, r, rp, h.omega);
}

BetaVector finish(BetaVector b) {
  const double radicand = b.sum_sq_norm - b.raw.squaredNorm();
  if (b.raw.isZero(0.0)) {
    b.normalized = Vector::Zero(b.raw.size());
    b.informative_norm = 0.0;
    b.dropped = !(radicand > 0.0);
    return b;
  }
  if (!(radicand > 0.0)) {
    b.normalized = Vector::Zero(b.raw.size());
    b.informative_norm = 0.0;
    b.dropped = true;
    return b;
  }
  b.normalized = b.raw / std::sqrt(radicand);
  b.informative_norm = b.normalized.norm();
  b.dropped = false;
  return b;
}

}  // namespace

BetaVector beta_hat(const Matrix& Y, const IndexFunction& h) {
  if (Y.rows() == 0) throw Error(Errc::empty_input, "beta_hat: no samples");
  const auto stats = statistics(Y, h);
  BetaVector b;
  b.raw = stats.sum / static_cast<double>(Y.rows());
  b.sum_sq_norm = stats.sum_sq_norm;
  return b;
}

BetaVector normalize(const Matrix& Y, const IndexFunction& h, const BetaVector& raw) {
  BetaVector b = raw;
  b.sum_sq_norm = statistics(Y, h).sum_sq_norm;
  return finish(std::move(b));
}

Matrix candidate_directions(const Matrix& Y, int count, int iters, Seed seed) {
  if (count < 1) throw Error(Errc::configuration, "candidate_directions: count must be >= 1");
  const Index d = Y.cols();
  const Index n = Y.rows();
  Rng rng = make_rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix W(d, count);
  for (int k = 0; k < count; ++k) {
    for (Index c = 0; c < d; ++c) W(c, k) = normal(rng);
    W.col(k).normalize();
  }
  if (iters <= 0 || n == 0) return W;

#pragma omp parallel for schedule(dynamic, 1)
  for (int k = 0; k < count; ++k) {
    Vector w = W.col(k);
    for (int it = 0; it < iters; ++it) {
      const Vector z = Y * w;
      const Eigen::ArrayXd t = z.array().tanh();
      Vector next = (Y.transpose() * t.matrix()) / static_cast<double>(n) -
                    (1.0 - t.square()).mean() * w;
      const double norm = next.norm();
      if (!(norm > 0.0) || !next.allFinite()) break;
      next /= norm;
      const bool converged = std::abs(std::abs(next.dot(w)) - 1.0) < 1e-12;
      w = next;
      if (converged) break;
    }
    W.col(k) = w / w.norm();
  }
  return W;
}

Config Config::defaults() {
  const std::vector<double> grid{0.5, 1.0, 1.5, 2.0, 2.5};
  Config c;
  c.family = {ProfileSpec{Profile::pow3, {1.0}}, ProfileSpec{Profile::tanh, grid},
              ProfileSpec{Profile::fourier_sin, grid}, ProfileSpec{Profile::fourier_cos, grid}};
  return c;
}

std::size_t Config::function_count() const {
  std::size_t total = 0;
  for (const auto& spec : family) total += spec.params.size();
  return total * static_cast<std::size_t>(std::max(k_dir, 0));
}

Result estimate(const DataMatrix& X, Index d_s, const Config& config, Seed seed) {
  if (d_s < 1 || d_s >= X.cols()) throw Error(Errc::dimension, "mipp: d_s out of range");
  if (config.function_count() < static_cast<std::size_t>(d_s)) {
    throw Error(Errc::insufficient_functions, "mipp: function family smaller than d_s");
  }
  const auto whitening = dataset::center_whiten(X);
  const Matrix& Y = whitening.whitened;
  const Matrix directions = candidate_directions(Y, config.k_dir, config.iters, seed);

  std::vector<IndexFunction> functions;
  functions.reserve(config.function_count());
  for (const auto& spec : config.family) {
    for (double param : spec.params) {
      for (Index k = 0; k < directions.cols(); ++k) {
        functions.push_back(IndexFunction{directions.col(k), spec.profile, param});
      }
    }
  }

  Result result;
  result.betas.resize(functions.size());
  const auto count = static_cast<std::ptrdiff_t>(functions.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    result.betas[idx] = finish(beta_hat(Y, functions[idx]));
  }

  const Index d = Y.cols();
  Matrix scatter = Matrix::Zero(d, d);
  Index survivors = 0;
  for (const auto& b : result.betas) {
    if (b.dropped) {
      ++result.dropped;
      continue;
    }
    scatter.noalias() += b.normalized * b.normalized.transpose();
    ++survivors;
  }
  if (survivors < d_s) {
    throw Error(Errc::insufficient_functions, "mipp: only " + std::to_string(survivors) +
                                                  " usable beta vectors for d_s=" +
                                                  std::to_string(d_s));
  }
  const Subspace whitened = top_eigenspace(scatter, d_s, Frame::whitened);
  result.subspace = lsngca::pull_back(whitened, whitening.whitener);
  return result;
}

Subspace run_mipp(const DataMatrix& X, Index d_s, const Config& config, Seed seed) {
  return estimate(X, d_s, config, seed).subspace;
}

}  // namespace ngca::mipp
