#include "ngca/imak.hpp"

#include <cmath>
#include <string>

#include "ngca/dataset.hpp"
#include "ngca/kernels.hpp"
#include "ngca/linalg.hpp"
#include "ngca/lsngca.hpp"

namespace ngca::imak {

namespace {

void check_metric(const Matrix& M, Index d) {
  if (M.rows() != d || M.cols() != d) {
    throw Error(Errc::metric, "imak: metric must be " + std::to_string(d) + "x" + std::to_string(d));
  }
  require_finite(M, "metric");
  if (!M.isApprox(M.transpose(), 1e-10)) throw Error(Errc::metric, "imak: metric is not symmetric");
  const Vector ev = Eigen::SelfAdjointEigenSolver<Matrix>(0.5 * (M + M.transpose()), Eigen::EigenvaluesOnly).eigenvalues();
  if (ev.minCoeff() < -1e-10 * std::max(1.0, ev.cwiseAbs().maxCoeff())) {
    throw Error(Errc::metric, "imak: metric is not positive semidefinite");
  }
}

double ridge_for(const Matrix& G) {
  const double n = static_cast<double>(G.rows());
  const double ridge = 1e-10 * G.trace() / n;
  return ridge > 0.0 ? ridge : 1e-300;
}

void fix_sign(Vector& v) {
  Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  if (v(arg) < 0.0) v = -v;
}

}  // namespace

KernelState build_kernel(const Matrix& Y, const Matrix& metric, double sigma2, bool with_partials) {
  if (!(sigma2 > 0.0)) throw Error(Errc::configuration, "imak: sigma2 must be positive");
  if (Y.rows() == 0) throw Error(Errc::empty_input, "imak: no samples");
  check_metric(metric, Y.cols());
  KernelState s;
  s.metric = metric;
  s.sigma2 = sigma2;
  s.K = kernels::parallel::gaussian_gram(Y, metric, sigma2);
  if (with_partials) {
    const Index n = Y.rows();
    const Matrix MY = Y * metric;
    s.partials.assign(static_cast<std::size_t>(Y.cols()), Matrix(n, n));
    for (Index r = 0; r < Y.cols(); ++r) {
      Matrix& dK = s.partials[static_cast<std::size_t>(r)];
      for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i < n; ++i) {
          dK(i, j) = -(MY(i, r) - MY(j, r)) / sigma2 * s.K(i, j);
        }
      }
    }
  }
  return s;
}

FG build_FG(const Matrix& Y, const KernelState& state) {
  if (state.K.rows() != Y.rows()) throw Error(Errc::dimension, "build_FG: kernel/sample mismatch");
  const auto m = kernels::parallel::imak_moments(Y, state.K, state.metric, state.sigma2);
  const double n = static_cast<double>(Y.rows());
  FG out;
  out.F = m.linear.transpose() * m.linear / (n * n);
  out.F = 0.5 * (out.F + out.F.transpose()).eval();
  out.G = m.second - out.F;
  out.G = 0.5 * (out.G + out.G.transpose()).eval();
  return out;
}

AlphaSolution solve_alpha(const Matrix& F, const Matrix& G) {
  if (F.rows() != F.cols() || G.rows() != G.cols() || F.rows() != G.rows()) {
    throw Error(Errc::dimension, "solve_alpha: F and G must be square and equal size");
  }
  require_finite(F, "F");
  require_finite(G, "G");
  Matrix Greg = 0.5 * (G + G.transpose());
  Greg.diagonal().array() += ridge_for(Greg);
  const Matrix Fs = 0.5 * (F + F.transpose());
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> solver(Fs, Greg, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
  if (solver.info() != Eigen::Success) {
    throw Error(Errc::numeric, "solve_alpha: generalised eigensolve failed");
  }
  const Index top = F.rows() - 1;
  AlphaSolution out;
  out.eta = solver.eigenvalues()(top);
  out.alpha = solver.eigenvectors().col(top);
  out.alpha /= std::sqrt(out.alpha.dot(Greg * out.alpha));
  fix_sign(out.alpha);
  if (!out.alpha.allFinite()) throw Error(Errc::numeric, "solve_alpha: non-finite eigenvector");
  return out;
}

AlphaSolution solve_alpha_low_rank(const Matrix& L, const Matrix& G) {
  const Index n = G.rows();
  if (L.cols() != n) throw Error(Errc::dimension, "solve_alpha_low_rank: L must have n columns");
  require_finite(L, "L");
  require_finite(G, "G");
  Matrix Greg = 0.5 * (G + G.transpose());
  double ridge = ridge_for(Greg);
  Eigen::LLT<Matrix> llt;
  for (int attempt = 0; attempt < 6; ++attempt) {
    Matrix A = Greg;
    A.diagonal().array() += ridge;
    llt.compute(A);
    if (llt.info() == Eigen::Success) {
      Greg = std::move(A);
      break;
    }
    ridge *= 100.0;
  }
  if (llt.info() != Eigen::Success) throw Error(Errc::numeric, "solve_alpha_low_rank: G not positive definite");

  // C = R^{-1} F R^{-T} = B B^T with B = R^{-1} L^T / n.
  const Matrix B = llt.matrixL().solve(L.transpose()) / static_cast<double>(n);
  Eigen::SelfAdjointEigenSolver<Matrix> small(B.transpose() * B);
  if (small.info() != Eigen::Success) throw Error(Errc::numeric, "solve_alpha_low_rank: eigensolve failed");
  const Index top = small.eigenvalues().size() - 1;
  AlphaSolution out;
  out.eta = small.eigenvalues()(top);
  Vector u = B * small.eigenvectors().col(top);
  const double norm = u.norm();
  if (!(norm > 0.0)) throw Error(Errc::numeric, "solve_alpha_low_rank: F vanishes");
  u /= norm;
  out.alpha = llt.matrixU().solve(u);
  fix_sign(out.alpha);
  return out;
}

double h_value(const Matrix& Y, const KernelState& state, const Vector& alpha, const Vector& y) {
  double h = 0.0;
  for (Index i = 0; i < Y.rows(); ++i) {
    const Vector diff = y - Y.row(i).transpose();
    h += alpha(i) * std::exp(-diff.dot(state.metric * diff) / (2.0 * state.sigma2));
  }
  return h;
}

Vector h_gradient(const Matrix& Y, const KernelState& state, const Vector& alpha, const Vector& y) {
  Vector g = Vector::Zero(y.size());
  for (Index i = 0; i < Y.rows(); ++i) {
    const Vector diff = y - Y.row(i).transpose();
    const Vector Md = state.metric * diff;
    const double k = std::exp(-diff.dot(Md) / (2.0 * state.sigma2));
    g -= alpha(i) * k / state.sigma2 * Md;
  }
  return g;
}

Vector beta_from_alpha(const Matrix& Y, const KernelState& state, const Vector& alpha) {
  const Index n = Y.rows();
  const Matrix MY = Y * state.metric;
  const Vector h = state.K * alpha;
  // grad h(y_i) = -(1/sigma2) [ h_i M y_i - sum_j alpha_j K_ij M y_j ]
  const Matrix grad = -(h.asDiagonal() * MY - state.K * (alpha.asDiagonal() * MY)) / state.sigma2;
  const Matrix summand = h.asDiagonal() * Y - grad;
  return summand.colwise().sum().transpose() / static_cast<double>(n);
}

std::optional<Matrix> metric_update(const std::vector<Vector>& betas, Index d) {
  Matrix S = Matrix::Zero(d, d);
  for (const auto& b : betas) S.noalias() += b * b.transpose();
  const double tr = S.trace();
  if (!(tr > 0.0) || !std::isfinite(tr)) return std::nullopt;
  return Matrix(S * (static_cast<double>(d) / tr));
}

Result estimate(const DataMatrix& X, Index d_s, const Config& config) {
  if (config.outer_iters < 1) throw Error(Errc::configuration, "imak: outer_iters must be >= 1");
  if (config.sigma2_grid.empty()) throw Error(Errc::configuration, "imak: empty sigma2 grid");
  if (d_s < 1 || d_s >= X.cols()) throw Error(Errc::dimension, "imak: d_s out of range");

  const auto whitening = dataset::center_whiten(X);
  const Matrix& Y = whitening.whitened;
  const Index d = Y.cols();
  const double n = static_cast<double>(Y.rows());

  Result result;
  result.metric = Matrix::Identity(d, d);
  for (int iter = 0; iter < config.outer_iters; ++iter) {
    std::vector<Vector> betas;
    betas.reserve(config.sigma2_grid.size());
    for (double sigma2 : config.sigma2_grid) {
      const KernelState state = build_kernel(Y, result.metric, sigma2);
      const auto m = kernels::parallel::imak_moments(Y, state.K, state.metric, sigma2);
      Matrix G = m.second - m.linear.transpose() * m.linear / (n * n);
      const AlphaSolution sol = solve_alpha_low_rank(m.linear, G);
      result.etas.push_back(sol.eta);
      betas.push_back(m.linear * sol.alpha / n);
    }
    if (auto M = metric_update(betas, d)) {
      result.metric = std::move(*M);
    } else {
      result.metric = Matrix::Identity(d, d);
      result.fallback = true;
    }
    result.traces.push_back(result.metric.trace());
    result.betas = std::move(betas);
  }

  Matrix scatter = Matrix::Zero(d, d);
  for (const auto& b : result.betas) scatter.noalias() += b * b.transpose();
  const Subspace whitened = top_eigenspace(scatter, d_s, Frame::whitened);
  result.subspace = lsngca::pull_back(whitened, whitening.whitener);
  return result;
}

Subspace run_imak(const DataMatrix& X, Index d_s, const Config& config) {
  return estimate(X, d_s, config).subspace;
}

}  // namespace ngca::imak
