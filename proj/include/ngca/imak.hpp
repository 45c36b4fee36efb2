#pragma once

// Iterative metric adaptation for radial kernels. The index function is a
// kernel expansion over the samples,
//   h(y) = sum_i alpha_i exp(-(y - y_i)^T M (y - y_i) / (2 sigma^2)),
// so the informative criterion ||beta||^2 / Var becomes the Rayleigh quotient
// alpha^T F alpha / alpha^T G alpha, maximised by a generalised eigenvector.
// The metric M is then re-estimated from the resulting beta vectors.

#include <optional>
#include <vector>

#include "ngca/common.hpp"

namespace ngca::imak {

struct KernelState {
  Matrix metric;  // M, symmetric PSD
  double sigma2 = 1.0;
  Matrix K;       // Gram matrix, K(i, i) = 1
  // partials[r](i, j) = derivative of k(y, y_j) w.r.t. y_r at y = y_i.
  // Only filled when requested; the production path never materialises it.
  std::vector<Matrix> partials;
};

KernelState build_kernel(const Matrix& Y, const Matrix& metric, double sigma2,
                         bool with_partials = false);

struct FG {
  Matrix F;
  Matrix G;
};

/// F = (1/n^2) sum_r v_r^T v_r and G = (1/n) sum_r a_r^T a_r - F, where
/// v_r = e_r^T Y K - 1^T dK_r and a_r = diag(e_r^T Y) K - dK_r.
FG build_FG(const Matrix& Y, const KernelState& state);

struct AlphaSolution {
  Vector alpha;  // scaled so alpha^T G alpha = 1 (G including the ridge)
  double eta = 0.0;
};

/// Leading generalised eigenpair of F alpha = eta G alpha, with G ridged by
/// 1e-10 trace(G) / n.
AlphaSolution solve_alpha(const Matrix& F, const Matrix& G);

/// Same problem when F = L^T L / n^2 for a short-and-wide L (d x n): the
/// leading eigenpair lives in a d-dimensional subspace.
AlphaSolution solve_alpha_low_rank(const Matrix& L, const Matrix& G);

/// beta = mean_i [y_i h(y_i) - grad h(y_i)] for the kernel expansion h.
Vector beta_from_alpha(const Matrix& Y, const KernelState& state, const Vector& alpha);

/// Analytic gradient of h at an arbitrary point.
Vector h_gradient(const Matrix& Y, const KernelState& state, const Vector& alpha, const Vector& y);
double h_value(const Matrix& Y, const KernelState& state, const Vector& alpha, const Vector& y);

/// Rescales sum_k beta_k beta_k^T to trace d. Returns nullopt if the scatter
/// vanishes.
std::optional<Matrix> metric_update(const std::vector<Vector>& betas, Index d);

struct Config {
  std::vector<double> sigma2_grid{0.5, 1.0, 2.0, 4.0};
  int outer_iters = 10;
};

struct Result {
  Subspace subspace;
  Matrix metric;
  std::vector<Vector> betas;       // from the final outer iteration
  std::vector<double> etas;        // every (iteration, scale) in order
  std::vector<double> traces;      // trace(M) after each update
  bool fallback = false;           // some update had vanishing betas
};

Result estimate(const DataMatrix& X, Index d_s, const Config& config);
Subspace run_imak(const DataMatrix& X, Index d_s, const Config& config);

}  // namespace ngca::imak
