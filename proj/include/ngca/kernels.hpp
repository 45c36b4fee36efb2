#pragma once

// Data-parallel inner loops. Every kernel exists twice with the same
// signature: `serial` is the straightforward reference used by the tests and
// the benchmark, `parallel` is the OpenMP version the algorithms call.
// Parallel kernels never reduce across threads in a thread-count dependent
// order, so their results do not depend on OMP_NUM_THREADS.

#include "ngca/common.hpp"

namespace ngca::kernels {

/// Gaussian-derivative basis evaluated at every sample for one output
/// coordinate j. values(i,k) = psi_kj(x_i), partials(i,k) = d/dx^(j) psi_kj(x_i).
struct BasisEvaluation {
  Matrix values;
  Matrix partials;
};

/// Row sum of (y_i r_i - r'_i omega) and the raw sum of squared norms of
/// the same summands.
struct BetaStatistics {
  Vector sum;
  double sum_sq_norm = 0.0;
};

/// Pieces of the IMAK Rayleigh quotient. With a_r = diag(Y_r) K - dK_r:
///   second = (1/n) sum_r a_r^T a_r            (equals G + F)
///   linear.row(r) = e_r^T Y K - 1^T dK_r      (so F = linear^T linear / n^2)
struct ImakMoments {
  Matrix second;
  Matrix linear;
};

namespace serial {

// ||x_i - c_k||^2 via the expanded form, clamped at zero.
Matrix squared_distances(const Matrix& X, const Matrix& centers);
BasisEvaluation gaussian_derivative_basis(const Matrix& X, const Matrix& centers,
                                          const Matrix& sq_dist, double sigma, Index j);
// A^T A accumulated over rows.
Matrix gram(const Eigen::Ref<const Matrix>& A);
// K_ij = exp(-(y_i - y_j)^T M (y_i - y_j) / (2 sigma2)).
Matrix gaussian_gram(const Matrix& Y, const Matrix& metric, double sigma2);
BetaStatistics beta_statistics(const Matrix& Y, const Vector& r, const Vector& r_prime,
                               const Vector& omega);
ImakMoments imak_moments(const Matrix& Y, const Matrix& K, const Matrix& metric, double sigma2);

}  // namespace serial

namespace parallel {

Matrix squared_distances(const Matrix& X, const Matrix& centers);
BasisEvaluation gaussian_derivative_basis(const Matrix& X, const Matrix& centers,
                                          const Matrix& sq_dist, double sigma, Index j);
Matrix gram(const Eigen::Ref<const Matrix>& A);
Matrix gaussian_gram(const Matrix& Y, const Matrix& metric, double sigma2);
BetaStatistics beta_statistics(const Matrix& Y, const Vector& r, const Vector& r_prime,
                               const Vector& omega);
ImakMoments imak_moments(const Matrix& Y, const Matrix& K, const Matrix& metric, double sigma2);

}  // namespace parallel

// Number of threads the parallel kernels will use (1 without OpenMP).
int max_threads();

}  // namespace ngca::kernels
