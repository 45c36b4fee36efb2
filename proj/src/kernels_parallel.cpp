#include <algorithm>
#include <cmath>
#include <vector>

#ifdef NGCA_HAVE_OPENMP
#include <omp.h>
#endif

#include "ngca/kernels.hpp"

namespace ngca::kernels {

int max_threads() {
#ifdef NGCA_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace parallel {

namespace {

// Fixed chunking keeps reductions independent of the thread count.
constexpr Index kChunkRows = 512;

}  // namespace

Matrix squared_distances(const Matrix& X, const Matrix& centers) {
  const Index n = X.rows();
  const Index b = centers.rows();
  const Vector xx = X.rowwise().squaredNorm();
  const Vector cc = centers.rowwise().squaredNorm();
  Matrix out = X * centers.transpose();
#pragma omp parallel for schedule(static)
  for (Index k = 0; k < b; ++k) {
    for (Index i = 0; i < n; ++i) {
      out(i, k) = std::max(0.0, xx(i) - 2.0 * out(i, k) + cc(k));
    }
  }
  return out;
}

BasisEvaluation gaussian_derivative_basis(const Matrix& X, const Matrix& centers,
                                          const Matrix& sq_dist, double sigma, Index j) {
  const Index n = X.rows();
  const Index b = centers.rows();
  const double s2 = sigma * sigma;
  const double inv_s2 = 1.0 / s2;
  const double inv_s4 = inv_s2 * inv_s2;
  const double inv_two_s2 = 0.5 * inv_s2;
  BasisEvaluation out{Matrix(n, b), Matrix(n, b)};
#pragma omp parallel for schedule(static)
  for (Index k = 0; k < b; ++k) {
    const double ck = centers(k, j);
    for (Index i = 0; i < n; ++i) {
      const double e = std::exp(-sq_dist(i, k) * inv_two_s2);
      const double diff = ck - X(i, j);
      out.values(i, k) = diff * inv_s2 * e;
      out.partials(i, k) = e * (diff * diff * inv_s4 - inv_s2);
    }
  }
  return out;
}

Matrix gram(const Eigen::Ref<const Matrix>& A) {
  const Index m = A.cols();
  Matrix out(m, m);
#pragma omp parallel for schedule(dynamic, 1)
  for (Index a = 0; a < m; ++a) {
    for (Index c = a; c < m; ++c) {
      out(a, c) = A.col(a).dot(A.col(c));
    }
  }
  for (Index a = 0; a < m; ++a) {
    for (Index c = 0; c < a; ++c) out(a, c) = out(c, a);
  }
  return out;
}

Matrix gaussian_gram(const Matrix& Y, const Matrix& metric, double sigma2) {
  const Index n = Y.rows();
  const Matrix MY = Y * metric;
  const Matrix cross = MY * Y.transpose();
  const Vector q = cross.diagonal();
  const double scale = -0.5 / sigma2;
  Matrix K(n, n);
#pragma omp parallel for schedule(dynamic, 16)
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < j; ++i) {
      const double dist = std::max(0.0, q(i) + q(j) - cross(i, j) - cross(j, i));
      K(i, j) = std::exp(scale * dist);
    }
    K(j, j) = 1.0;
  }
  for (Index j = 0; j < n; ++j) {
    for (Index i = j + 1; i < n; ++i) K(i, j) = K(j, i);
  }
  return K;
}

BetaStatistics beta_statistics(const Matrix& Y, const Vector& r, const Vector& r_prime,
                               const Vector& omega) {
  const Index n = Y.rows();
  const Index d = Y.cols();
  const Index chunks = (n + kChunkRows - 1) / kChunkRows;
  Matrix partial_sums = Matrix::Zero(d, chunks);
  Vector partial_sq = Vector::Zero(chunks);
#pragma omp parallel for schedule(static)
  for (Index c = 0; c < chunks; ++c) {
    const Index begin = c * kChunkRows;
    const Index end = std::min(n, begin + kChunkRows);
    Vector z(d);
    for (Index i = begin; i < end; ++i) {
      z = Y.row(i).transpose() * r(i) - r_prime(i) * omega;
      partial_sums.col(c) += z;
      partial_sq(c) += z.squaredNorm();
    }
  }
  BetaStatistics out{Vector::Zero(d), 0.0};
  for (Index c = 0; c < chunks; ++c) {
    out.sum += partial_sums.col(c);
    out.sum_sq_norm += partial_sq(c);
  }
  return out;
}

// Expanding a_r = D_r K - K diag(m_r) / sigma2 with D_r = diag(y_r + m_r / sigma2)
// and summing over r turns the d_x dense products into three:
//   sum_r a_r^T a_r = K diag(s) K - (Q + Q^T) / sigma2 + (K K) o (MY MY^T) / sigma2^2
// where s_k = sum_r D_r(k)^2 and Q = K (K o (D MY^T)).
ImakMoments imak_moments(const Matrix& Y, const Matrix& K, const Matrix& metric, double sigma2) {
  const Index n = Y.rows();
  const Matrix MY = Y * metric;
  const Matrix D = Y + MY / sigma2;
  const Vector s = D.rowwise().squaredNorm();

  Matrix KC = D * MY.transpose();
#pragma omp parallel for schedule(static)
  for (Index j = 0; j < n; ++j) {
    KC.col(j).array() *= K.col(j).array();
  }
  const Matrix Q = K * KC;

  Matrix KK = K * K;
  const Matrix MM = MY * MY.transpose();
  const Matrix scaledK = s.asDiagonal() * K;
  Matrix second = K * scaledK;

  const double inv_s2 = 1.0 / sigma2;
  const double inv_s4 = inv_s2 * inv_s2;
  const double inv_n = 1.0 / static_cast<double>(n);
#pragma omp parallel for schedule(static)
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      second(i, j) = (second(i, j) - inv_s2 * (Q(i, j) + Q(j, i)) + inv_s4 * KK(i, j) * MM(i, j)) * inv_n;
    }
  }
  second = 0.5 * (second + second.transpose()).eval();

  const Vector colsum = K.colwise().sum().transpose();
  Matrix linear = (K * D).transpose();
  linear -= inv_s2 * (MY.transpose() * colsum.asDiagonal());
  return ImakMoments{std::move(second), std::move(linear)};
}

}  // namespace parallel
}  // namespace ngca::kernels
