#include <cmath>

#include "ngca/kernels.hpp"

namespace ngca::kernels::serial {

Matrix squared_distances(const Matrix& X, const Matrix& centers) {
  const Index n = X.rows();
  const Index b = centers.rows();
  const Index d = X.cols();
  Matrix out(n, b);
  for (Index i = 0; i < n; ++i) {
    for (Index k = 0; k < b; ++k) {
      double xx = 0.0, xc = 0.0, cc = 0.0;
      for (Index c = 0; c < d; ++c) {
        xx += X(i, c) * X(i, c);
        xc += X(i, c) * centers(k, c);
        cc += centers(k, c) * centers(k, c);
      }
      out(i, k) = std::max(0.0, xx - 2.0 * xc + cc);
    }
  }
  return out;
}

BasisEvaluation gaussian_derivative_basis(const Matrix& X, const Matrix& centers,
                                          const Matrix& sq_dist, double sigma, Index j) {
  const Index n = X.rows();
  const Index b = centers.rows();
  const double s2 = sigma * sigma;
  const double s4 = s2 * s2;
  BasisEvaluation out{Matrix(n, b), Matrix(n, b)};
  for (Index i = 0; i < n; ++i) {
    for (Index k = 0; k < b; ++k) {
      const double e = std::exp(-sq_dist(i, k) / (2.0 * s2));
      const double diff = centers(k, j) - X(i, j);
      out.values(i, k) = diff / s2 * e;
      out.partials(i, k) = e * (diff * diff / s4 - 1.0 / s2);
    }
  }
  return out;
}

Matrix gram(const Eigen::Ref<const Matrix>& A) {
  const Index n = A.rows();
  const Index m = A.cols();
  Matrix out = Matrix::Zero(m, m);
  for (Index i = 0; i < n; ++i) {
    for (Index a = 0; a < m; ++a) {
      for (Index c = a; c < m; ++c) {
        out(a, c) += A(i, a) * A(i, c);
      }
    }
  }
  for (Index a = 0; a < m; ++a) {
    for (Index c = 0; c < a; ++c) out(a, c) = out(c, a);
  }
  return out;
}

Matrix gaussian_gram(const Matrix& Y, const Matrix& metric, double sigma2) {
  const Index n = Y.rows();
  Matrix K(n, n);
  for (Index i = 0; i < n; ++i) {
    K(i, i) = 1.0;
    for (Index j = i + 1; j < n; ++j) {
      const Vector diff = (Y.row(i) - Y.row(j)).transpose();
      const double q = std::max(0.0, diff.dot(metric * diff));
      K(i, j) = K(j, i) = std::exp(-q / (2.0 * sigma2));
    }
  }
  return K;
}

BetaStatistics beta_statistics(const Matrix& Y, const Vector& r, const Vector& r_prime,
                               const Vector& omega) {
  BetaStatistics out{Vector::Zero(Y.cols()), 0.0};
  for (Index i = 0; i < Y.rows(); ++i) {
    const Vector z = Y.row(i).transpose() * r(i) - r_prime(i) * omega;
    out.sum += z;
    out.sum_sq_norm += z.squaredNorm();
  }
  return out;
}

ImakMoments imak_moments(const Matrix& Y, const Matrix& K, const Matrix& metric, double sigma2) {
  const Index n = Y.rows();
  const Index d = Y.cols();
  const Matrix MY = Y * metric;  // row i holds (M y_i)^T
  ImakMoments out{Matrix::Zero(n, n), Matrix(d, n)};
  Matrix dK(n, n);
  for (Index r = 0; r < d; ++r) {
    // derivative of k(y, y_j) w.r.t. the r-th coordinate of y, at y = y_i
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        dK(i, j) = -(MY(i, r) - MY(j, r)) / sigma2 * K(i, j);
      }
    }
    const Matrix A = Y.col(r).asDiagonal() * K - dK;
    out.second += A.transpose() * A;
    out.linear.row(r) = Y.col(r).transpose() * K - Vector::Ones(n).transpose() * dK;
  }
  out.second /= static_cast<double>(n);
  return out;
}

}  // namespace ngca::kernels::serial
