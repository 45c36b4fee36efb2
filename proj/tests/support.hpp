#pragma once

#include <cmath>
#include <random>

#include "ngca/common.hpp"

namespace ngca::testing {

inline Matrix random_matrix(Index rows, Index cols, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index c = 0; c < cols; ++c)
    for (Index r = 0; r < rows; ++r) m(r, c) = z(rng);
  return m;
}

// Haar-ish orthonormal columns via QR of a Gaussian matrix.
inline Matrix random_orthonormal(Index rows, Index cols, std::uint64_t seed) {
  const Matrix A = random_matrix(rows, cols, seed);
  Eigen::HouseholderQR<Matrix> qr(A);
  return qr.householderQ() * Matrix::Identity(rows, cols);
}

inline Matrix random_spd(Index d, std::uint64_t seed, double floor = 0.5) {
  const Matrix A = random_matrix(d, d, seed);
  Matrix S = A * A.transpose() / static_cast<double>(d);
  S.diagonal().array() += floor;
  return S;
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

inline Subspace span_of(const Matrix& basis, Frame frame = Frame::original) {
  return Subspace{basis, frame, false};
}

}  // namespace ngca::testing
