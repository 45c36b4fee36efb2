#include "ngca/linalg.hpp"

#include <cmath>
#include <string>

namespace ngca {

SymmetricEigen symmetric_eigen(const Matrix& S) {
  if (S.rows() != S.cols()) throw Error(Errc::dimension, "symmetric_eigen: matrix is not square");
  require_finite(S, "symmetric matrix");
  SymmetricEigen out;
  out.matrix = 0.5 * (S + S.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(out.matrix);
  if (solver.info() != Eigen::Success) {
    throw Error(Errc::numeric, "symmetric eigendecomposition failed");
  }
  // Eigen returns ascending order.
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

void fix_column_signs(Matrix& basis) {
  for (Index c = 0; c < basis.cols(); ++c) {
    Index arg = 0;
    basis.col(c).cwiseAbs().maxCoeff(&arg);
    if (basis(arg, c) < 0.0) basis.col(c) = -basis.col(c);
  }
}

Subspace top_eigenspace(const SymmetricEigen& eig, Index d_s, Frame frame) {
  const Index d = eig.values.size();
  if (d_s < 1 || d_s > d) {
    throw Error(Errc::dimension, "top_eigenspace: d_s=" + std::to_string(d_s) +
                                     " outside [1, " + std::to_string(d) + "]");
  }
  Subspace out;
  out.frame = frame;
  out.basis = eig.vectors.leftCols(d_s);
  fix_column_signs(out.basis);
  if (d_s < d) {
    const double radius = eig.values.cwiseAbs().maxCoeff();
    const double gap = eig.values(d_s - 1) - eig.values(d_s);
    out.degenerate_gap = !(gap > kDegenerateGapTolerance * radius);
  }
  return out;
}

Subspace top_eigenspace(const Matrix& S, Index d_s, Frame frame) {
  return top_eigenspace(symmetric_eigen(S), d_s, frame);
}

Matrix orthonormalize(const Matrix& A) {
  require_finite(A, "basis");
  const Index k = A.cols();
  Eigen::HouseholderQR<Matrix> qr(A);
  const Matrix R = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  const double scale = A.colwise().norm().maxCoeff();
  for (Index c = 0; c < k; ++c) {
    if (!(std::abs(R(c, c)) > 1e-12 * scale)) {
      throw Error(Errc::rank_deficiency, "orthonormalize: column " + std::to_string(c) +
                                             " is linearly dependent");
    }
  }
  Matrix Q = qr.householderQ() * Matrix::Identity(A.rows(), k);
  fix_column_signs(Q);
  return Q;
}

Matrix projector(const Matrix& basis) { return basis * basis.transpose(); }

}  // namespace ngca
