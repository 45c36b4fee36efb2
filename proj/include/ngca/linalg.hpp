#pragma once

#include "ngca/common.hpp"

namespace ngca {

/// Symmetric matrix together with its eigen-decomposition, eigenvalues in
/// descending order.
struct SymmetricEigen {
  Matrix matrix;
  Vector values;
  Matrix vectors;
};

SymmetricEigen symmetric_eigen(const Matrix& S);

// Eigen-gaps at or below this fraction of the spectral radius are reported as
// degenerate splits.
inline constexpr double kDegenerateGapTolerance = 1e-12;

/// Span of the eigenvectors for the d_s largest eigenvalues, descending.
/// Each column is signed so that its largest-magnitude entry is positive.
Subspace top_eigenspace(const SymmetricEigen& eig, Index d_s, Frame frame);
Subspace top_eigenspace(const Matrix& S, Index d_s, Frame frame);

/// Orthonormal basis of span(A) via thin Householder QR, columns sign-fixed.
/// Throws Errc::rank_deficiency when A has (numerically) dependent columns.
Matrix orthonormalize(const Matrix& A);

/// Flips each column so its largest-magnitude entry is positive.
void fix_column_signs(Matrix& basis);

/// Orthogonal projector basis * basis^T for an orthonormal basis.
Matrix projector(const Matrix& basis);

}  // namespace ngca
