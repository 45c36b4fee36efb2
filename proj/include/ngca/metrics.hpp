#pragma once

#include "ngca/common.hpp"

namespace ngca::metrics {

/// Mean squared residual of the estimate's basis vectors after projecting
/// onto the reference: 1 - ||R^T E||_F^2 / d_s. In [0, 1].
double subspace_error(const Subspace& estimate, const Subspace& reference);

/// inf over orthonormal bases of ||E - R||_F, which is
/// sqrt(2 d_s - 2 sum_i sigma_i) for the singular values sigma_i of E^T R.
double subspace_distance(const Subspace& estimate, const Subspace& reference);

/// Principal angles in ascending order.
Vector principal_angles(const Subspace& estimate, const Subspace& reference);

/// span{e_1, ..., e_{d_s}} in R^{d_x}.
Subspace coordinate_subspace(Index d_x, Index d_s, Frame frame = Frame::original);

/// Leading d_s eigenvectors of the centred (1/n) covariance of X.
Subspace pca_baseline(const DataMatrix& X, Index d_s);

}  // namespace ngca::metrics
