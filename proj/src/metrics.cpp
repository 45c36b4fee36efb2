#include "ngca/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "ngca/linalg.hpp"

namespace ngca::metrics {

namespace {

void check_pair(const Subspace& a, const Subspace& b) {
  if (a.frame != b.frame) {
    throw Error(Errc::frame_mismatch, "cannot compare a " + std::string(to_string(a.frame)) +
                                          " subspace with a " + std::string(to_string(b.frame)) + " one");
  }
  if (a.ambient_dim() != b.ambient_dim() || a.dim() != b.dim()) {
    throw Error(Errc::dimension, "subspaces differ in ambient or intrinsic dimension");
  }
  if (a.dim() == 0) throw Error(Errc::dimension, "empty subspace");
}

// Singular values of E^T R clamped to [0, 1].
Vector cosines(const Subspace& a, const Subspace& b) {
  const Matrix cross = a.basis.transpose() * b.basis;
  Eigen::JacobiSVD<Matrix> svd(cross);
  return svd.singularValues().cwiseMax(0.0).cwiseMin(1.0);
}

}  // namespace

double subspace_error(const Subspace& estimate, const Subspace& reference) {
  check_pair(estimate, reference);
  const double captured = (reference.basis.transpose() * estimate.basis).squaredNorm();
  const double e = 1.0 - captured / static_cast<double>(estimate.dim());
  return std::clamp(e, 0.0, 1.0);
}

double subspace_distance(const Subspace& estimate, const Subspace& reference) {
  check_pair(estimate, reference);
  const Vector s = cosines(estimate, reference);
  const double value = 2.0 * static_cast<double>(estimate.dim()) - 2.0 * s.sum();
  return std::sqrt(std::max(0.0, value));
}

Vector principal_angles(const Subspace& estimate, const Subspace& reference) {
  check_pair(estimate, reference);
  Vector c = cosines(estimate, reference);
  Vector angles(c.size());
  for (Index i = 0; i < c.size(); ++i) angles(i) = std::acos(c(i));
  std::sort(angles.data(), angles.data() + angles.size());
  return angles;
}

Subspace coordinate_subspace(Index d_x, Index d_s, Frame frame) {
  if (d_s < 1 || d_s > d_x) throw Error(Errc::dimension, "coordinate_subspace: bad dimensions");
  Subspace s;
  s.frame = frame;
  s.basis = Matrix::Identity(d_x, d_s);
  return s;
}

Subspace pca_baseline(const DataMatrix& X, Index d_s) {
  if (X.rows() < 2) throw Error(Errc::empty_input, "pca_baseline: need at least two samples");
  require_finite(X, "data matrix");
  const Matrix centred = X.rowwise() - X.colwise().mean();
  const Matrix cov = centred.transpose() * centred / static_cast<double>(X.rows());
  return top_eigenspace(cov, d_s, Frame::original);
}

}  // namespace ngca::metrics
