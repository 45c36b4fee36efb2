#include "ngca/lsngca.hpp"

#include <string>

#include "ngca/kernels.hpp"

namespace ngca::lsngca {

GammaMatrix compute_gamma(const Matrix& Y, const Matrix& gradients) {
  if (Y.rows() != gradients.rows() || Y.cols() != gradients.cols()) {
    throw Error(Errc::dimension, "compute_gamma: gradients and samples differ in shape");
  }
  if (Y.rows() == 0) throw Error(Errc::empty_input, "compute_gamma: no samples");
  const Matrix nu = gradients + Y;
  const Matrix gamma = kernels::parallel::gram(nu) / static_cast<double>(Y.rows());
  return symmetric_eigen(gamma);
}

Subspace top_eigenspace(const GammaMatrix& gamma, Index d_s) {
  return ngca::top_eigenspace(gamma, d_s, Frame::whitened);
}

Subspace pull_back(const Subspace& whitened, const Matrix& whitener) {
  if (whitened.frame != Frame::whitened) {
    throw Error(Errc::frame_mismatch, "pull_back: input subspace is not in the whitened frame");
  }
  if (whitener.cols() != whitened.ambient_dim()) {
    throw Error(Errc::dimension, "pull_back: whitener does not match subspace dimension");
  }
  Subspace out;
  out.frame = Frame::original;
  out.basis = orthonormalize(whitener * whitened.basis);
  out.degenerate_gap = whitened.degenerate_gap;
  return out;
}

Result estimate_with_scores(const dataset::Whitening& whitening, const Matrix& scores, Index d_s) {
  const Index d = whitening.whitened.cols();
  if (d_s < 1 || d_s >= d) {
    throw Error(Errc::dimension, "lsngca: d_s=" + std::to_string(d_s) + " must lie in [1, " +
                                     std::to_string(d - 1) + "]");
  }
  Result r;
  r.gamma = compute_gamma(whitening.whitened, scores);
  r.whitened = top_eigenspace(r.gamma, d_s);
  r.subspace = pull_back(r.whitened, whitening.whitener);
  return r;
}

Result estimate(const DataMatrix& X, Index d_s, Seed seed, const Options& options) {
  if (d_s < 1 || d_s >= X.cols()) {
    throw Error(Errc::dimension, "lsngca: d_s=" + std::to_string(d_s) + " must lie in [1, " +
                                     std::to_string(X.cols() - 1) + "]");
  }
  const auto whitening = dataset::center_whiten(X);
  auto model = lsldg::fit(whitening.whitened, seed, options.lsldg);
  const Matrix scores = lsldg::predict(model, whitening.whitened);
  Result r = estimate_with_scores(whitening, scores, d_s);
  r.model = std::move(model);
  return r;
}

Subspace run_lsngca(const DataMatrix& X, Index d_s, Seed seed, const Options& options) {
  return estimate(X, d_s, seed, options).subspace;
}

}  // namespace ngca::lsngca
