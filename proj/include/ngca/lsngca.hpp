#pragma once

#include "ngca/common.hpp"
#include "ngca/dataset.hpp"
#include "ngca/linalg.hpp"
#include "ngca/lsldg.hpp"

namespace ngca::lsngca {

/// Second moment of nu_i = g(y_i) + y_i, with its eigen-decomposition.
using GammaMatrix = SymmetricEigen;

GammaMatrix compute_gamma(const Matrix& Y, const Matrix& gradients);

/// Whitened-frame subspace of the d_s leading eigenvectors of Gamma.
Subspace top_eigenspace(const GammaMatrix& gamma, Index d_s);

/// Maps a whitened-frame subspace to the original frame through the
/// whitener and re-orthonormalises.
Subspace pull_back(const Subspace& whitened, const Matrix& whitener);

struct Options {
  lsldg::FitOptions lsldg;
};

struct Result {
  Subspace subspace;  // original frame
  Subspace whitened;
  GammaMatrix gamma;
  lsldg::GradientModel model;
};

Result estimate(const DataMatrix& X, Index d_s, Seed seed, const Options& options = {});

/// Same pipeline with caller-supplied score values at the whitened samples in
/// place of the LSLDG estimate.
Result estimate_with_scores(const dataset::Whitening& whitening, const Matrix& scores, Index d_s);

Subspace run_lsngca(const DataMatrix& X, Index d_s, Seed seed, const Options& options = {});

}  // namespace ngca::lsngca
