#pragma once

// Multi-index projection pursuit. For whitened data every smooth h gives
//   beta(h) = E[y h(y) - grad h(y)],
// which lies in the non-Gaussian index space; MIPP collects many such
// vectors for ridge functions h(y) = r(omega^T y) and keeps their principal
// subspace.

#include <string_view>
#include <vector>

#include "ngca/common.hpp"

namespace ngca::mipp {

enum class Profile { linear, pow3, tanh, fourier_sin, fourier_cos };

std::string_view to_string(Profile p);
Profile profile_from_string(std::string_view text);

struct IndexFunction {
  Vector omega;  // unit norm
  Profile profile = Profile::pow3;
  double param = 1.0;

  double r(double z) const;
  double r_prime(double z) const;
};

struct BetaVector {
  Vector raw;
  Vector normalized;
  double informative_norm = 0.0;
  bool dropped = false;
  // Raw sum over samples of ||y_i h(y_i) - grad h(y_i)||^2.
  double sum_sq_norm = 0.0;
};

/// raw = mean_i [y_i r(omega^T y_i) - r'(omega^T y_i) omega].
BetaVector beta_hat(const Matrix& Y, const IndexFunction& h);

/// Divides raw by sqrt(sum_i ||y_i h - grad h||^2 - ||raw||^2). A
/// non-positive radicand marks the vector dropped.
BetaVector normalize(const Matrix& Y, const IndexFunction& h, const BetaVector& raw);

/// `count` seeded random unit vectors, each refined by up to `iters`
/// FastICA (tanh) fixed-point steps. Returned as columns.
Matrix candidate_directions(const Matrix& Y, int count, int iters, Seed seed);

struct ProfileSpec {
  Profile profile = Profile::pow3;
  std::vector<double> params{1.0};
};

struct Config {
  std::vector<ProfileSpec> family;
  int k_dir = 50;
  int iters = 10;

  /// pow3; tanh(a), sin(b z), cos(b z) for a, b in {0.5, 1, 1.5, 2, 2.5};
  /// 50 directions with 10 refinement steps each.
  static Config defaults();
  std::size_t function_count() const;
};

struct Result {
  Subspace subspace;
  std::vector<BetaVector> betas;
  std::size_t dropped = 0;
};

Result estimate(const DataMatrix& X, Index d_s, const Config& config, Seed seed);
Subspace run_mipp(const DataMatrix& X, Index d_s, const Config& config, Seed seed);

}  // namespace ngca::mipp
