#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ngca/common.hpp"

namespace ngca::dataset {

// Number of signal coordinates produced by the synthetic generators.
inline constexpr Index kSignalDims = 2;
// Target variance of the Laplace and quartic signal families.
inline constexpr double kSignalVariance = 3.0;

enum class GeneratorKind { gaussian_mixture, super_gaussian, sub_gaussian, mixed_super_sub };

std::string_view to_string(GeneratorKind kind);
GeneratorKind generator_from_string(std::string_view text);

// n x 2 signal draws.
using SignalMatrix = Matrix;

/// Laplace scale alpha with Var = 2 alpha^2 = 3, found by bisection on the
/// numerically integrated second moment.
double laplace_scale();

/// beta in p(s) ~ exp(-s^4 / beta) such that Var(s) = 3, by bisection on the
/// numerically integrated second moment.
double quartic_beta();

/// Inverse-CDF sampler for p(s) ~ exp(-s^4 / beta) on a fixed grid over
/// [-6 sqrt 3, 6 sqrt 3] with linear interpolation between grid nodes.
class QuarticSampler {
 public:
  static constexpr int kGridPoints = 4096;

  explicit QuarticSampler(double beta);

  double operator()(Rng& rng) const;
  double quantile(double u) const;
  double cdf(double s) const;

  double beta() const { return beta_; }

 private:
  double beta_;
  std::vector<double> nodes_;
  std::vector<double> cdf_;
};

SignalMatrix sample_signals(GeneratorKind kind, Index n, Seed seed);

/// Embeds 2-D signals into d_x dimensions: columns 0,1 get N(0, gamma2) noise
/// added, remaining columns are standard normal.
DataMatrix assemble(const SignalMatrix& signals, Index d_x, double gamma2, Seed seed);

struct Whitening {
  Vector mean;
  Matrix covariance;
  // Symmetric inverse square root of covariance.
  Matrix whitener;
  DataMatrix whitened;
};

/// Centres X and applies the symmetric inverse square root of the 1/n
/// covariance.
Whitening center_whiten(const DataMatrix& X);

DataMatrix parse_csv(std::string_view text);
DataMatrix load_csv(const std::filesystem::path& path);
void write_csv(const std::filesystem::path& path, const Matrix& values);

}  // namespace ngca::dataset
