#pragma once

// Least-squares log-density gradient estimation. Each coordinate j of
// grad log p is fitted independently with the model
//   g_j(x) = sum_k theta_kj psi_kj(x),
//   psi_kj(x) = ([c_k - x]_j / sigma_j^2) exp(-||x - c_k||^2 / (2 sigma_j^2)),
// by minimising the integration-by-parts form of the squared error
//   J(g_j) = mean_i [ g_j(x_i)^2 + 2 d/dx_j g_j(x_i) ]
// plus a ridge penalty. The minimiser is available in closed form.

#include <vector>

#include "ngca/common.hpp"

namespace ngca::lsldg {

inline constexpr Index kMaxCenters = 100;

struct BasisValues {
  Vector values;
  Vector partials;  // derivative of each basis function along coordinate j
};

/// All b basis functions of coordinate j at a single point x.
BasisValues eval_basis(const Matrix& centers, double sigma, const Vector& x, Index j);

/// Empirical moments of coordinate j's basis: G = mean psi psi^T, h = mean d_j psi.
struct MomentPair {
  Matrix G;
  Vector h;
};

MomentPair moments(const Matrix& Y, const Matrix& centers, double sigma, Index j);

/// Minimiser of theta^T G theta + 2 theta^T h + lambda ||theta||^2,
/// i.e. theta = -(G + lambda I)^{-1} h.
Vector solve_theta(const MomentPair& m, double lambda);

/// Empirical objective theta^T G theta + 2 theta^T h.
double empirical_objective(const MomentPair& m, const Vector& theta);

struct Grid {
  std::vector<double> sigmas;
  std::vector<double> lambdas;

  /// Ten log-spaced widths in [1e-1, 10] and ten log-spaced ridges in [1e-5, 10].
  static Grid defaults();
};

std::vector<double> log_space(double lo, double hi, int count);

struct Selection {
  double sigma = 0.0;
  double lambda = 0.0;
  double score = 0.0;  // mean hold-out objective
};

/// Per-coordinate (sigma, lambda) chosen by k-fold cross-validation on the
/// hold-out objective. Folds are contiguous blocks of a seeded shuffle; each
/// fold's score counts once regardless of its size. Ties prefer larger lambda,
/// then larger sigma.
///
/// center_rows[k], when given, is the row of Y that center k was copied from.
/// A center is left out of the basis while its own sample is held out, since
/// a held-out point sitting exactly on a center scores -1/sigma^2 for free.
std::vector<Selection> cross_validate(const Matrix& Y, const Matrix& centers, const Grid& grid,
                                      int folds, Seed seed, const std::vector<Index>& center_rows = {});

struct GradientModel {
  Matrix centers;  // b x d
  Vector sigma;    // per coordinate
  Vector lambda;   // per coordinate
  Matrix theta;    // b x d, column j is theta_j

  Index dims() const { return centers.cols(); }
  Index num_basis() const { return centers.rows(); }
};

struct FitOptions {
  Grid grid = Grid::defaults();
  int folds = 5;
};

/// Draws min(n, 100) centers without replacement, cross-validates, and
/// solves theta_j on the full sample.
GradientModel fit(const Matrix& Y, Seed seed, const FitOptions& options = {});

/// n x d matrix of estimated gradients at the rows of Y.
Matrix predict(const GradientModel& model, const Matrix& Y);

}  // namespace ngca::lsldg
