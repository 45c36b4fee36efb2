#include "ngca/lsldg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "ngca/kernels.hpp"

namespace ngca::lsldg {

namespace {

std::vector<Index> shuffled_indices(Index n, Seed seed) {
  std::vector<Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Index{0});
  Rng rng = make_rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  return idx;
}

Matrix take_rows(const Matrix& Y, const std::vector<Index>& idx, std::size_t count) {
  Matrix out(static_cast<Index>(count), Y.cols());
  for (std::size_t i = 0; i < count; ++i) out.row(static_cast<Index>(i)) = Y.row(idx[i]);
  return out;
}

bool better(const Selection& cand, const Selection& best) {
  if (cand.score != best.score) return cand.score < best.score;
  if (cand.lambda != best.lambda) return cand.lambda > best.lambda;
  return cand.sigma > best.sigma;
}

}  // namespace

BasisValues eval_basis(const Matrix& centers, double sigma, const Vector& x, Index j) {
  if (j < 0 || j >= centers.cols()) {
    throw Error(Errc::dimension, "eval_basis: coordinate " + std::to_string(j) + " out of range");
  }
  if (x.size() != centers.cols()) throw Error(Errc::dimension, "eval_basis: point dimension mismatch");
  const Index b = centers.rows();
  const double s2 = sigma * sigma;
  BasisValues out{Vector(b), Vector(b)};
  for (Index k = 0; k < b; ++k) {
    const Vector diff = centers.row(k).transpose() - x;
    const double e = std::exp(-diff.squaredNorm() / (2.0 * s2));
    out.values(k) = diff(j) / s2 * e;
    out.partials(k) = e * (diff(j) * diff(j) / (s2 * s2) - 1.0 / s2);
  }
  return out;
}

MomentPair moments(const Matrix& Y, const Matrix& centers, double sigma, Index j) {
  const Index n = Y.rows();
  if (n < 1) throw Error(Errc::empty_input, "moments: no samples");
  if (Y.cols() != centers.cols()) throw Error(Errc::dimension, "moments: dimension mismatch");
  if (j < 0 || j >= Y.cols()) throw Error(Errc::dimension, "moments: coordinate out of range");
  const Matrix sq = kernels::parallel::squared_distances(Y, centers);
  const auto basis = kernels::parallel::gaussian_derivative_basis(Y, centers, sq, sigma, j);
  const double inv_n = 1.0 / static_cast<double>(n);
  return MomentPair{kernels::parallel::gram(basis.values) * inv_n,
                    basis.partials.colwise().sum().transpose() * inv_n};
}

Vector solve_theta(const MomentPair& m, double lambda) {
  if (!(lambda > 0.0)) throw Error(Errc::configuration, "solve_theta: lambda must be positive");
  require_finite(m.G, "moment matrix G");
  require_finite(m.h, "moment vector h");
  const Index b = m.G.rows();
  Matrix A = m.G;
  A.diagonal().array() += lambda;
  Eigen::LLT<Matrix> llt(A);
  if (llt.info() != Eigen::Success) {
    throw Error(Errc::numeric, "solve_theta: G + lambda I is not positive definite");
  }
  Vector theta = llt.solve(-m.h);
  // one step of iterative refinement
  const Vector residual = -m.h - A * theta;
  theta += llt.solve(residual);
  if (!theta.allFinite() || theta.size() != b) {
    throw Error(Errc::numeric, "solve_theta: non-finite solution");
  }
  return theta;
}

double empirical_objective(const MomentPair& m, const Vector& theta) {
  return theta.dot(m.G * theta) + 2.0 * theta.dot(m.h);
}

std::vector<double> log_space(double lo, double hi, int count) {
  std::vector<double> out(static_cast<std::size_t>(count));
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (int k = 0; k < count; ++k) {
    out[static_cast<std::size_t>(k)] = std::pow(10.0, a + (b - a) * k / (count - 1));
  }
  return out;
}

Grid Grid::defaults() { return Grid{log_space(1e-1, 10.0, 10), log_space(1e-5, 10.0, 10)}; }

std::vector<Selection> cross_validate(const Matrix& Y, const Matrix& centers, const Grid& grid,
                                      int folds, Seed seed, const std::vector<Index>& center_rows) {
  const Index n = Y.rows();
  const Index d = Y.cols();
  if (grid.sigmas.empty() || grid.lambdas.empty()) {
    throw Error(Errc::configuration, "cross_validate: empty parameter grid");
  }
  if (folds < 2) throw Error(Errc::configuration, "cross_validate: need at least two folds");
  if (n < folds) {
    throw Error(Errc::configuration, "cross_validate: " + std::to_string(folds) +
                                         " folds leave a fold with zero samples (n=" +
                                         std::to_string(n) + ")");
  }
  if (centers.cols() != d) throw Error(Errc::dimension, "cross_validate: dimension mismatch");
  if (!center_rows.empty() && static_cast<Index>(center_rows.size()) != centers.rows()) {
    throw Error(Errc::dimension, "cross_validate: center_rows must list one row per center");
  }

  const auto order = shuffled_indices(n, seed);
  const Matrix Yp = take_rows(Y, order, static_cast<std::size_t>(n));
  std::vector<Index> bounds(static_cast<std::size_t>(folds) + 1);
  for (int f = 0; f <= folds; ++f) bounds[static_cast<std::size_t>(f)] = n * f / folds;

  const Matrix sq = kernels::parallel::squared_distances(Yp, centers);
  const Index b = centers.rows();

  // basis indices kept while fold f is held out
  std::vector<std::vector<Index>> kept(static_cast<std::size_t>(folds));
  {
    std::vector<int> fold_of(static_cast<std::size_t>(n), -1);
    for (int f = 0; f < folds; ++f) {
      for (Index p = bounds[static_cast<std::size_t>(f)]; p < bounds[static_cast<std::size_t>(f) + 1]; ++p) {
        fold_of[static_cast<std::size_t>(order[static_cast<std::size_t>(p)])] = f;
      }
    }
    for (int f = 0; f < folds; ++f) {
      for (Index k = 0; k < b; ++k) {
        const bool own = !center_rows.empty() && center_rows[static_cast<std::size_t>(k)] >= 0 &&
                         center_rows[static_cast<std::size_t>(k)] < n &&
                         fold_of[static_cast<std::size_t>(center_rows[static_cast<std::size_t>(k)])] == f;
        if (!own) kept[static_cast<std::size_t>(f)].push_back(k);
      }
    }
  }
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<Selection> best(static_cast<std::size_t>(d), Selection{0.0, 0.0, inf});
  std::vector<bool> found(static_cast<std::size_t>(d), false);

  std::vector<Matrix> fold_G(static_cast<std::size_t>(folds));
  std::vector<Vector> fold_h(static_cast<std::size_t>(folds));

  for (double sigma : grid.sigmas) {
    for (Index j = 0; j < d; ++j) {
      const auto basis = kernels::parallel::gaussian_derivative_basis(Yp, centers, sq, sigma, j);
      Matrix G_all = Matrix::Zero(b, b);
      Vector h_all = Vector::Zero(b);
      for (int f = 0; f < folds; ++f) {
        const Index begin = bounds[static_cast<std::size_t>(f)];
        const Index rows = bounds[static_cast<std::size_t>(f) + 1] - begin;
        fold_G[static_cast<std::size_t>(f)] = kernels::parallel::gram(basis.values.middleRows(begin, rows));
        fold_h[static_cast<std::size_t>(f)] = basis.partials.middleRows(begin, rows).colwise().sum().transpose();
        G_all += fold_G[static_cast<std::size_t>(f)];
        h_all += fold_h[static_cast<std::size_t>(f)];
      }

      std::vector<double> score(grid.lambdas.size(), 0.0);
      for (int f = 0; f < folds; ++f) {
        const auto fi = static_cast<std::size_t>(f);
        const double n_val = static_cast<double>(bounds[fi + 1] - bounds[fi]);
        const double n_train = static_cast<double>(n) - n_val;
        const auto& ks = kept[fi];
        const Matrix G_train = (G_all - fold_G[fi])(ks, ks);
        const Vector h_train = (h_all - fold_h[fi])(ks);
        const MomentPair train{G_train / n_train, h_train / n_train};
        const MomentPair held{fold_G[fi](ks, ks) / n_val, fold_h[fi](ks) / n_val};
        for (std::size_t l = 0; l < grid.lambdas.size(); ++l) {
          double value = inf;
          try {
            value = empirical_objective(held, solve_theta(train, grid.lambdas[l]));
          } catch (const Error&) {
            value = inf;
          }
          score[l] += value / folds;
        }
      }

      for (std::size_t l = 0; l < grid.lambdas.size(); ++l) {
        if (!std::isfinite(score[l])) continue;
        const Selection cand{sigma, grid.lambdas[l], score[l]};
        auto& slot = best[static_cast<std::size_t>(j)];
        if (!found[static_cast<std::size_t>(j)] || better(cand, slot)) {
          slot = cand;
          found[static_cast<std::size_t>(j)] = true;
        }
      }
    }
  }

  for (Index j = 0; j < d; ++j) {
    if (!found[static_cast<std::size_t>(j)]) {
      throw Error(Errc::fit, "cross_validate: no finite hold-out score for coordinate " +
                                 std::to_string(j));
    }
  }
  return best;
}

GradientModel fit(const Matrix& Y, Seed seed, const FitOptions& options) {
  const Index n = Y.rows();
  const Index d = Y.cols();
  if (n < 5) throw Error(Errc::empty_input, "lsldg::fit: need at least 5 samples");
  require_finite(Y, "whitened data");

  const Index b = std::min(n, kMaxCenters);
  const auto picks = shuffled_indices(n, derive_seed(seed, 0x63656e74ULL));
  GradientModel model;
  model.centers = take_rows(Y, picks, static_cast<std::size_t>(b));

  const std::vector<Index> center_rows(picks.begin(), picks.begin() + b);
  const auto chosen = cross_validate(Y, model.centers, options.grid, options.folds,
                                     derive_seed(seed, 0x666f6c64ULL), center_rows);
  model.sigma.resize(d);
  model.lambda.resize(d);
  model.theta.resize(b, d);
  const Matrix sq = kernels::parallel::squared_distances(Y, model.centers);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (Index j = 0; j < d; ++j) {
    const auto& sel = chosen[static_cast<std::size_t>(j)];
    model.sigma(j) = sel.sigma;
    model.lambda(j) = sel.lambda;
    const auto basis = kernels::parallel::gaussian_derivative_basis(Y, model.centers, sq, sel.sigma, j);
    const MomentPair m{kernels::parallel::gram(basis.values) * inv_n,
                       basis.partials.colwise().sum().transpose() * inv_n};
    model.theta.col(j) = solve_theta(m, sel.lambda);
  }
  return model;
}

Matrix predict(const GradientModel& model, const Matrix& Y) {
  if (Y.cols() != model.dims()) {
    throw Error(Errc::dimension, "predict: points have " + std::to_string(Y.cols()) +
                                     " dims, model has " + std::to_string(model.dims()));
  }
  const Matrix sq = kernels::parallel::squared_distances(Y, model.centers);
  Matrix out(Y.rows(), model.dims());
  for (Index j = 0; j < model.dims(); ++j) {
    const auto basis =
        kernels::parallel::gaussian_derivative_basis(Y, model.centers, sq, model.sigma(j), j);
    out.col(j) = basis.values * model.theta.col(j);
  }
  return out;
}

}  // namespace ngca::lsldg
