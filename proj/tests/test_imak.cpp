#include <doctest.h>

#include <cmath>

#include "ngca/dataset.hpp"
#include "ngca/imak.hpp"
#include "ngca/metrics.hpp"
#include "support.hpp"

using namespace ngca;

namespace {

double kernel(const Vector& a, const Vector& b, const Matrix& M, double sigma2) {
  const Vector d = a - b;
  return std::exp(-d.dot(M * d) / (2.0 * sigma2));
}

// y h(y) - grad h(y) at every sample, with h and its gradient written out.
Matrix summands(const Matrix& Y, const Matrix& M, double sigma2, const Vector& alpha) {
  const Index n = Y.rows();
  Matrix s(n, Y.cols());
  for (Index i = 0; i < n; ++i) {
    const Vector y = Y.row(i).transpose();
    double h = 0.0;
    Vector grad = Vector::Zero(Y.cols());
    for (Index j = 0; j < n; ++j) {
      const Vector yj = Y.row(j).transpose();
      const double k = kernel(y, yj, M, sigma2);
      h += alpha(j) * k;
      grad -= alpha(j) * k / sigma2 * (M * (y - yj));
    }
    s.row(i) = (y * h - grad).transpose();
  }
  return s;
}

Matrix toy_data(Index n, std::uint64_t seed) {
  const auto S = dataset::sample_signals(dataset::GeneratorKind::gaussian_mixture, n, Seed{seed});
  return dataset::center_whiten(dataset::assemble(S, 4, 0.0, Seed{seed + 1})).whitened;
}

}  // namespace

TEST_SUITE("imak") {

TEST_CASE("kernel diagonal and the e^-1 pair") {
  Matrix Y(2, 2);
  Y << 0.0, 0.0, 1.0, 1.0;
  const auto s = imak::build_kernel(Y, Matrix::Identity(2, 2), 1.0, true);
  CHECK(s.K(0, 0) == 1.0);
  CHECK(s.K(1, 1) == 1.0);
  CHECK(s.K(0, 1) == doctest::Approx(std::exp(-1.0)));
  for (const auto& dK : s.partials) {
    CHECK(dK(0, 0) == 0.0);
    CHECK(dK(1, 1) == 0.0);
  }
  CHECK(s.partials.size() == 2);
}

TEST_CASE("kernel partials against central differences") {
  const Matrix Y = testing::random_matrix(12, 3, 1);
  const Matrix M = testing::random_spd(3, 2);
  const double sigma2 = 0.9, h = 1e-6;
  const auto s = imak::build_kernel(Y, M, sigma2, true);
  double worst = 0.0;
  for (Index r = 0; r < 3; ++r) {
    for (Index i = 0; i < 12; ++i) {
      for (Index j = 0; j < 12; ++j) {
        if (i == j) continue;
        Vector up = Y.row(i).transpose(), dn = up;
        up(r) += h;
        dn(r) -= h;
        const Vector yj = Y.row(j).transpose();
        const double fd = (kernel(up, yj, M, sigma2) - kernel(dn, yj, M, sigma2)) / (2 * h);
        const double an = s.partials[static_cast<std::size_t>(r)](i, j);
        worst = std::max(worst, std::abs(fd - an) / std::max(std::abs(an), 1e-3));
      }
    }
  }
  CHECK(worst < 1e-5);
}

TEST_CASE("kernel argument errors") {
  const Matrix Y = testing::random_matrix(5, 2, 3);
  Matrix bad(2, 2);
  bad << 1.0, 0.0, 0.0, -1.0;
  auto code = [&](const Matrix& M, double s2) {
    try {
      (void)imak::build_kernel(Y, M, s2);
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::io;
  };
  CHECK(code(bad, 1.0) == Errc::metric);
  CHECK(code(Matrix::Identity(3, 3), 1.0) == Errc::metric);
  CHECK(code(Matrix::Identity(2, 2), 0.0) == Errc::configuration);
}

TEST_CASE("F is positive semidefinite and G + F is the second moment") {
  const Matrix Y = toy_data(60, 4);
  const auto s = imak::build_kernel(Y, Matrix::Identity(4, 4), 1.0);
  const auto fg = imak::build_FG(Y, s);
  CHECK(Eigen::SelfAdjointEigenSolver<Matrix>(fg.F).eigenvalues().minCoeff() >= -1e-10);
  CHECK(fg.F == fg.F.transpose());
  CHECK(fg.G == fg.G.transpose());
}

TEST_CASE("two-sample case unrolled by hand") {
  const double a = 0.4, b = -1.1, m = 1.7, s2 = 0.6;
  Matrix Y(2, 1), M(1, 1);
  Y << a, b;
  M << m;
  const double k = std::exp(-m * (a - b) * (a - b) / (2 * s2));
  const double t = m * (a - b) * k / s2;
  // A = diag(y) K - dK
  const double A00 = a, A01 = a * k + t, A10 = b * k - t, A11 = b;
  const double l0 = A00 + A10, l1 = A01 + A11;
  Matrix F(2, 2), second(2, 2);
  F << l0 * l0, l0 * l1, l1 * l0, l1 * l1;
  F /= 4.0;
  second << A00 * A00 + A10 * A10, A00 * A01 + A10 * A11, A01 * A00 + A11 * A10, A01 * A01 + A11 * A11;
  second /= 2.0;
  const auto fg = imak::build_FG(Y, imak::build_kernel(Y, M, s2));
  CHECK(testing::max_abs(fg.F - F) < 1e-12);
  CHECK(testing::max_abs(fg.G - (second - F)) < 1e-12);
}

TEST_CASE("Rayleigh quotient equals the informative ratio") {
  const Matrix Y = toy_data(50, 5);
  const Matrix M = testing::random_spd(4, 6);
  const double sigma2 = 1.5;
  const auto fg = imak::build_FG(Y, imak::build_kernel(Y, M, sigma2));
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Vector alpha = testing::random_matrix(50, 1, 100 + seed).col(0);
    const Matrix s = summands(Y, M, sigma2, alpha);
    const Vector beta = s.colwise().mean();
    const double var = s.rowwise().squaredNorm().mean() - beta.squaredNorm();
    const double direct = beta.squaredNorm() / var;
    const double quotient = alpha.dot(fg.F * alpha) / alpha.dot(fg.G * alpha);
    CHECK(std::abs(quotient - direct) < 1e-8 * std::max(1.0, direct));
  }
}

TEST_CASE("beta from alpha against direct evaluation") {
  const Matrix Y = toy_data(40, 7);
  const Matrix M = testing::random_spd(4, 8);
  const auto state = imak::build_kernel(Y, M, 2.0);
  const Vector alpha = testing::random_matrix(40, 1, 9).col(0);
  const Vector direct = summands(Y, M, 2.0, alpha).colwise().mean();
  CHECK((imak::beta_from_alpha(Y, state, alpha) - direct).norm() < 1e-12);
}

TEST_CASE("h gradient against central differences") {
  const Matrix Y = testing::random_matrix(30, 3, 10);
  const auto state = imak::build_kernel(Y, testing::random_spd(3, 11), 0.8);
  const Vector alpha = testing::random_matrix(30, 1, 12).col(0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Vector y = testing::random_matrix(3, 1, 200 + seed).col(0);
    const Vector g = imak::h_gradient(Y, state, alpha, y);
    for (Index r = 0; r < 3; ++r) {
      Vector up = y, dn = y;
      up(r) += 1e-6;
      dn(r) -= 1e-6;
      const double fd = (imak::h_value(Y, state, alpha, up) - imak::h_value(Y, state, alpha, dn)) / 2e-6;
      CHECK(std::abs(fd - g(r)) <= 1e-5 * std::max(std::abs(g(r)), 1e-2));
    }
  }
}

TEST_CASE("solve_alpha: diagonal pencil") {
  Matrix F = Matrix::Zero(2, 2);
  F(0, 0) = 2.0;
  F(1, 1) = 1.0;
  const auto sol = imak::solve_alpha(F, Matrix::Identity(2, 2));
  CHECK(sol.eta == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(std::abs(sol.alpha(1)) < 1e-12);
  CHECK(sol.alpha.squaredNorm() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("solve_alpha: F equal to G") {
  const Matrix G = testing::random_spd(6, 13);
  const auto sol = imak::solve_alpha(G, G);
  CHECK(sol.eta == doctest::Approx(1.0).epsilon(1e-8));
  CHECK((G * sol.alpha - sol.eta * G * sol.alpha).norm() <= 1e-8);
}

TEST_CASE("solve_alpha against the conjugated standard problem") {
  for (std::uint64_t seed = 20; seed < 25; ++seed) {
    const Matrix G = testing::random_spd(12, seed);
    const Matrix F = testing::random_spd(12, seed + 50, 0.0);
    Eigen::SelfAdjointEigenSolver<Matrix> g(G);
    const Matrix root_inv = g.operatorInverseSqrt();
    const double oracle = Eigen::SelfAdjointEigenSolver<Matrix>(root_inv * F * root_inv).eigenvalues().maxCoeff();
    const auto sol = imak::solve_alpha(F, G);
    CHECK(std::abs(sol.eta - oracle) < 1e-8 * std::max(1.0, oracle));
    CHECK(sol.alpha.dot(G * sol.alpha) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK((F * sol.alpha - sol.eta * G * sol.alpha).norm() < 1e-8 * std::max(1.0, oracle));
  }
}

TEST_CASE("low-rank solver agrees with the dense one") {
  const Index n = 30;
  const Matrix L = testing::random_matrix(3, n, 30);
  const Matrix G = testing::random_spd(n, 31);
  const Matrix F = L.transpose() * L / static_cast<double>(n * n);
  const auto dense = imak::solve_alpha(F, G);
  const auto fast = imak::solve_alpha_low_rank(L, G);
  CHECK(fast.eta == doctest::Approx(dense.eta).epsilon(1e-9));
  const double cosine = fast.alpha.dot(G * dense.alpha) /
                        std::sqrt(fast.alpha.dot(G * fast.alpha) * dense.alpha.dot(G * dense.alpha));
  CHECK(std::abs(cosine) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(fast.alpha.dot(G * fast.alpha) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("metric update rescales to trace d") {
  std::vector<Vector> betas{Vector::Unit(3, 0) * 0.2, Vector::Unit(3, 1) * 0.1};
  const auto M = imak::metric_update(betas, 3);
  REQUIRE(M.has_value());
  CHECK(M->trace() == doctest::Approx(3.0).epsilon(1e-12));
  CHECK((*M)(0, 0) == doctest::Approx(3.0 * 0.04 / 0.05));
  CHECK_FALSE(imak::metric_update({Vector::Zero(3)}, 3).has_value());
}

TEST_CASE("one outer iteration, one scale") {
  const auto S = dataset::sample_signals(dataset::GeneratorKind::gaussian_mixture, 300, Seed{40});
  const auto X = dataset::assemble(S, 5, 0.0, Seed{41});
  imak::Config c;
  c.outer_iters = 1;
  c.sigma2_grid = {1.0};
  const auto r = imak::estimate(X, 2, c);
  CHECK((r.subspace.basis.transpose() * r.subspace.basis - Matrix::Identity(2, 2)).norm() < 1e-10);
  CHECK(r.etas.size() == 1);
  CHECK(r.betas.size() == 1);
}

TEST_CASE("invariants over the default iteration") {
  const auto S = dataset::sample_signals(dataset::GeneratorKind::super_gaussian, 300, Seed{42});
  const auto X = dataset::assemble(S, 5, 0.0, Seed{43});
  const auto r = imak::estimate(X, 2, imak::Config{});
  CHECK(r.traces.size() == 10);
  for (double t : r.traces) CHECK(std::abs(t - 5.0) < 1e-10);
  CHECK(r.etas.size() == 40);
  for (double eta : r.etas) {
    CHECK(std::isfinite(eta));
    CHECK(eta > 0.0);
  }
  CHECK_FALSE(r.fallback);
}

TEST_CASE("config errors") {
  const Matrix X = testing::random_matrix(50, 4, 44);
  imak::Config c;
  c.outer_iters = 0;
  CHECK_THROWS_AS(imak::estimate(X, 2, c), Error);
  c.outer_iters = 1;
  c.sigma2_grid.clear();
  CHECK_THROWS_AS(imak::estimate(X, 2, c), Error);
}

TEST_CASE("Gaussian mixture at n = 1000") {
  const auto S = dataset::sample_signals(dataset::GeneratorKind::gaussian_mixture, 1000, Seed{45});
  const auto X = dataset::assemble(S, 10, 0.0, Seed{46});
  const auto r = imak::estimate(X, 2, imak::Config{});
  const auto truth = metrics::coordinate_subspace(10, 2);
  const double E = metrics::subspace_error(r.subspace, truth);
  MESSAGE("E = " << E);
  // the leading recovered direction lies in the signal plane
  CHECK(metrics::principal_angles(r.subspace, truth)(0) < 0.2);
  CHECK(E < 0.5);
}

}  // TEST_SUITE
