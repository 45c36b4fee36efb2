#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>

#include <boost/math/special_functions/gamma.hpp>

#include "ngca/dataset.hpp"
#include "support.hpp"

using namespace ngca;
using dataset::GeneratorKind;

namespace {

double tgamma(double x) { return boost::math::tgamma(x); }

// p(s) ~ exp(-s^4 / beta): integral_0^s exp(-t^4/beta) dt = beta^(1/4)/4 * lower_gamma(1/4, s^4/beta),
// so the CDF is 1/2 + sign(s)/2 * P(1/4, s^4/beta).
double quartic_cdf(double s, double beta) {
  const double p = boost::math::gamma_p(0.25, std::pow(s, 4) / beta);
  return 0.5 + (s < 0 ? -0.5 : 0.5) * p;
}

// Var = sqrt(beta) Gamma(3/4) / Gamma(1/4) = 3.
double quartic_beta_closed_form() {
  const double r = 3.0 * tgamma(0.25) / tgamma(0.75);
  return r * r;
}

struct Moments {
  double mean, var, excess_kurtosis;
};

Moments column_moments(const Matrix& m, Index c) {
  const auto col = m.col(c).array();
  const double mean = col.mean();
  const auto dev = col - mean;
  const double var = dev.square().mean();
  const double m4 = dev.square().square().mean();
  return {mean, var, m4 / (var * var) - 3.0};
}

// Zero-mean n x d data with exactly identity 1/n covariance.
Matrix exactly_white(Index n, Index d, std::uint64_t seed) {
  Matrix A = testing::random_matrix(n, d, seed);
  A.rowwise() -= A.colwise().mean();
  Eigen::HouseholderQR<Matrix> qr(A);
  return Matrix(qr.householderQ() * Matrix::Identity(n, d)) * std::sqrt(static_cast<double>(n));
}

}  // namespace

TEST_SUITE("dataset") {

TEST_CASE("laplace scale gives variance three") {
  CHECK(dataset::laplace_scale() == doctest::Approx(std::sqrt(1.5)).epsilon(1e-8));
}

TEST_CASE("quartic beta matches the gamma-function closed form") {
  CHECK(dataset::quartic_beta() == doctest::Approx(quartic_beta_closed_form()).epsilon(1e-8));
}

TEST_CASE("quartic sampler cdf agrees with the incomplete gamma function") {
  const dataset::QuarticSampler sampler(dataset::quartic_beta());
  double worst = 0.0;
  for (double s = -10.0; s <= 10.0; s += 0.05) {
    worst = std::max(worst, std::abs(sampler.cdf(s) - quartic_cdf(s, sampler.beta())));
  }
  CHECK(worst < 1e-5);
  CHECK(sampler.quantile(0.5) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("super-Gaussian variance at n = 1e6") {
  const auto S = dataset::sample_signals(GeneratorKind::super_gaussian, 1'000'000, Seed{11});
  for (Index c = 0; c < 2; ++c) {
    const auto m = column_moments(S, c);
    CHECK(m.var >= 2.9);
    CHECK(m.var <= 3.1);
    // Laplace excess kurtosis is 3
    CHECK(m.excess_kurtosis == doctest::Approx(3.0).epsilon(0.05));
  }
}

TEST_CASE("mixture mean and variance at n = 1e6") {
  const auto S = dataset::sample_signals(GeneratorKind::gaussian_mixture, 1'000'000, Seed{12});
  for (Index c = 0; c < 2; ++c) {
    const auto m = column_moments(S, c);
    CHECK(std::abs(m.mean) < 0.02);
    // 1/2 N(-3,1) + 1/2 N(3,1): variance 1 + 9
    CHECK(m.var == doctest::Approx(10.0).epsilon(0.01));
  }
}

TEST_CASE("sub-Gaussian draws are platykurtic with the integrated kurtosis") {
  const auto S = dataset::sample_signals(GeneratorKind::sub_gaussian, 1'000'000, Seed{13});
  // E s^4 = beta Gamma(5/4) / Gamma(1/4) = beta / 4
  const double expected = quartic_beta_closed_form() / 4.0 / 9.0 - 3.0;
  for (Index c = 0; c < 2; ++c) {
    const auto m = column_moments(S, c);
    CHECK(m.excess_kurtosis < 0.0);
    CHECK(m.excess_kurtosis == doctest::Approx(expected).epsilon(0.02));
    CHECK(m.var == doctest::Approx(3.0).epsilon(0.01));
  }
}

TEST_CASE("sub-Gaussian Kolmogorov-Smirnov statistic at n = 1e5") {
  const auto S = dataset::sample_signals(GeneratorKind::sub_gaussian, 100'000, Seed{14});
  std::vector<double> v(S.col(0).data(), S.col(0).data() + S.rows());
  std::sort(v.begin(), v.end());
  const double beta = quartic_beta_closed_form();
  const double n = static_cast<double>(v.size());
  double ks = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double F = quartic_cdf(v[i], beta);
    ks = std::max({ks, std::abs(F - i / n), std::abs((i + 1) / n - F)});
  }
  CHECK(ks < 0.01);
}

TEST_CASE("mixed generator puts Laplace first and quartic second") {
  const auto S = dataset::sample_signals(GeneratorKind::mixed_super_sub, 200'000, Seed{15});
  CHECK(column_moments(S, 0).excess_kurtosis > 2.0);
  CHECK(column_moments(S, 1).excess_kurtosis < -0.5);
}

TEST_CASE("sampling is deterministic in the seed") {
  for (auto kind : {GeneratorKind::gaussian_mixture, GeneratorKind::super_gaussian,
                    GeneratorKind::sub_gaussian, GeneratorKind::mixed_super_sub}) {
    const auto a = dataset::sample_signals(kind, 1000, Seed{7});
    const auto b = dataset::sample_signals(kind, 1000, Seed{7});
    const auto c = dataset::sample_signals(kind, 1000, Seed{8});
    CHECK(a == b);
    CHECK(a != c);
  }
}

TEST_CASE("generator names round-trip") {
  for (auto kind : {GeneratorKind::gaussian_mixture, GeneratorKind::super_gaussian,
                    GeneratorKind::sub_gaussian, GeneratorKind::mixed_super_sub}) {
    CHECK(dataset::generator_from_string(dataset::to_string(kind)) == kind);
  }
  CHECK_THROWS_AS(dataset::generator_from_string("cauchy"), Error);
}

TEST_CASE("n = 0 is an empty-input error") {
  try {
    (void)dataset::sample_signals(GeneratorKind::gaussian_mixture, 0, Seed{1});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::empty_input);
  }
}

TEST_CASE("assemble: noise columns are standard normal") {
  const auto S = dataset::sample_signals(GeneratorKind::gaussian_mixture, 100'000, Seed{20});
  const auto X = dataset::assemble(S, 10, 0.0, Seed{21});
  REQUIRE(X.cols() == 10);
  CHECK(X.leftCols(2) == S);
  for (Index c = 2; c < 10; ++c) {
    CHECK(column_moments(X, c).var == doctest::Approx(1.0).epsilon(0.05));
  }
}

TEST_CASE("assemble: constant signals stay constant without noise") {
  const Matrix S = Matrix::Constant(5000, 2, 1.5);
  const auto X = dataset::assemble(S, 3, 0.0, Seed{22});
  CHECK((X.col(0).array() == 1.5).all());
  CHECK((X.col(1).array() == 1.5).all());
  CHECK(column_moments(X, 2).var == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("assemble: additive noise adds its variance") {
  const auto S = dataset::sample_signals(GeneratorKind::super_gaussian, 200'000, Seed{23});
  const auto X = dataset::assemble(S, 10, 0.4, Seed{24});
  for (Index c = 0; c < 2; ++c) {
    CHECK(column_moments(X, c).var ==
          doctest::Approx(column_moments(S, c).var + 0.4).epsilon(0.02));
  }
}

TEST_CASE("assemble: argument errors") {
  const Matrix S = Matrix::Zero(10, 2);
  try {
    (void)dataset::assemble(S, 2, 0.0, Seed{1});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::dimension);
  }
  CHECK_THROWS_AS(dataset::assemble(S, 5, -0.1, Seed{1}), Error);
  CHECK_THROWS_AS(dataset::assemble(Matrix::Zero(10, 3), 5, 0.0, Seed{1}), Error);
}

TEST_CASE("whitening: identity covariance gives identity whitener") {
  const Matrix X = exactly_white(200, 4, 30);
  const auto w = dataset::center_whiten(X);
  CHECK(testing::max_abs(w.whitener - Matrix::Identity(4, 4)) < 1e-10);
  CHECK(testing::max_abs(w.whitened - X) < 1e-9);
}

TEST_CASE("whitening: diagonal covariance takes the diagonal inverse root") {
  Matrix X = exactly_white(300, 2, 31);
  X.col(0) *= 2.0;
  const auto w = dataset::center_whiten(X);
  Matrix expected(2, 2);
  expected << 0.5, 0.0, 0.0, 1.0;
  CHECK(testing::max_abs(w.whitener - expected) < 1e-10);
}

TEST_CASE("whitening: random data has identity sample covariance afterwards") {
  const Matrix A = testing::random_matrix(500, 5, 32);
  const Matrix X = A * testing::random_spd(5, 33) + Matrix::Constant(500, 5, 3.0);
  const auto w = dataset::center_whiten(X);
  const Matrix C = w.whitened.transpose() * w.whitened / 500.0;
  CHECK((C - Matrix::Identity(5, 5)).norm() < 1e-8);
  CHECK(w.whitened.colwise().mean().norm() < 1e-10);
  // symmetric inverse square root
  CHECK(testing::max_abs(w.whitener - w.whitener.transpose()) < 1e-12);
  CHECK(testing::max_abs(w.whitener * w.covariance * w.whitener - Matrix::Identity(5, 5)) < 1e-9);
}

TEST_CASE("whitening is idempotent") {
  const Matrix X = testing::random_matrix(400, 6, 34) * testing::random_spd(6, 35);
  const auto once = dataset::center_whiten(X);
  const auto twice = dataset::center_whiten(once.whitened);
  CHECK((twice.whitener - Matrix::Identity(6, 6)).norm() < 1e-8);
}

TEST_CASE("whitening: singular covariance names the eigenvalue") {
  Matrix X = testing::random_matrix(100, 3, 36);
  X.col(2) = X.col(0) - X.col(1);
  try {
    (void)dataset::center_whiten(X);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::singular_covariance);
    CHECK(std::string(e.what()).find("eigenvalue") != std::string::npos);
  }
}

TEST_CASE("whitening: too few samples") {
  try {
    (void)dataset::center_whiten(testing::random_matrix(3, 3, 37));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::dimension);
  }
}

TEST_CASE("csv: plain numeric rows") {
  const auto m = dataset::parse_csv("1.0,2.0\n3.0,4.0");
  Matrix expected(2, 2);
  expected << 1, 2, 3, 4;
  CHECK(m == expected);
}

TEST_CASE("csv: header row is consumed") {
  const auto m = dataset::parse_csv("a,b\n1,2");
  REQUIRE(m.rows() == 1);
  CHECK(m(0, 0) == 1.0);
  CHECK(m(0, 1) == 2.0);
}

TEST_CASE("csv: CRLF endings and trailing newline") {
  const auto m = dataset::parse_csv("x,y\r\n1.5,-2e3\r\n+3,4\r\n");
  REQUIRE(m.rows() == 2);
  CHECK(m(0, 1) == -2000.0);
  CHECK(m(1, 0) == 3.0);
}

TEST_CASE("csv: ragged row reports its index") {
  try {
    (void)dataset::parse_csv("1,2\n3");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::parse);
    CHECK(std::string(e.what()).find("row 2") != std::string::npos);
  }
}

TEST_CASE("csv: non-numeric cell reports row and column") {
  try {
    (void)dataset::parse_csv("1,2\n3,oops\n");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::parse);
    const std::string msg = e.what();
    CHECK(msg.find("row 2") != std::string::npos);
    CHECK(msg.find("column 2") != std::string::npos);
  }
}

TEST_CASE("csv: header only is empty input") {
  CHECK_THROWS_AS(dataset::parse_csv("a,b\n"), Error);
}

TEST_CASE("csv: write then load round-trips exactly") {
  const Matrix m = testing::random_matrix(7, 3, 38);
  const std::string path = std::string(NGCA_TEST_TMPDIR) + "/roundtrip.csv";
  dataset::write_csv(path, m);
  CHECK(dataset::load_csv(path) == m);
  CHECK_THROWS_AS(dataset::load_csv(std::string(NGCA_TEST_TMPDIR) + "/missing.csv"), Error);
}

}  // TEST_SUITE
