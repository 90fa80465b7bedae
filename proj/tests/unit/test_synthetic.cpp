#include <doctest.h>

#include <cmath>

#include "partialreg/errors.hpp"
#include "partialreg/ols.hpp"
#include "partialreg/rng.hpp"
#include "partialreg/synthetic.hpp"

using namespace partialreg;

namespace {

SimulationSpec one_regressor(double sigma_x_eps, std::size_t n, std::uint64_t seed) {
  SimulationSpec s;
  s.k = 1;
  s.sigma_xx = Eigen::MatrixXd::Constant(1, 1, 1.0);
  s.beta_structural = Eigen::VectorXd::Constant(1, 1.0);
  s.sigma_eps = 1.0;
  s.sigma_x_eps = Eigen::VectorXd::Constant(1, sigma_x_eps);
  s.n = n;
  s.seed = seed;
  return s;
}

}  // namespace

TEST_CASE("xoshiro256** reference outputs") {
  auto g = Xoshiro256::from_state({1, 2, 3, 4});
  CHECK(g() == 11520u);
  CHECK(g() == 0u);
  CHECK(g() == 1509978240u);
  CHECK(g() == 1215971899390074240u);
  CHECK_THROWS_AS(Xoshiro256::from_state({0, 0, 0, 0}), ValidationError);
}

TEST_CASE("random streams are deterministic and well behaved") {
  Xoshiro256 a(99), b(99), c(100);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto va = a();
    CHECK(va == b());
    differs = differs || va != c();
  }
  CHECK(differs);

  Xoshiro256 u(5);
  for (int i = 0; i < 10000; ++i) {
    const double x = u.uniform_open_closed();
    REQUIRE(x > 0.0);
    REQUIRE(x <= 1.0);
  }

  NormalStream z(11);
  const int m = 200000;
  double s1 = 0.0, s2 = 0.0;
  for (int i = 0; i < m; ++i) {
    const double v = z.next();
    s1 += v;
    s2 += v * v;
  }
  CHECK(std::abs(s1 / m) < 0.01);
  CHECK(std::abs(s2 / m - 1.0) < 0.01);
}

TEST_CASE("lower_cholesky") {
  SUBCASE("positive definite") {
    Eigen::MatrixXd a{{4.0, 2.0, 0.4}, {2.0, 5.0, 1.0}, {0.4, 1.0, 3.0}};
    const auto l = lower_cholesky(a);
    CHECK((l * l.transpose() - a).norm() <= 1e-14);
    CHECK(l(0, 1) == 0.0);
  }
  SUBCASE("semidefinite input gives a zero column") {
    Eigen::MatrixXd a{{1.0, 1.0}, {1.0, 1.0}};
    const auto l = lower_cholesky(a);
    CHECK((l * l.transpose() - a).norm() <= 1e-14);
    CHECK(l(1, 1) == 0.0);
  }
  SUBCASE("indefinite input throws") {
    Eigen::MatrixXd a{{1.0, 2.0}, {2.0, 1.0}};
    CHECK_THROWS_AS(lower_cholesky(a), DegeneracyError);
  }
}

TEST_CASE("SimulationSpec::validate") {
  auto s = one_regressor(0.0, 100, 1);
  CHECK_NOTHROW(s.validate());

  auto bad = s;
  bad.beta_structural = Eigen::VectorXd::Zero(2);
  CHECK_THROWS_AS(bad.validate(), ValidationError);

  bad = s;
  bad.sigma_eps = -1.0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);

  bad = s;
  bad.n = 1;
  CHECK_THROWS_AS(bad.validate(), ValidationError);

  bad = s;
  bad.sigma_x_eps(0) = 2.0;  // |corr(x, eps)| > 1
  CHECK_THROWS_AS(bad.validate(), DegeneracyError);

  bad = s;
  bad.k = 2;
  bad.sigma_xx = Eigen::MatrixXd{{1.0, 1.0}, {1.0, 1.0}};
  bad.beta_structural = Eigen::VectorXd::Ones(2);
  bad.sigma_x_eps = Eigen::VectorXd::Zero(2);
  CHECK_THROWS_AS(bad.validate(), DegeneracyError);
}

TEST_CASE("generate") {
  SUBCASE("layout and determinism") {
    const auto spec = one_regressor(0.3, 50, 8);
    const auto a = generate(spec);
    const auto b = generate(spec);
    CHECK(a.raw.column_names() == std::vector<std::string>{"x1", "y"});
    CHECK(a.raw.values() == b.raw.values());
    CHECK(a.data.centered());
    CHECK(a.truth.epsilon.size() == 50);
    const Eigen::VectorXd resid = a.raw.vector("y") - a.raw.vector("x1");
    CHECK((resid - a.truth.epsilon).norm() <= 1e-12);
  }
  SUBCASE("exogenous errors: slope converges to beta") {
    const auto spec = one_regressor(0.0, 100000, 3);
    const auto sample = generate(spec);
    const auto fit = fit_ols(sample.data, "y", {"x1"});
    const auto r = bias_report(spec, fit);
    CHECK(r.exogenous);
    CHECK(std::abs(fit.beta[0] - 1.0) <= 3.0 * r.standard_errors[0]);
  }
  SUBCASE("null model: r squared near zero") {
    auto spec = one_regressor(0.0, 20000, 4);
    spec.beta_structural(0) = 0.0;
    const auto fit = fit_ols(generate(spec).data, "y", {"x1"});
    CHECK(fit.r_squared < 0.002);
    CHECK(std::abs(fit.beta[0]) < 0.03);
  }
  SUBCASE("endogenous errors: slope converges to 1.5, not 1") {
    const auto spec = one_regressor(0.5, 100000, 7);
    CHECK(population_gamma(spec)(0) == doctest::Approx(1.5));
    const auto fit = fit_ols(generate(spec).data, "y", {"x1"});
    const auto r = bias_report(spec, fit);
    CHECK_FALSE(r.exogenous);
    CHECK(std::abs(fit.beta[0] - 1.5) <= 3.0 * r.standard_errors[0]);
    CHECK(std::abs(fit.beta[0] - 1.0) > 20.0 * r.standard_errors[0]);
    CHECK(r.endogeneity_bias(0) == doctest::Approx(0.5));
  }
}

TEST_CASE("bias_report with two regressors") {
  SimulationSpec spec;
  spec.k = 2;
  spec.sigma_xx = Eigen::MatrixXd{{1.0, 0.5}, {0.5, 1.0}};
  spec.beta_structural = Eigen::Vector2d{1.0, -1.0};
  spec.sigma_eps = 1.0;
  spec.sigma_x_eps = Eigen::Vector2d{0.0, 0.3};
  spec.n = 50000;
  spec.seed = 12;
  // Correlation with x2 alone leaks into the x1 coefficient too.
  const Eigen::Vector2d expected_bias{-0.2, 0.4};
  CHECK((population_gamma(spec) - spec.beta_structural - expected_bias).norm() <= 1e-12);

  const auto fit = fit_ols(generate(spec).data, "y", {"x1", "x2"});
  const auto r = bias_report(spec, fit);
  CHECK((r.endogeneity_bias - expected_bias).norm() <= 1e-12);
  CHECK((r.gap_to_structural - r.gap_to_population - r.endogeneity_bias).norm() <= 1e-12);
  for (int j = 0; j < 2; ++j) {
    CHECK(std::abs(r.gap_to_population(j)) <= 4.0 * r.standard_errors(j));
  }
  CHECK(std::abs(r.r_squared - r.population_r_squared) < 0.02);
}

TEST_CASE("exact_moment_sample") {
  SUBCASE("identity target with the smallest allowed n") {
    const Eigen::MatrixXd target = Eigen::MatrixXd::Identity(3, 3);
    const auto d = exact_moment_sample(target, 4, 1);
    CHECK(d.rows() == 4);
    CHECK(d.column_names() == std::vector<std::string>{"x1", "x2", "x3"});
    CHECK((sample_covariance(d, d.column_names()) - target).norm() <= 1e-12);
  }
  SUBCASE("correlated target reproduced to rounding") {
    Eigen::MatrixXd target{{2.0, 0.6 * std::sqrt(2.0)}, {0.6 * std::sqrt(2.0), 1.0}};
    const auto d = exact_moment_sample(target, 37, 9, {"a", "b"});
    CHECK(d.centered());
    CHECK((sample_covariance(d, {"a", "b"}) - target).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("population coefficients recovered exactly") {
    Eigen::MatrixXd sxx{{1.0, 0.3}, {0.3, 2.0}};
    Eigen::Vector2d beta{0.7, -1.1};
    Eigen::MatrixXd full(3, 3);
    full.topLeftCorner(2, 2) = sxx;
    full.block(0, 2, 2, 1) = sxx * beta;
    full.block(2, 0, 1, 2) = (sxx * beta).transpose();
    full(2, 2) = beta.dot(sxx * beta) + 0.5;
    const auto d = exact_moment_sample(full, 15, 2, {"x1", "x2", "y"});
    const auto fit = fit_ols(d, "y", {"x1", "x2"});
    CHECK((fit.beta - beta).norm() <= 1e-12);
  }
  SUBCASE("rejections") {
    CHECK_THROWS_AS(exact_moment_sample(Eigen::MatrixXd::Identity(3, 3), 3, 1), ValidationError);
    CHECK_THROWS_AS(exact_moment_sample(Eigen::MatrixXd{{1.0, 1.0}, {1.0, 1.0}}, 10, 1),
                    DegeneracyError);
    CHECK_THROWS_AS(exact_moment_sample(Eigen::MatrixXd::Identity(2, 2), 10, 1, {"a"}),
                    ValidationError);
  }
}
