#include <doctest.h>

#include "partialreg/errors.hpp"
#include "partialreg/numeric.hpp"
#include "partialreg/ols.hpp"
#include "partialreg/partial.hpp"
#include "problems.hpp"

using namespace partialreg;
using partialreg::testing::random_problem;

namespace {

Dataset centered(std::vector<std::string> names, std::vector<std::vector<double>> cols) {
  return Dataset::from_columns(std::move(names), cols).center();
}

// Exactly orthogonal columns; y = 2 x1 + x2 is orthogonal to x3.
Dataset factorial(std::vector<double> y) {
  return centered({"x1", "x2", "x3", "y"}, {{1, 1, 1, 1, -1, -1, -1, -1},
                                            {1, 1, -1, -1, 1, 1, -1, -1},
                                            {1, -1, 1, -1, 1, -1, 1, -1},
                                            std::move(y)});
}

const std::vector<double> kFactorialY{3.0, 1.0, 4.0, 1.0, 5.0, 9.0, 2.0, 6.0};

std::vector<std::string> without(const std::vector<std::string>& all, const std::string& drop) {
  std::vector<std::string> out;
  for (const auto& s : all)
    if (s != drop) out.push_back(s);
  return out;
}

}  // namespace

TEST_CASE("residualize") {
  SUBCASE("no controls returns the target") {
    const auto d = centered({"t", "c"}, {{-1, 0, 1}, {1, -2, 1}});
    const auto r = residualize(d, "t", {});
    CHECK(r[0] == -1.0);
    CHECK(r[1] == 0.0);
    CHECK(r[2] == 1.0);
  }
  SUBCASE("target orthogonal to the control is unchanged") {
    const auto d = centered({"t", "c"}, {{-1, 0, 1}, {1, -2, 1}});
    const auto r = residualize(d, "t", {"c"});
    CHECK((r - d.vector("t")).cwiseAbs().maxCoeff() <= 1e-15);
  }
  SUBCASE("target equal to a control leaves nothing") {
    const auto d = centered({"t", "c"}, {{1, 4, 2, 7}, {1, 4, 2, 7}});
    CHECK(residualize(d, "t", {"c"}).cwiseAbs().maxCoeff() <= 1e-14);
  }
  SUBCASE("result is orthogonal to every control") {
    const auto p = random_problem(3, 60, 4);
    const auto r = residualize(p.data, "x1", {"x2", "x3", "x4"});
    for (const auto* c : {"x2", "x3", "x4"}) {
      const Eigen::VectorXd x = p.data.vector(c);
      CHECK(std::abs(r.dot(x)) <= 1e-12 * x.norm() * p.data.vector("x1").norm());
    }
  }
  SUBCASE("rejects target among the controls") {
    const auto d = centered({"t", "c"}, {{-1, 0, 1}, {1, -2, 1}});
    CHECK_THROWS_AS(residualize(d, "t", {"t"}), ValidationError);
  }
  SUBCASE("rank-deficient controls propagate the solver error") {
    const auto d = centered({"t", "a", "b"}, {{1, 3, 2, 5}, {1, 2, 3, 4}, {2, 4, 6, 8}});
    CHECK_THROWS_AS(residualize(d, "t", {"a", "b"}), RankDeficiencyError);
  }
}

TEST_CASE("prt_v1") {
  SUBCASE("no controls gives the simple slope") {
    const auto p = random_problem(11, 40, 2);
    CHECK(prt_v1(p.data, "y", "x1", {}) ==
          doctest::Approx(testing::slope(p.data.vector("x1"), p.data.vector("y"))).epsilon(1e-14));
  }
  SUBCASE("orthogonal regressors give the simple slope whatever the controls") {
    const auto d = factorial(kFactorialY);
    const double simple = testing::slope(d.vector("x1"), d.vector("y"));
    CHECK(prt_v1(d, "y", "x1", {"x2"}) == doctest::Approx(simple).epsilon(1e-14));
    CHECK(prt_v1(d, "y", "x1", {"x2", "x3"}) == doctest::Approx(simple).epsilon(1e-14));
  }
  SUBCASE("equals the multivariate coefficient on random 100x4 data") {
    for (std::uint64_t seed = 200; seed < 210; ++seed) {
      const auto p = random_problem(seed, 100, 4);
      const auto fit = fit_ols(p.data, "y", p.regressors);
      for (std::size_t j = 0; j < 4; ++j) {
        const auto& focus = p.regressors[j];
        const double v1 = prt_v1(p.data, "y", focus, without(p.regressors, focus));
        CHECK(relative_difference(v1, fit.beta[static_cast<Eigen::Index>(j)]) <= 1e-8);
      }
    }
  }
  SUBCASE("collinear focus is an error, not zero") {
    const auto d = centered({"a", "b", "y"}, {{1, 2, 3, 4}, {2, 4, 6, 8}, {1, 3, 2, 5}});
    CHECK_THROWS_AS(prt_v1(d, "y", "a", {"b"}), DegeneracyError);
  }
  SUBCASE("argument validation") {
    const auto p = random_problem(5, 20, 2);
    CHECK_THROWS_AS(prt_v1(p.data, "y", "y", {}), ValidationError);
    CHECK_THROWS_AS(prt_v1(p.data, "y", "x1", {"y"}), ValidationError);
    CHECK_THROWS_AS(prt_v1(p.data, "y", "x1", {"x1"}), ValidationError);
    CHECK_THROWS_AS(prt_v1(p.data, "y", "x1", {"x2", "x2"}), ValidationError);
  }
}

TEST_CASE("prt_v2") {
  SUBCASE("no controls gives the simple slope") {
    const auto p = random_problem(12, 40, 2);
    CHECK(prt_v2(p.data, "y", "x2", {}) ==
          doctest::Approx(testing::slope(p.data.vector("x2"), p.data.vector("y"))).epsilon(1e-14));
  }
  SUBCASE("matches prt_v1 and fit_ols") {
    for (std::uint64_t seed = 300; seed < 310; ++seed) {
      const auto p = random_problem(seed, 100, 4);
      const auto fit = fit_ols(p.data, "y", p.regressors);
      for (std::size_t j = 0; j < 4; ++j) {
        const auto& focus = p.regressors[j];
        const auto controls = without(p.regressors, focus);
        const double v1 = prt_v1(p.data, "y", focus, controls);
        const double v2 = prt_v2(p.data, "y", focus, controls);
        CHECK(relative_difference(v1, v2) <= 1e-10);
        CHECK(relative_difference(v2, fit.beta[static_cast<Eigen::Index>(j)]) <= 1e-8);
      }
    }
  }
}

TEST_CASE("semi_partial_r2") {
  SUBCASE("no controls gives the ordinary R^2") {
    const auto p = random_problem(21, 50, 2);
    const auto fit = fit_ols(p.data, "y", {"x1"});
    CHECK(semi_partial_r2(p.data, "y", "x1", {}) == doctest::Approx(fit.r_squared).epsilon(1e-12));
  }
  SUBCASE("response orthogonal to delta gives 0") {
    const auto d = factorial({2, 2, -2, -2, 0, 0, -4, -4});  // no x3 component
    CHECK(testing::dot(d.vector("y"), d.vector("x3")) == 0.0);
    CHECK(semi_partial_r2(d, "y", "x3", {"x1"}) <= 1e-30);
  }
  SUBCASE("equals the R^2 increment from adding the focus") {
    for (std::uint64_t seed = 400; seed < 410; ++seed) {
      const auto p = random_problem(seed, 80, 4, 0.5, 1.0);
      const Eigen::VectorXd y = p.data.vector("y");
      for (const auto& focus : p.regressors) {
        const auto controls = without(p.regressors, focus);
        const double full = testing::brute_r_squared(p.data.select(p.regressors), y);
        const double reduced = testing::brute_r_squared(p.data.select(controls), y);
        CHECK(semi_partial_r2(p.data, "y", focus, controls) ==
              doctest::Approx(full - reduced).epsilon(1e-9));
      }
    }
  }
  SUBCASE("constant response is degenerate") {
    const auto d = centered({"x", "y"}, {{1, 2, 3}, {5, 5, 5}});
    CHECK_THROWS_AS(semi_partial_r2(d, "y", "x", {}), DegeneracyError);
  }
}

TEST_CASE("partial_r2") {
  SUBCASE("no controls gives the ordinary R^2") {
    const auto p = random_problem(22, 50, 2);
    const auto fit = fit_ols(p.data, "y", {"x2"});
    CHECK(partial_r2(p.data, "y", "x2", {}) == doctest::Approx(fit.r_squared).epsilon(1e-12));
  }
  SUBCASE("focus orthogonal to response and controls gives 0") {
    const auto d = factorial({3, 3, -1, -1, 1, 1, -3, -3});  // x1 + 2 x2
    CHECK(partial_r2(d, "y", "x3", {"x1"}) <= 1e-30);
  }
  SUBCASE("equals semi-partial / (1 - R^2 of y on controls)") {
    for (std::uint64_t seed = 500; seed < 510; ++seed) {
      const auto p = random_problem(seed, 80, 4, 0.5, 1.0);
      const Eigen::VectorXd y = p.data.vector("y");
      for (const auto& focus : p.regressors) {
        const auto controls = without(p.regressors, focus);
        const double reduced = testing::brute_r_squared(p.data.select(controls), y);
        const double semi = semi_partial_r2(p.data, "y", focus, controls);
        CHECK(partial_r2(p.data, "y", focus, controls) ==
              doctest::Approx(semi / (1.0 - reduced)).epsilon(1e-9));
      }
    }
  }
  SUBCASE("controls explaining y completely are degenerate") {
    // y = x1 exactly.
    const auto d = centered({"x1", "x2", "y"}, {{1, 2, 3, 4, 5}, {2, -1, 0, 3, 1}, {1, 2, 3, 4, 5}});
    CHECK_THROWS_AS(partial_r2(d, "y", "x2", {"x1"}), DegeneracyError);
  }
}

TEST_CASE("partial_correlation") {
  SUBCASE("no controls gives the plain correlation") {
    const auto p = random_problem(31, 40, 2);
    CHECK(partial_correlation(p.data, "x1", "y", {}) ==
          doctest::Approx(testing::correlation(p.data.vector("x1"), p.data.vector("y")))
              .epsilon(1e-14));
  }
  SUBCASE("a variable with itself is 1") {
    const auto p = random_problem(32, 40, 3);
    CHECK(partial_correlation(p.data, "x1", "x1", {"x2"}) == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("square equals partial_r2 and the value is symmetric") {
    for (std::uint64_t seed = 600; seed < 620; ++seed) {
      const auto p = random_problem(seed, 60, 3, 0.5, 1.0);
      const std::vector<std::string> controls{"x2", "x3"};
      const double ab = partial_correlation(p.data, "y", "x1", controls);
      const double ba = partial_correlation(p.data, "x1", "y", controls);
      CHECK(ab == ba);
      CHECK(std::abs(ab * ab - partial_r2(p.data, "y", "x1", controls)) <= 1e-10);
    }
  }
}

TEST_CASE("decompose") {
  SUBCASE("k = 1") {
    const auto p = random_problem(41, 30, 1);
    const auto recs = decompose(p.data, "y", p.regressors);
    REQUIRE(recs.size() == 1);
    const auto& r = recs[0];
    const auto fit = fit_ols(p.data, "y", p.regressors);
    CHECK(r.controls.empty());
    CHECK(r.beta_prt_v1 == doctest::Approx(r.beta_multivariate).epsilon(1e-12));
    CHECK(r.beta_prt_v2 == doctest::Approx(r.beta_multivariate).epsilon(1e-12));
    CHECK(r.partial_r2 == doctest::Approx(fit.r_squared).epsilon(1e-12));
    CHECK(r.semi_partial_r2 == doctest::Approx(fit.r_squared).epsilon(1e-12));
  }
  SUBCASE("orthogonal design, k = 3") {
    const auto d = factorial(kFactorialY);
    const auto recs = decompose(d, "y", {"x1", "x2", "x3"});
    for (const auto& r : recs) {
      const double simple = testing::slope(d.vector(r.focus), d.vector("y"));
      CHECK(r.beta_prt_v1 == doctest::Approx(simple).epsilon(1e-14));
      CHECK(r.beta_prt_v2 == doctest::Approx(simple).epsilon(1e-14));
    }
  }
  SUBCASE("random 200x5 datasets satisfy every record invariant") {
    for (std::uint64_t seed = 700; seed < 730; ++seed) {
      const auto p = random_problem(seed, 200, 5, 0.6, 1.0);
      const auto recs = decompose(p.data, "y", p.regressors);
      REQUIRE(recs.size() == 5);
      for (std::size_t j = 0; j < recs.size(); ++j) {
        const auto& r = recs[j];
        CAPTURE(seed);
        CHECK(r.focus == p.regressors[j]);
        CHECK(r.controls == without(p.regressors, r.focus));
        for (const auto& c : r.controls) {
          const Eigen::VectorXd x = p.data.vector(c);
          CHECK(std::abs(r.delta.dot(x)) <= 1e-8 * 200 * x.norm() * r.delta.norm() / 200);
        }
        CHECK(relative_difference(r.beta_prt_v1, r.beta_multivariate) <= 1e-8);
        CHECK(relative_difference(r.beta_prt_v2, r.beta_multivariate) <= 1e-8);
        CHECK(relative_difference(r.beta_prt_v1, r.beta_prt_v2) <= 1e-8);
        CHECK(0.0 <= r.semi_partial_r2);
        CHECK(r.semi_partial_r2 <= r.partial_r2);
        CHECK(r.partial_r2 <= 1.0);
        CHECK(std::abs(r.partial_correlation * r.partial_correlation - r.partial_r2) <= 1e-10);
        if (std::abs(r.beta_multivariate) > 1e-8) {
          CHECK((r.partial_correlation > 0) == (r.beta_multivariate > 0));
        }
      }
    }
  }
  SUBCASE("a shared fit is reused verbatim") {
    const auto p = random_problem(42, 50, 3);
    const auto fit = fit_ols(p.data, "y", p.regressors);
    const auto recs = decompose(p.data, fit);
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(recs[j].beta_multivariate == fit.beta[static_cast<Eigen::Index>(j)]);
  }
}

TEST_CASE("changing the controls changes the coefficient") {
  const auto p = random_problem(77, 150, 3, 0.8, 0.5);
  const double all = prt_v1(p.data, "y", "x1", {"x2", "x3"});
  const double fewer = prt_v1(p.data, "y", "x1", {"x2"});
  CHECK(relative_difference(all, fewer) > 1e-3);
  // ... and each equals the multivariate coefficient of its own model.
  CHECK(relative_difference(fewer, fit_ols(p.data, "y", {"x1", "x2"}).beta[0]) <= 1e-8);
}

TEST_CASE("partialling out never adds variance") {
  for (std::uint64_t seed = 800; seed < 840; ++seed) {
    const auto p = random_problem(seed, 50, 4, 0.7);
    const Eigen::VectorXd focus = p.data.vector("x1");
    const auto delta = residualize(p.data, "x1", {"x2", "x3", "x4"});
    CHECK(delta.squaredNorm() <= focus.squaredNorm());
  }
  const auto d = factorial(kFactorialY);
  CHECK(residualize(d, "x1", {"x2", "x3"}).squaredNorm() ==
        doctest::Approx(d.vector("x1").squaredNorm()).epsilon(1e-15));
}

TEST_CASE("partial_r2 equals semi_partial_r2 when the controls explain nothing of y") {
  // y has no x2 component, so partialling out x2 leaves y unchanged.
  const auto d = factorial({2, 2, 0, 0, -2, -2, 0, 0});
  const double semi = semi_partial_r2(d, "y", "x1", {"x2"});
  const double part = partial_r2(d, "y", "x1", {"x2"});
  CHECK(part == doctest::Approx(semi).epsilon(1e-14));
  CHECK(part >= semi);
}
