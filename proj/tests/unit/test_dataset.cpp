#include <doctest.h>

#include <cmath>
#include <limits>

#include "partialreg/dataset.hpp"
#include "partialreg/errors.hpp"
#include "problems.hpp"

using namespace partialreg;

TEST_CASE("center subtracts and records the sample mean") {
  const auto raw = Dataset::from_columns({"a"}, {{1.0, 2.0, 3.0}});
  const auto c = center(raw);
  CHECK(c.centered());
  CHECK(c.means()[0] == doctest::Approx(2.0));
  CHECK(c.column("a")[0] == doctest::Approx(-1.0));
  CHECK(c.column("a")[1] == doctest::Approx(0.0));
  CHECK(c.column("a")[2] == doctest::Approx(1.0));
}

TEST_CASE("already zero-mean column is unchanged") {
  const auto c = Dataset::from_columns({"a"}, {{-1.0, 1.0}}).center();
  CHECK(c.column("a")[0] == -1.0);
  CHECK(c.column("a")[1] == 1.0);
  CHECK(c.means()[0] == 0.0);
}

TEST_CASE("constant column centers to zeros") {
  const auto c = Dataset::from_columns({"a"}, {{5.0, 5.0, 5.0}}).center();
  CHECK(c.means()[0] == 5.0);
  for (double v : c.column("a")) CHECK(v == 0.0);
}

TEST_CASE("uncenter recovers the raw data") {
  const auto raw = Dataset::from_columns({"a", "b"}, {{1.5, -2.0, 8.25, 3.0}, {100, 101, 99, 104}});
  const auto back = raw.center().uncenter();
  CHECK_FALSE(back.centered());
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t i = 0; i < 4; ++i)
      CHECK(back.column(j)[i] == doctest::Approx(raw.column(j)[i]).epsilon(1e-14));
}

TEST_CASE("centered invariant holds for offset data") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto p = testing::random_problem(seed, 37, 3);
    Eigen::MatrixXd shifted = p.data.values();
    shifted.array() += 1e6 * static_cast<double>(seed);
    const auto c = Dataset::from_matrix(p.data.column_names(), shifted).center();
    for (std::size_t j = 0; j < c.cols(); ++j) {
      const auto col = c.vector(c.column_names()[j]);
      const double scale = std::max(1.0, col.cwiseAbs().maxCoeff());
      CHECK(std::abs(col.mean()) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("construction rejects malformed input") {
  CHECK_THROWS_AS(Dataset::from_columns({}, {}), ValidationError);
  CHECK_THROWS_AS(Dataset::from_columns({"a"}, {{}}), ValidationError);
  CHECK_THROWS_AS(Dataset::from_columns({"a", "a"}, {{1, 2}, {3, 4}}), ValidationError);
  CHECK_THROWS_AS(Dataset::from_columns({"a", "b"}, {{1, 2}, {3}}), ValidationError);
  CHECK_THROWS_AS(Dataset::from_columns({"a"}, {{1, 2}, {3, 4}}), ValidationError);

  try {
    Dataset::from_columns({"ok", "bad"}, {{1, 2}, {3, std::nan("")}});
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("'bad'") != std::string::npos);
  }
  CHECK_THROWS_AS(
      Dataset::from_columns({"a"}, {{1.0, std::numeric_limits<double>::infinity()}}),
      ValidationError);
}

TEST_CASE("center needs two rows") {
  CHECK_THROWS_AS(Dataset::from_columns({"a"}, {{1.0}}).center(), ValidationError);
}

TEST_CASE("lookup by name") {
  const auto d = Dataset::from_columns({"a", "b"}, {{1, 2}, {3, 4}});
  CHECK(d.index_of("b") == 1);
  CHECK(d.has_column("a"));
  CHECK_FALSE(d.has_column("z"));
  CHECK_THROWS_AS(d.index_of("z"), ValidationError);
  const auto m = d.select({"b", "a"});
  CHECK(m(0, 0) == 3.0);
  CHECK(m(1, 1) == 2.0);
}
