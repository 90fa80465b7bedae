#include "partialreg/errors.hpp"

#include <cstdio>

namespace partialreg {

ParseError::ParseError(std::size_t row, std::size_t column, const std::string& what)
    : ValidationError("row " + std::to_string(row) +
                      (column > 0 ? ", column " + std::to_string(column) : std::string()) + ": " +
                      what),
      row_(row), column_(column) {}

namespace {

std::string rank_message(const std::string& column, double condition) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", condition);
  return "rank-deficient design: column '" + column +
         "' is (numerically) a linear combination of the others; condition estimate " + buf;
}

}  // namespace

RankDeficiencyError::RankDeficiencyError(std::string dependent_column, double condition_estimate)
    : DegeneracyError(rank_message(dependent_column, condition_estimate)),
      dependent_column_(std::move(dependent_column)), condition_estimate_(condition_estimate) {}

}  // namespace partialreg
