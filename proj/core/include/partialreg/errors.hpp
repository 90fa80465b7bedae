#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace partialreg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad names, mismatched lengths, non-finite values,
/// violated preconditions. The CLI maps these to exit status 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// CSV ingestion failure with the 1-based position of the offending cell.
/// A column of 0 means the whole row is at fault.
class ParseError : public ValidationError {
 public:
  ParseError(std::size_t row, std::size_t column, const std::string& what);

  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

/// The numbers are well-formed but the quantity asked for is undefined:
/// zero variance, collinear focus, singular moment matrix. Exit status 3.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

/// Design matrix whose condition estimate exceeds the configured gate.
class RankDeficiencyError : public DegeneracyError {
 public:
  RankDeficiencyError(std::string dependent_column, double condition_estimate);

  const std::string& dependent_column() const noexcept { return dependent_column_; }
  double condition_estimate() const noexcept { return condition_estimate_; }

 private:
  std::string dependent_column_;
  double condition_estimate_;
};

}  // namespace partialreg
