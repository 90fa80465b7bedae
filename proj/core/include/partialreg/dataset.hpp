#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace partialreg {

/// Named, column-oriented observation matrix.
///
/// A Dataset is immutable once built. Construction validates that every
/// column has the same length n >= 1, that names are unique and non-empty,
/// and that every value is finite. Regression routines require a centered
/// dataset (every column has sample mean zero); `center()` produces one and
/// records the subtracted means so the raw data and implied intercepts stay
/// recoverable.
class Dataset {
 public:
  static Dataset from_columns(std::vector<std::string> names,
                              const std::vector<std::vector<double>>& columns);

  /// Takes an n x p matrix whose columns line up with `names`.
  static Dataset from_matrix(std::vector<std::string> names, Eigen::MatrixXd values);

  std::size_t rows() const noexcept { return static_cast<std::size_t>(values_.rows()); }
  std::size_t cols() const noexcept { return static_cast<std::size_t>(values_.cols()); }

  const std::vector<std::string>& column_names() const noexcept { return names_; }
  bool has_column(std::string_view name) const noexcept;
  /// Throws ValidationError naming the missing column.
  std::size_t index_of(std::string_view name) const;

  std::span<const double> column(std::size_t j) const;
  std::span<const double> column(std::string_view name) const;
  Eigen::Ref<const Eigen::VectorXd> vector(std::string_view name) const;

  /// n x k matrix holding the requested columns in the requested order.
  Eigen::MatrixXd select(const std::vector<std::string>& names) const;

  const Eigen::MatrixXd& values() const noexcept { return values_; }

  /// Means subtracted by `center()`; all zero for a dataset that was never centered.
  const std::vector<double>& means() const noexcept { return means_; }
  double mean_of(std::string_view name) const { return means_[index_of(name)]; }
  bool centered() const noexcept { return centered_; }

  /// Requires n >= 2. Centering an already-centered dataset subtracts the
  /// (tiny) residual means and accumulates them into `means()`.
  Dataset center() const;

  /// Adds the recorded means back. Identity on an uncentered dataset.
  Dataset uncenter() const;

 private:
  Dataset(std::vector<std::string> names, Eigen::MatrixXd values,
          std::vector<double> means, bool centered);

  std::vector<std::string> names_;
  Eigen::MatrixXd values_;
  std::vector<double> means_;
  bool centered_ = false;
};

/// Free-function spelling of `raw.center()`.
Dataset center(const Dataset& raw);

/// Sample mean of a column with divisor n.
double sample_mean(std::span<const double> values);

}  // namespace partialreg
