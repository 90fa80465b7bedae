#include "partialreg/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "partialreg/errors.hpp"

namespace partialreg {

namespace {

void validate(const std::vector<std::string>& names, const Eigen::MatrixXd& values) {
  if (names.empty() || values.cols() == 0) {
    throw ValidationError("dataset is empty: no columns");
  }
  if (values.rows() == 0) {
    throw ValidationError("dataset is empty: no rows");
  }
  if (static_cast<Eigen::Index>(names.size()) != values.cols()) {
    throw ValidationError("dataset has " + std::to_string(names.size()) + " names for " +
                          std::to_string(values.cols()) + " columns");
  }
  std::set<std::string_view> seen;
  for (const auto& name : names) {
    if (name.empty()) throw ValidationError("dataset column with empty name");
    if (!seen.insert(name).second) {
      throw ValidationError("duplicate column name '" + name + "'");
    }
  }
  for (Eigen::Index j = 0; j < values.cols(); ++j) {
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
      if (!std::isfinite(values(i, j))) {
        throw ValidationError("column '" + names[static_cast<std::size_t>(j)] +
                              "' has a non-finite value at row " + std::to_string(i + 1));
      }
    }
  }
}

}  // namespace

Dataset::Dataset(std::vector<std::string> names, Eigen::MatrixXd values,
                 std::vector<double> means, bool centered)
    : names_(std::move(names)), values_(std::move(values)), means_(std::move(means)),
      centered_(centered) {}

Dataset Dataset::from_columns(std::vector<std::string> names,
                              const std::vector<std::vector<double>>& columns) {
  if (columns.empty()) throw ValidationError("dataset is empty: no columns");
  if (names.size() != columns.size()) {
    throw ValidationError("dataset has " + std::to_string(names.size()) + " names for " +
                          std::to_string(columns.size()) + " columns");
  }
  const std::size_t n = columns.front().size();
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != n) {
      throw ValidationError("column '" + names[j] + "' has length " +
                            std::to_string(columns[j].size()) + ", expected " +
                            std::to_string(n));
    }
  }
  Eigen::MatrixXd values(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) {
    values.col(static_cast<Eigen::Index>(j)) =
        Eigen::Map<const Eigen::VectorXd>(columns[j].data(), static_cast<Eigen::Index>(n));
  }
  return from_matrix(std::move(names), std::move(values));
}

Dataset Dataset::from_matrix(std::vector<std::string> names, Eigen::MatrixXd values) {
  validate(names, values);
  std::vector<double> means(names.size(), 0.0);
  return Dataset(std::move(names), std::move(values), std::move(means), false);
}

bool Dataset::has_column(std::string_view name) const noexcept {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

std::size_t Dataset::index_of(std::string_view name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) {
    throw ValidationError("unknown column '" + std::string(name) + "'");
  }
  return static_cast<std::size_t>(it - names_.begin());
}

std::span<const double> Dataset::column(std::size_t j) const {
  return {values_.col(static_cast<Eigen::Index>(j)).data(), rows()};
}

std::span<const double> Dataset::column(std::string_view name) const {
  return column(index_of(name));
}

Eigen::Ref<const Eigen::VectorXd> Dataset::vector(std::string_view name) const {
  return values_.col(static_cast<Eigen::Index>(index_of(name)));
}

Eigen::MatrixXd Dataset::select(const std::vector<std::string>& names) const {
  Eigen::MatrixXd out(values_.rows(), static_cast<Eigen::Index>(names.size()));
  for (std::size_t j = 0; j < names.size(); ++j) {
    out.col(static_cast<Eigen::Index>(j)) = vector(names[j]);
  }
  return out;
}

Dataset Dataset::center() const {
  if (rows() < 2) {
    throw ValidationError("centering needs at least 2 rows, got " + std::to_string(rows()));
  }
  Eigen::MatrixXd centered = values_;
  std::vector<double> means = means_;
  for (Eigen::Index j = 0; j < centered.cols(); ++j) {
    // Second pass removes the rounding left by the first.
    double total = 0.0;
    for (int pass = 0; pass < 2; ++pass) {
      const double m = centered.col(j).mean();
      centered.col(j).array() -= m;
      total += m;
    }
    means[static_cast<std::size_t>(j)] += total;
  }
  return Dataset(names_, std::move(centered), std::move(means), true);
}

Dataset Dataset::uncenter() const {
  Eigen::MatrixXd raw = values_;
  for (Eigen::Index j = 0; j < raw.cols(); ++j) {
    raw.col(j).array() += means_[static_cast<std::size_t>(j)];
  }
  return Dataset(names_, std::move(raw), std::vector<double>(names_.size(), 0.0), false);
}

Dataset center(const Dataset& raw) { return raw.center(); }

double sample_mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double total = 0.0;
  for (double v : values) total += v;
  return total / static_cast<double>(values.size());
}

}  // namespace partialreg
