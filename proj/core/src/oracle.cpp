#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "partialreg/errors.hpp"
#include "partialreg/ols.hpp"

namespace partialreg {

// Deliberately shares nothing with the QR path: moments are accumulated by
// hand and the k x k system is eliminated in long double.
Eigen::VectorXd normal_equations_oracle(const Dataset& data, std::string_view response,
                                        const std::vector<std::string>& regressors) {
  if (regressors.empty()) throw ValidationError("no regressors given");
  const std::size_t n = data.rows();
  const std::size_t k = regressors.size();

  std::vector<std::span<const double>> cols;
  cols.reserve(k);
  for (const auto& name : regressors) {
    if (name == response) {
      throw ValidationError("response '" + name + "' is listed among the regressors");
    }
    cols.push_back(data.column(name));
  }
  const auto y = data.column(response);

  // Augmented matrix [X'X | X'Y].
  std::vector<std::vector<long double>> a(k, std::vector<long double>(k + 1, 0.0L));
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = r; c < k; ++c) {
      long double s = 0.0L;
      for (std::size_t i = 0; i < n; ++i) {
        s += static_cast<long double>(cols[r][i]) * cols[c][i];
      }
      a[r][c] = s;
      a[c][r] = s;
    }
    long double s = 0.0L;
    for (std::size_t i = 0; i < n; ++i) s += static_cast<long double>(cols[r][i]) * y[i];
    a[r][k] = s;
  }

  long double max_diag = 0.0L;
  for (std::size_t r = 0; r < k; ++r) max_diag = std::max(max_diag, std::fabs(a[r][r]));
  if (max_diag == 0.0L) throw DegeneracyError("X'X is singular: all regressors are zero");

  for (std::size_t p = 0; p < k; ++p) {
    std::size_t pivot = p;
    for (std::size_t r = p + 1; r < k; ++r) {
      if (std::fabs(a[r][p]) > std::fabs(a[pivot][p])) pivot = r;
    }
    if (std::fabs(a[pivot][p]) <= 1e-15L * max_diag) {
      throw DegeneracyError("X'X is singular at column '" + regressors[p] + "'");
    }
    std::swap(a[p], a[pivot]);
    for (std::size_t r = p + 1; r < k; ++r) {
      const long double factor = a[r][p] / a[p][p];
      if (factor == 0.0L) continue;
      for (std::size_t c = p; c <= k; ++c) a[r][c] -= factor * a[p][c];
    }
  }

  std::vector<long double> b(k, 0.0L);
  for (std::size_t p = k; p-- > 0;) {
    long double s = a[p][k];
    for (std::size_t c = p + 1; c < k; ++c) s -= a[p][c] * b[c];
    b[p] = s / a[p][p];
  }

  Eigen::VectorXd out(static_cast<Eigen::Index>(k));
  for (std::size_t j = 0; j < k; ++j) out[static_cast<Eigen::Index>(j)] = static_cast<double>(b[j]);
  return out;
}

}  // namespace partialreg
