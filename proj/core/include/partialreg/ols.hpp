#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "partialreg/dataset.hpp"

namespace partialreg {

struct SolverOptions {
  /// Designs whose condition estimate exceeds this are rank-deficient.
  double max_condition = 1e10;
};

/// Least-squares fit of a centered response on centered regressors.
///
/// `beta[j]` is the coefficient of `regressor_names[j]`. The fit is a best
/// linear predictor; it says nothing about a structural parameter unless the
/// errors are uncorrelated with the regressors.
struct RegressionFit {
  std::string response_name;
  std::vector<std::string> regressor_names;
  Eigen::VectorXd beta;
  Eigen::VectorXd residuals;
  Eigen::VectorXd fitted;
  double r_squared = 0.0;
  int rank = 0;
  /// 2-norm condition number of the design after scaling columns to unit length.
  double condition_estimate = 0.0;

  /// Throws ValidationError for a name that is not a regressor of this fit.
  double coefficient(std::string_view regressor) const;
};

/// Raw output of the Householder solver on a bare matrix.
struct LeastSquaresSolution {
  Eigen::VectorXd beta;
  Eigen::VectorXd residuals;
  double condition_estimate = 0.0;
};

/// Householder QR solve of min ||y - X b||. `names` label the columns of X
/// for error messages. Throws DegeneracyError for an all-zero column and
/// RankDeficiencyError when the equilibrated condition estimate exceeds
/// `options.max_condition`.
LeastSquaresSolution least_squares(const Eigen::MatrixXd& design, const Eigen::VectorXd& response,
                                   const std::vector<std::string>& names,
                                   const SolverOptions& options = {});

/// Fits `response` on `regressors`. The dataset must be centered (there is
/// no intercept column; the means stored in the dataset give the implied
/// intercept). Rejects an empty regressor list, duplicates, the response
/// among the regressors, n <= k, constant columns, and a constant response.
RegressionFit fit_ols(const Dataset& data, std::string_view response,
                      const std::vector<std::string>& regressors,
                      const SolverOptions& options = {});

/// Solves (X'X) b = X'Y by Gaussian elimination with partial pivoting, in
/// extended precision. Independent of the QR path; meant for cross-checks
/// on small problems (n <= 1e4, k <= 50). Throws DegeneracyError when X'X is
/// singular.
Eigen::VectorXd normal_equations_oracle(const Dataset& data, std::string_view response,
                                        const std::vector<std::string>& regressors);

/// 1 - RSS/TSS for the centered response `y` the fit was produced from.
/// Throws DegeneracyError when y has zero total sum of squares.
double r_squared_of(const RegressionFit& fit, const Eigen::VectorXd& y);

/// Intercept of the fit on the raw scale: the response mean minus the
/// coefficient-weighted regressor means recorded at centering time.
double implied_intercept(const Dataset& data, const RegressionFit& fit);

}  // namespace partialreg
