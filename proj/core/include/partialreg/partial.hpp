#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "partialreg/dataset.hpp"
#include "partialreg/ols.hpp"

namespace partialreg {

/// One multivariate coefficient read as a univariate regression.
///
/// `delta` is the focus regressor with the controls partialled out. The
/// multivariate coefficient applies to `delta`, not to the raw focus column,
/// which is why a different control set generally changes the coefficient.
struct PartialDecomposition {
  std::string focus;
  std::vector<std::string> controls;
  Eigen::VectorXd delta;
  double beta_multivariate = 0.0;
  /// Raw response regressed on delta.
  double beta_prt_v1 = 0.0;
  /// Response residualized on the controls, regressed on delta.
  double beta_prt_v2 = 0.0;
  double semi_partial_r2 = 0.0;
  double partial_r2 = 0.0;
  /// Signed; shares its sign with beta_multivariate.
  double partial_correlation = 0.0;
};

/// `target` minus its least-squares projection on `controls`. With no
/// controls the target column is returned unchanged. A target that lies in
/// the span of the controls comes back as (numerically) zero; callers that
/// divide by its variance reject that case.
Eigen::VectorXd residualize(const Dataset& data, std::string_view target,
                            const std::vector<std::string>& controls,
                            const SolverOptions& options = {});

/// <Y, delta> / <delta, delta> with delta = focus residualized on controls.
double prt_v1(const Dataset& data, std::string_view response, std::string_view focus,
              const std::vector<std::string>& controls, const SolverOptions& options = {});

/// Both response and focus residualized on the controls, then the simple
/// regression slope of one residual on the other.
double prt_v2(const Dataset& data, std::string_view response, std::string_view focus,
              const std::vector<std::string>& controls, const SolverOptions& options = {});

/// Squared correlation of the raw response with delta: the R^2 gained by
/// adding the focus to a model that already holds the controls.
double semi_partial_r2(const Dataset& data, std::string_view response, std::string_view focus,
                       const std::vector<std::string>& controls,
                       const SolverOptions& options = {});

/// Squared correlation of the residualized response with delta.
double partial_r2(const Dataset& data, std::string_view response, std::string_view focus,
                  const std::vector<std::string>& controls, const SolverOptions& options = {});

/// Correlation of a and b after both are residualized on the same controls.
/// Symmetric in (a, b) bit for bit.
double partial_correlation(const Dataset& data, std::string_view a, std::string_view b,
                           const std::vector<std::string>& controls,
                           const SolverOptions& options = {});

/// One record per regressor, in the order given; each regressor's controls
/// are the remaining regressors in their original order. All records share
/// a single fit_ols call for beta_multivariate.
std::vector<PartialDecomposition> decompose(const Dataset& data, std::string_view response,
                                            const std::vector<std::string>& regressors,
                                            const SolverOptions& options = {});

/// Same as above, reusing an existing full fit of `response` on `regressors`.
std::vector<PartialDecomposition> decompose(const Dataset& data, const RegressionFit& fit,
                                            const SolverOptions& options = {});

}  // namespace partialreg
