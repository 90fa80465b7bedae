#pragma once

#include <string>
#include <utility>

#include <Eigen/Core>

#include "partialreg/dataset.hpp"

namespace partialreg {

/// Simple-regression slopes for a response Y and two regressors X1, X2.
///
/// rho_sq is the squared correlation of X1 and X2, which equals the product
/// of the two cross slopes. Construct through `make` so the invariants hold:
/// rho_sq < 1, and the cross slopes share a sign (or are both zero).
struct PearsonScenario {
  double beta_y_x1 = 0.0;
  double beta_y_x2 = 0.0;
  double beta_x2_x1 = 0.0;
  double beta_x1_x2 = 0.0;
  double rho_sq = 0.0;

  static PearsonScenario make(double beta_y_x1, double beta_y_x2, double beta_x2_x1,
                              double beta_x1_x2);

  /// Unit-variance regressors with correlation rho: both cross slopes equal rho.
  static PearsonScenario with_correlation(double beta_y_x1, double beta_y_x2, double rho);

  /// Slopes read off the sample moments (divisor n) of a centered dataset.
  static PearsonScenario from_sample(const Dataset& data, const std::string& y,
                                     const std::string& x1, const std::string& x2);

  bool non_assortative() const noexcept { return beta_x2_x1 == 0.0 && beta_x1_x2 == 0.0; }
};

/// (beta_y_x1 - beta_y_x2 * beta_x2_x1) / (1 - rho^2).
double multivariate_beta1(const PearsonScenario& s);
/// (beta_y_x2 - beta_y_x1 * beta_x1_x2) / (1 - rho^2).
double multivariate_beta2(const PearsonScenario& s);

/// Two-regressor coefficients when X2 is uncorrelated with Y:
/// (beta_y_x1 / (1 - rho^2), -beta_y_x1 * beta_x1_x2 / (1 - rho^2)).
/// The second is negative whenever every input is positive.
std::pair<double, double> attenuation_scenario(double beta_y_x1, double beta_x1_x2,
                                               double beta_x2_x1);

/// Population covariance of (x1, x2, y) realizing `s`, with Var(X1) =
/// `var_x1` and `residual_var` left unexplained in Y. Var(X2) is fixed by
/// the ratio of the cross slopes (1 when they are zero).
Eigen::Matrix3d scenario_covariance(const PearsonScenario& s, double var_x1 = 1.0,
                                    double residual_var = 1.0);

/// Outcome of checking that, with beta_y_x2 = 0, the two-regressor fit
/// collapses to beta1 * (X1 - beta_x1_x2 * X2).
struct DeltaIdentityReport {
  double beta1_closed_form = 0.0;
  double fitted_beta1 = 0.0;
  double fitted_beta2 = 0.0;
  /// Slope of Y on X2 measured in the sample; zero by construction.
  double sample_beta_y_x2 = 0.0;
  /// Sample correlation of Y and X2, the scale-free version of the above.
  double sample_corr_y_x2 = 0.0;
  /// RMS of (fitted - beta1 * delta) over RMS of fitted.
  double relative_discrepancy = 0.0;
  double tolerance = 0.0;
  bool construction_ok = false;
  bool holds = false;
  std::string message;
};

/// `sample` must be centered and hold columns `y`, `x1`, `x2`. A sample that
/// breaks the beta_y_x2 = 0 construction by more than `tolerance` yields a
/// report with construction_ok = false and an explanatory message.
/// Throws ValidationError when s.beta_y_x2 != 0.
DeltaIdentityReport check_delta_identity(const PearsonScenario& s, const Dataset& sample,
                                         double tolerance = 1e-10, const std::string& y = "y",
                                         const std::string& x1 = "x1",
                                         const std::string& x2 = "x2");

/// Closed-form consequences of partialling X2 out of X1 when X2 is
/// uncorrelated with Y: the coefficient grows, the regressor it applies to
/// shrinks, and the covariance with Y is unchanged.
struct AmplificationReport {
  double rho_sq = 0.0;
  double simple_beta = 0.0;
  double amplified_beta = 0.0;
  /// 1 / (1 - rho^2)
  double amplification_factor = 0.0;
  double var_x1 = 1.0;
  /// Var(X1 - beta_x1_x2 X2) = (1 - rho^2) Var(X1)
  double var_delta = 0.0;
  /// Var(beta1 * delta): variance explained by the two-regressor fit.
  double explained_variance_full = 0.0;
  /// beta_y_x1^2 Var(X1): variance explained by X1 alone.
  double explained_variance_simple = 0.0;
  double variance_ratio = 0.0;
  double cov_y_x1 = 0.0;
  double cov_y_delta = 0.0;
  bool beta_amplified = false;
  bool explains_at_least_as_much = false;
};

/// Requires s.beta_y_x2 == 0 (ValidationError otherwise).
AmplificationReport amplification_and_variance(const PearsonScenario& s, double var_x1 = 1.0);

}  // namespace partialreg
