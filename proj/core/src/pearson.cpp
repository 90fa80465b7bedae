#include "partialreg/pearson.hpp"

#include <cmath>
#include <cstdio>

#include "partialreg/errors.hpp"
#include "partialreg/ols.hpp"

namespace partialreg {

namespace {

double one_minus_rho_sq(const PearsonScenario& s) {
  if (!(s.rho_sq < 1.0)) {
    throw DegeneracyError("regressors are perfectly correlated (rho^2 >= 1)");
  }
  return 1.0 - s.rho_sq;
}

void require_uncorrelated_x2(const PearsonScenario& s) {
  if (s.beta_y_x2 != 0.0) {
    throw ValidationError("this scenario requires beta_y_x2 = 0 (X2 uncorrelated with Y)");
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

PearsonScenario PearsonScenario::make(double beta_y_x1, double beta_y_x2, double beta_x2_x1,
                                      double beta_x1_x2) {
  for (double v : {beta_y_x1, beta_y_x2, beta_x2_x1, beta_x1_x2}) {
    if (!std::isfinite(v)) throw ValidationError("scenario slopes must be finite");
  }
  const bool x2_x1_zero = beta_x2_x1 == 0.0;
  const bool x1_x2_zero = beta_x1_x2 == 0.0;
  if (x2_x1_zero != x1_x2_zero || (!x2_x1_zero && (beta_x2_x1 > 0.0) != (beta_x1_x2 > 0.0))) {
    throw ValidationError("cross slopes beta_x2_x1 and beta_x1_x2 must share a sign or both be 0");
  }
  PearsonScenario s{beta_y_x1, beta_y_x2, beta_x2_x1, beta_x1_x2, beta_x2_x1 * beta_x1_x2};
  if (!(s.rho_sq < 1.0)) {
    throw DegeneracyError("regressors are perfectly correlated: rho^2 = " + fmt(s.rho_sq));
  }
  return s;
}

PearsonScenario PearsonScenario::with_correlation(double beta_y_x1, double beta_y_x2,
                                                  double rho) {
  return make(beta_y_x1, beta_y_x2, rho, rho);
}

PearsonScenario PearsonScenario::from_sample(const Dataset& data, const std::string& y,
                                             const std::string& x1, const std::string& x2) {
  if (!data.centered()) throw ValidationError("dataset must be centered");
  const auto vy = data.vector(y);
  const auto v1 = data.vector(x1);
  const auto v2 = data.vector(x2);
  const double s11 = v1.squaredNorm();
  const double s22 = v2.squaredNorm();
  if (s11 == 0.0 || s22 == 0.0) throw DegeneracyError("a regressor has zero variance");
  const double s12 = v1.dot(v2);
  return make(vy.dot(v1) / s11, vy.dot(v2) / s22, s12 / s11, s12 / s22);
}

double multivariate_beta1(const PearsonScenario& s) {
  return (s.beta_y_x1 - s.beta_y_x2 * s.beta_x2_x1) / one_minus_rho_sq(s);
}

double multivariate_beta2(const PearsonScenario& s) {
  return (s.beta_y_x2 - s.beta_y_x1 * s.beta_x1_x2) / one_minus_rho_sq(s);
}

std::pair<double, double> attenuation_scenario(double beta_y_x1, double beta_x1_x2,
                                               double beta_x2_x1) {
  const auto s = PearsonScenario::make(beta_y_x1, 0.0, beta_x2_x1, beta_x1_x2);
  const double denom = one_minus_rho_sq(s);
  // + 0.0 turns a -0 into 0 when there is no assortative mating.
  return {beta_y_x1 / denom, -beta_y_x1 * beta_x1_x2 / denom + 0.0};
}

Eigen::Matrix3d scenario_covariance(const PearsonScenario& s, double var_x1,
                                    double residual_var) {
  if (!(var_x1 > 0.0) || !(residual_var >= 0.0)) {
    throw ValidationError("var_x1 must be positive and residual_var non-negative");
  }
  const double c12 = s.beta_x2_x1 * var_x1;
  const double var_x2 = s.non_assortative() ? 1.0 : c12 / s.beta_x1_x2;
  const double c1y = s.beta_y_x1 * var_x1;
  const double c2y = s.beta_y_x2 * var_x2;
  const double b1 = multivariate_beta1(s);
  const double b2 = multivariate_beta2(s);
  const double explained = b1 * c1y + b2 * c2y;

  Eigen::Matrix3d cov;
  cov << var_x1, c12, c1y,
         c12, var_x2, c2y,
         c1y, c2y, explained + residual_var;
  return cov;
}

DeltaIdentityReport check_delta_identity(const PearsonScenario& s, const Dataset& sample,
                                         double tolerance, const std::string& y,
                                         const std::string& x1, const std::string& x2) {
  require_uncorrelated_x2(s);
  const auto fit = fit_ols(sample, y, {x1, x2});
  const auto vy = sample.vector(y);
  const auto v1 = sample.vector(x1);
  const auto v2 = sample.vector(x2);

  DeltaIdentityReport r;
  r.tolerance = tolerance;
  r.beta1_closed_form = multivariate_beta1(s);
  r.fitted_beta1 = fit.beta[0];
  r.fitted_beta2 = fit.beta[1];
  r.sample_beta_y_x2 = vy.dot(v2) / v2.squaredNorm();
  r.sample_corr_y_x2 = vy.dot(v2) / std::sqrt(vy.squaredNorm() * v2.squaredNorm());

  const Eigen::VectorXd collapsed = r.beta1_closed_form * (v1 - s.beta_x1_x2 * v2);
  const double fitted_norm = fit.fitted.norm();
  const double gap = (fit.fitted - collapsed).norm();
  r.relative_discrepancy = fitted_norm > 0.0 ? gap / fitted_norm : gap;

  r.construction_ok = std::abs(r.sample_corr_y_x2) <= tolerance;
  r.holds = r.construction_ok && r.relative_discrepancy <= tolerance;
  if (!r.construction_ok) {
    r.message = "sample breaks the construction: corr(" + y + ", " + x2 + ") = " +
                fmt(r.sample_corr_y_x2) + " exceeds tolerance " + fmt(tolerance);
  } else if (!r.holds) {
    r.message = "fitted surface differs from " + fmt(r.beta1_closed_form) + " * (" + x1 +
                " - " + fmt(s.beta_x1_x2) + " * " + x2 + ") by relative " +
                fmt(r.relative_discrepancy) + " > " + fmt(tolerance);
  } else {
    r.message = "fitted surface equals " + fmt(r.beta1_closed_form) + " * (" + x1 + " - " +
                fmt(s.beta_x1_x2) + " * " + x2 + ") within tolerance " + fmt(tolerance);
  }
  return r;
}

AmplificationReport amplification_and_variance(const PearsonScenario& s, double var_x1) {
  require_uncorrelated_x2(s);
  const Eigen::Matrix3d cov = scenario_covariance(s, var_x1, 1.0);
  const double b = s.beta_x1_x2;

  AmplificationReport r;
  r.rho_sq = s.rho_sq;
  r.var_x1 = var_x1;
  r.simple_beta = s.beta_y_x1;
  r.amplification_factor = 1.0 / one_minus_rho_sq(s);
  r.amplified_beta = multivariate_beta1(s);
  r.var_delta = cov(0, 0) - 2.0 * b * cov(0, 1) + b * b * cov(1, 1);
  r.explained_variance_full = r.amplified_beta * r.amplified_beta * r.var_delta;
  r.explained_variance_simple = s.beta_y_x1 * s.beta_y_x1 * var_x1;
  r.variance_ratio = r.explained_variance_simple > 0.0
                         ? r.explained_variance_full / r.explained_variance_simple
                         : r.amplification_factor;
  r.cov_y_x1 = cov(2, 0);
  r.cov_y_delta = cov(2, 0) - b * cov(2, 1);
  r.beta_amplified = std::abs(r.amplified_beta) >= std::abs(r.simple_beta);
  r.explains_at_least_as_much = r.explained_variance_full >= r.explained_variance_simple;
  return r;
}

}  // namespace partialreg
