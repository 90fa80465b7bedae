#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "partialreg/dataset.hpp"
#include "partialreg/ols.hpp"

namespace partialreg {

/// Population for Y = X beta + eps with (X, eps) jointly Gaussian.
///
/// `sigma_x_eps` is cov(X, eps). Zero means the errors are exogenous and the
/// least-squares coefficient converges to `beta_structural`; anything else
/// makes it converge to beta + Sigma_xx^{-1} sigma_x_eps instead.
struct SimulationSpec {
  int k = 1;
  Eigen::MatrixXd sigma_xx;
  Eigen::VectorXd beta_structural;
  /// Standard deviation of eps.
  double sigma_eps = 1.0;
  Eigen::VectorXd sigma_x_eps;
  std::size_t n = 100;
  std::uint64_t seed = 0;

  /// Throws ValidationError on shape or range problems and DegeneracyError
  /// when sigma_xx is not positive definite or the joint covariance of
  /// (X, eps) is not positive semidefinite.
  void validate() const;

  /// (k+1) x (k+1) covariance of (X_1..X_k, eps).
  Eigen::MatrixXd extended_covariance() const;
};

/// Quantities the sample was built from; for tests and bias reports only.
struct SimulationTruth {
  Eigen::VectorXd beta_structural;
  Eigen::VectorXd epsilon;
};

struct GeneratedSample {
  /// Columns x1..xk then y, exactly as drawn.
  Dataset raw;
  /// `raw` after centering; what the fitting routines consume.
  Dataset data;
  SimulationTruth truth;
};

/// Regressor names used by `generate`: x1, ..., xk.
std::vector<std::string> simulated_regressor_names(int k);

/// Lower-triangular L with L L' = `cov`. Zero pivots are allowed (PSD input)
/// and produce a zero column; a negative pivot beyond rounding throws
/// DegeneracyError.
Eigen::MatrixXd lower_cholesky(const Eigen::MatrixXd& cov);

/// Draws n rows. Row i consumes k+1 consecutive standard normals z from the
/// seeded stream, colors them as L z with L = lower_cholesky of the extended
/// covariance, and sets y = x' beta + eps. Bit-identical for a given spec.
GeneratedSample generate(const SimulationSpec& spec);

/// beta + Sigma_xx^{-1} sigma_x_eps: the coefficient of the best linear
/// predictor of Y given X.
Eigen::VectorXd population_gamma(const SimulationSpec& spec);

/// Best fit versus structural parameter for one simulated sample.
struct BiasReport {
  Eigen::VectorXd gamma_hat;
  Eigen::VectorXd beta_structural;
  Eigen::VectorXd gamma_population;
  /// gamma_hat - gamma_population: sampling error only.
  Eigen::VectorXd gap_to_population;
  /// gamma_hat - beta_structural: sampling error plus endogeneity bias.
  Eigen::VectorXd gap_to_structural;
  /// gamma_population - beta_structural.
  Eigen::VectorXd endogeneity_bias;
  /// Asymptotic standard deviation of gamma_hat at this n.
  Eigen::VectorXd standard_errors;
  double r_squared = 0.0;
  double population_r_squared = 0.0;
  bool exogenous = true;
};

BiasReport bias_report(const SimulationSpec& spec, const RegressionFit& fit);

/// An n-row centered dataset whose sample covariance (divisor n) equals
/// `target_cov` up to rounding. A seeded Gaussian draw is centered,
/// orthonormalized and recolored by the Cholesky factor of the target.
/// Requires n > dimension and a positive definite target. Column names
/// default to x1..xd.
Dataset exact_moment_sample(const Eigen::MatrixXd& target_cov, std::size_t n,
                            std::uint64_t seed, std::vector<std::string> names = {});

/// Sample covariance with divisor n of the listed (centered) columns.
Eigen::MatrixXd sample_covariance(const Dataset& data, const std::vector<std::string>& names);

}  // namespace partialreg
