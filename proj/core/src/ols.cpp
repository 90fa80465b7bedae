#include "partialreg/ols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "partialreg/errors.hpp"

namespace partialreg {

namespace {

// Mean tolerance used to decide whether a dataset really is centered.
bool column_is_centered(const Eigen::Ref<const Eigen::VectorXd>& column) {
  const double scale = std::max(1.0, column.cwiseAbs().maxCoeff());
  return std::abs(column.mean()) <= 1e-12 * scale;
}

void check_request(const Dataset& data, std::string_view response,
                   const std::vector<std::string>& regressors) {
  if (!data.centered()) {
    throw ValidationError("dataset must be centered before fitting");
  }
  if (regressors.empty()) throw ValidationError("no regressors given");
  data.index_of(response);
  std::set<std::string_view> seen;
  for (const auto& name : regressors) {
    if (name == response) {
      throw ValidationError("response '" + name + "' is listed among the regressors");
    }
    if (!seen.insert(name).second) {
      throw ValidationError("regressor '" + name + "' is listed twice");
    }
    data.index_of(name);
  }
  if (data.rows() <= regressors.size()) {
    throw ValidationError("need more observations than regressors: n = " +
                          std::to_string(data.rows()) + ", k = " +
                          std::to_string(regressors.size()));
  }
}

}  // namespace

double RegressionFit::coefficient(std::string_view regressor) const {
  const auto it = std::find(regressor_names.begin(), regressor_names.end(), regressor);
  if (it == regressor_names.end()) {
    throw ValidationError("'" + std::string(regressor) + "' is not a regressor of this fit");
  }
  return beta[it - regressor_names.begin()];
}

LeastSquaresSolution least_squares(const Eigen::MatrixXd& design, const Eigen::VectorXd& response,
                                   const std::vector<std::string>& names,
                                   const SolverOptions& options) {
  const Eigen::Index k = design.cols();
  Eigen::VectorXd norms = design.colwise().norm().transpose();
  for (Eigen::Index j = 0; j < k; ++j) {
    if (norms[j] == 0.0) {
      throw DegeneracyError("column '" + names[static_cast<std::size_t>(j)] +
                            "' is constant (zero variance after centering)");
    }
  }
  const Eigen::MatrixXd scaled = design * norms.cwiseInverse().asDiagonal();
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(scaled);
  const Eigen::MatrixXd r =
      qr.matrixQR().topRows(k).triangularView<Eigen::Upper>().toDenseMatrix();

  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(r);
  const auto& sv = svd.singularValues();
  const double smin = sv[k - 1];
  const double condition =
      smin > 0.0 ? sv[0] / smin : std::numeric_limits<double>::infinity();
  if (!(condition <= options.max_condition)) {
    Eigen::Index dependent = 0;
    r.diagonal().cwiseAbs().minCoeff(&dependent);
    throw RankDeficiencyError(names[static_cast<std::size_t>(dependent)], condition);
  }

  LeastSquaresSolution out;
  Eigen::VectorXd scaled_beta = qr.solve(response);
  Eigen::VectorXd residuals = response - scaled * scaled_beta;
  // Project the computed residual once more. Correcting from the residual
  // rather than from `response` keeps the leftover span(X) component at
  // rounding level of the residual itself.
  const Eigen::VectorXd correction = qr.solve(residuals);
  residuals -= scaled * correction;
  out.beta = (scaled_beta + correction).cwiseQuotient(norms);
  out.residuals = std::move(residuals);
  out.condition_estimate = condition;
  return out;
}

RegressionFit fit_ols(const Dataset& data, std::string_view response,
                      const std::vector<std::string>& regressors, const SolverOptions& options) {
  check_request(data, response, regressors);
  const Eigen::VectorXd y = data.vector(response);
  if (!column_is_centered(y)) {
    throw ValidationError("response '" + std::string(response) + "' is not centered");
  }
  const Eigen::MatrixXd x = data.select(regressors);

  auto solution = least_squares(x, y, regressors, options);

  RegressionFit fit;
  fit.response_name = std::string(response);
  fit.regressor_names = regressors;
  fit.beta = std::move(solution.beta);
  fit.residuals = std::move(solution.residuals);
  fit.fitted = y - fit.residuals;
  fit.rank = static_cast<int>(regressors.size());
  fit.condition_estimate = solution.condition_estimate;
  fit.r_squared = r_squared_of(fit, y);
  return fit;
}

double r_squared_of(const RegressionFit& fit, const Eigen::VectorXd& y) {
  const double tss = y.squaredNorm();
  if (tss == 0.0) {
    throw DegeneracyError("response '" + fit.response_name +
                          "' has zero variance; R^2 is undefined");
  }
  const double rss = fit.residuals.squaredNorm();
  return std::clamp(1.0 - rss / tss, 0.0, 1.0);
}

double implied_intercept(const Dataset& data, const RegressionFit& fit) {
  double intercept = data.mean_of(fit.response_name);
  for (std::size_t j = 0; j < fit.regressor_names.size(); ++j) {
    intercept -= fit.beta[static_cast<Eigen::Index>(j)] * data.mean_of(fit.regressor_names[j]);
  }
  return intercept;
}

}  // namespace partialreg
