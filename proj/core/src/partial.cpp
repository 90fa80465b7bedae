#include "partialreg/partial.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "partialreg/errors.hpp"

namespace partialreg {

namespace {

void check_names(const Dataset& data, std::string_view target,
                 const std::vector<std::string>& controls) {
  if (!data.centered()) throw ValidationError("dataset must be centered");
  data.index_of(target);
  std::set<std::string_view> seen;
  for (const auto& c : controls) {
    data.index_of(c);
    if (c == target) {
      throw ValidationError("'" + c + "' cannot be both the target and a control");
    }
    if (!seen.insert(c).second) throw ValidationError("control '" + c + "' is listed twice");
  }
  if (controls.size() >= data.rows()) {
    throw ValidationError("need more observations than controls: n = " +
                          std::to_string(data.rows()) + ", controls = " +
                          std::to_string(controls.size()));
  }
}

// ||residual|| below this fraction of ||original|| counts as fully explained.
double degeneracy_ratio(const SolverOptions& options) { return 1.0 / options.max_condition; }

// Everything the partial statistics of one (response, focus, controls)
// triple are built from.
struct Partialled {
  Eigen::VectorXd delta;
  Eigen::VectorXd response_residual;
  double yy = 0.0;        // <Y, Y>
  double yres_yres = 0.0; // <Y_res, Y_res>, never above yy
  double dd = 0.0;        // <delta, delta>
  double raw_cross = 0.0; // <Y, delta>
  double cross = 0.0;     // <Y_res, delta>
};

Eigen::VectorXd checked_delta(const Dataset& data, std::string_view focus,
                              const std::vector<std::string>& controls,
                              const SolverOptions& options) {
  Eigen::VectorXd delta = residualize(data, focus, controls, options);
  const double focus_norm = data.vector(focus).norm();
  if (focus_norm == 0.0) {
    throw DegeneracyError("focus '" + std::string(focus) + "' is constant");
  }
  if (delta.norm() <= degeneracy_ratio(options) * focus_norm) {
    throw DegeneracyError("focus '" + std::string(focus) +
                          "' is collinear with its controls: nothing is left after "
                          "partialling them out");
  }
  return delta;
}

Partialled partial_out(const Dataset& data, std::string_view response, std::string_view focus,
                       const std::vector<std::string>& controls, const SolverOptions& options) {
  check_names(data, focus, controls);
  data.index_of(response);
  if (response == focus) {
    throw ValidationError("response '" + std::string(response) + "' cannot be the focus");
  }
  if (std::find(controls.begin(), controls.end(), response) != controls.end()) {
    throw ValidationError("response '" + std::string(response) + "' is listed as a control");
  }

  Partialled p;
  p.delta = checked_delta(data, focus, controls, options);
  const Eigen::VectorXd y = data.vector(response);
  p.response_residual = residualize(data, response, controls, options);
  p.yy = y.squaredNorm();
  p.yres_yres = std::min(p.response_residual.squaredNorm(), p.yy);
  p.dd = p.delta.squaredNorm();
  p.raw_cross = y.dot(p.delta);
  p.cross = p.response_residual.dot(p.delta);
  return p;
}

void require_response_variance(const Partialled& p, std::string_view response) {
  if (p.yy == 0.0) {
    throw DegeneracyError("response '" + std::string(response) + "' has zero variance");
  }
}

void require_residual_variance(const Partialled& p, std::string_view response,
                               const SolverOptions& options) {
  require_response_variance(p, response);
  if (std::sqrt(p.yres_yres) <= degeneracy_ratio(options) * std::sqrt(p.yy)) {
    throw DegeneracyError("the controls explain all of the variance of '" +
                          std::string(response) + "'; the partial R^2 is undefined");
  }
}

double semi_partial_from(const Partialled& p) {
  return std::clamp(p.cross * p.cross / (p.yy * p.dd), 0.0, 1.0);
}

double partial_r2_from(const Partialled& p) {
  return std::clamp(p.cross * p.cross / (p.yres_yres * p.dd), 0.0, 1.0);
}

double partial_correlation_from(const Partialled& p) {
  return std::clamp(p.cross / std::sqrt(p.yres_yres * p.dd), -1.0, 1.0);
}

}  // namespace

Eigen::VectorXd residualize(const Dataset& data, std::string_view target,
                            const std::vector<std::string>& controls,
                            const SolverOptions& options) {
  check_names(data, target, controls);
  const Eigen::VectorXd y = data.vector(target);
  if (controls.empty()) return y;
  return least_squares(data.select(controls), y, controls, options).residuals;
}

double prt_v1(const Dataset& data, std::string_view response, std::string_view focus,
              const std::vector<std::string>& controls, const SolverOptions& options) {
  const auto p = partial_out(data, response, focus, controls, options);
  return p.raw_cross / p.dd;
}

double prt_v2(const Dataset& data, std::string_view response, std::string_view focus,
              const std::vector<std::string>& controls, const SolverOptions& options) {
  const auto p = partial_out(data, response, focus, controls, options);
  return p.cross / p.dd;
}

double semi_partial_r2(const Dataset& data, std::string_view response, std::string_view focus,
                       const std::vector<std::string>& controls, const SolverOptions& options) {
  const auto p = partial_out(data, response, focus, controls, options);
  require_response_variance(p, response);
  return semi_partial_from(p);
}

double partial_r2(const Dataset& data, std::string_view response, std::string_view focus,
                  const std::vector<std::string>& controls, const SolverOptions& options) {
  const auto p = partial_out(data, response, focus, controls, options);
  require_residual_variance(p, response, options);
  return partial_r2_from(p);
}

double partial_correlation(const Dataset& data, std::string_view a, std::string_view b,
                           const std::vector<std::string>& controls,
                           const SolverOptions& options) {
  const Eigen::VectorXd ra = checked_delta(data, a, controls, options);
  const Eigen::VectorXd rb = checked_delta(data, b, controls, options);
  return std::clamp(ra.dot(rb) / std::sqrt(ra.squaredNorm() * rb.squaredNorm()), -1.0, 1.0);
}

std::vector<PartialDecomposition> decompose(const Dataset& data, std::string_view response,
                                            const std::vector<std::string>& regressors,
                                            const SolverOptions& options) {
  return decompose(data, fit_ols(data, response, regressors, options), options);
}

std::vector<PartialDecomposition> decompose(const Dataset& data, const RegressionFit& fit,
                                            const SolverOptions& options) {
  const auto& regressors = fit.regressor_names;
  std::vector<PartialDecomposition> out;
  out.reserve(regressors.size());
  for (std::size_t j = 0; j < regressors.size(); ++j) {
    PartialDecomposition rec;
    rec.focus = regressors[j];
    for (std::size_t c = 0; c < regressors.size(); ++c) {
      if (c != j) rec.controls.push_back(regressors[c]);
    }
    auto p = partial_out(data, fit.response_name, rec.focus, rec.controls, options);
    require_residual_variance(p, fit.response_name, options);
    rec.beta_multivariate = fit.beta[static_cast<Eigen::Index>(j)];
    rec.beta_prt_v1 = p.raw_cross / p.dd;
    rec.beta_prt_v2 = p.cross / p.dd;
    rec.semi_partial_r2 = semi_partial_from(p);
    rec.partial_r2 = partial_r2_from(p);
    rec.partial_correlation = partial_correlation_from(p);
    rec.delta = std::move(p.delta);
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace partialreg
