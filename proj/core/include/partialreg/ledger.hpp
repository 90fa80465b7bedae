#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "partialreg/dataset.hpp"
#include "partialreg/numeric.hpp"
#include "partialreg/ols.hpp"
#include "partialreg/partial.hpp"

namespace partialreg {

struct LedgerRow {
  PartialDecomposition decomposition;
  /// Raw-scale mean of the focus, recorded at centering.
  double focus_mean = 0.0;
  /// beta_prt_v1 and beta_prt_v2 both agree with beta_multivariate, relative
  /// to the larger of the two values and the largest coefficient of the fit.
  bool betas_agree = false;
  std::string narrative;
};

struct FitSummary {
  std::size_t n = 0;
  std::size_t k = 0;
  double r_squared = 0.0;
  double condition_estimate = 0.0;
  double response_mean = 0.0;
  double implied_intercept = 0.0;
};

/// Every coefficient of one regression, each restated as a univariate
/// regression on its residualized regressor.
///
/// JSON shape (schema "partialreg.ledger/1", keys in this order):
///   schema, response, tolerance,
///   fit_summary {n, k, r_squared, condition_estimate, response_mean, implied_intercept},
///   narrative [string...],
///   rows [{focus, controls, narrative, beta_multivariate, beta_prt_v1, beta_prt_v2,
///          semi_partial_r2, partial_r2, partial_correlation, focus_mean,
///          betas_agree, delta}]
/// Numbers are written at full precision and read back bit-identically.
struct LedgerReport {
  std::string response;
  double tolerance = kDefaultTolerance;
  FitSummary fit_summary;
  std::vector<std::string> narrative;
  std::vector<LedgerRow> rows;

  bool all_agree() const;
};

inline constexpr const char* kLedgerSchema = "partialreg.ledger/1";

/// `data` must be centered; its stored means give the implied intercept.
LedgerReport build_ledger(const Dataset& data, const std::string& response,
                          const std::vector<std::string>& regressors,
                          double tolerance = kDefaultTolerance,
                          const SolverOptions& options = {});

nlohmann::ordered_json to_json(const LedgerReport& report);
/// Throws ValidationError when a documented field is missing or mistyped.
LedgerReport ledger_from_json(const nlohmann::json& j);

/// Fixed-layout text: interpretation first, then the estimation table with
/// every number at 6 significant digits.
std::string render_table(const LedgerReport& report);

/// 6 significant digits, locale-independent, never "-0".
std::string format_sig6(double value);

}  // namespace partialreg
