#include "partialreg/ledger.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

#include "partialreg/errors.hpp"

namespace partialreg {

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ", ";
    out += items[i];
  }
  return out;
}

std::string row_narrative(const std::string& response, const PartialDecomposition& d,
                          double tolerance, bool agree) {
  const std::string beta = format_sig6(d.beta_multivariate);
  if (d.controls.empty()) {
    return d.focus + ": coefficient " + beta + " is the simple regression slope of " +
           response + " on " + d.focus + "; there are no other regressors to allow for. R^2 = " +
           format_sig6(d.partial_r2) + ".";
  }
  const std::string controls = join(d.controls);
  std::string text =
      d.focus + ": coefficient " + beta + " applies to " + d.focus + " adjusted for " +
      controls + " (what is left of " + d.focus + " after partialling out " + controls +
      "), not to raw " + d.focus + ". " + controls +
      (d.controls.size() == 1 ? " is" : " are") +
      " allowed for by residualization; reading the coefficient as '" + controls +
      " held constant' is valid only in that residualized sense. Slope of " + response +
      " on adjusted " + d.focus + ": " + format_sig6(d.beta_prt_v1) + "; slope of adjusted " +
      response + " on adjusted " + d.focus + ": " + format_sig6(d.beta_prt_v2) + ". " +
      "Partial R^2 = " + format_sig6(d.partial_r2) + ", semi-partial R^2 = " +
      format_sig6(d.semi_partial_r2) + ", partial correlation = " +
      format_sig6(d.partial_correlation) + ".";
  if (!agree) {
    text += " WARNING: the three slopes differ by more than tolerance " +
            format_sig6(tolerance) + ".";
  }
  return text;
}

template <typename T>
T field(const nlohmann::json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ValidationError(std::string("ledger JSON is missing field '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ValidationError(std::string("ledger JSON field '") + key + "' has the wrong type");
  }
}

}  // namespace

bool LedgerReport::all_agree() const {
  for (const auto& row : rows) {
    if (!row.betas_agree) return false;
  }
  return true;
}

std::string format_sig6(double value) {
  if (value == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 6);
  return std::string(buf, res.ptr);
}

LedgerReport build_ledger(const Dataset& data, const std::string& response,
                          const std::vector<std::string>& regressors, double tolerance,
                          const SolverOptions& options) {
  const auto fit = fit_ols(data, response, regressors, options);
  auto records = decompose(data, fit, options);

  LedgerReport report;
  report.response = response;
  report.tolerance = tolerance;
  report.fit_summary.n = data.rows();
  report.fit_summary.k = regressors.size();
  report.fit_summary.r_squared = fit.r_squared;
  report.fit_summary.condition_estimate = fit.condition_estimate;
  report.fit_summary.response_mean = data.mean_of(response);
  report.fit_summary.implied_intercept = implied_intercept(data, fit);

  const double beta_scale = fit.beta.cwiseAbs().maxCoeff();
  std::size_t agreeing = 0;
  for (auto& rec : records) {
    LedgerRow row;
    row.focus_mean = data.mean_of(rec.focus);
    row.betas_agree =
        agrees_on_scale(rec.beta_prt_v1, rec.beta_multivariate, beta_scale, tolerance) &&
        agrees_on_scale(rec.beta_prt_v2, rec.beta_multivariate, beta_scale, tolerance);
    agreeing += row.betas_agree ? 1 : 0;
    row.narrative = row_narrative(response, rec, tolerance, row.betas_agree);
    row.decomposition = std::move(rec);
    report.rows.push_back(std::move(row));
  }

  const auto& s = report.fit_summary;
  const std::string k = std::to_string(s.k);
  report.narrative.push_back(
      response + " regressed on " + k + (s.k == 1 ? " regressor" : " regressors") + " over n = " +
      std::to_string(s.n) + " observations: R^2 = " + format_sig6(s.r_squared) + ". " +
      (s.k == 1 ? std::string("The coefficient is a simple regression slope.")
                : "Each of the " + k +
                      " coefficients is the slope of " + response +
                      " on its regressor adjusted for the other " +
                      (s.k == 2 ? std::string("one") : std::to_string(s.k - 1)) +
                      "; a different set of other regressors generally changes both the "
                      "adjustment and the coefficient."));
  report.narrative.push_back(
      "Slopes from the multivariate fit, from " + response +
      " on the adjusted regressor, and from adjusted " + response + " on the adjusted regressor agree within " +
      format_sig6(tolerance) + " for " + std::to_string(agreeing) + " of " + k +
      " regressors.");
  std::string intercept = "Implied intercept on the raw scale: " +
                          format_sig6(s.implied_intercept) + " (mean of " + response + " " +
                          format_sig6(s.response_mean);
  for (const auto& row : report.rows) {
    intercept += " minus " + format_sig6(row.decomposition.beta_multivariate) + " x mean of " +
                 row.decomposition.focus + " " + format_sig6(row.focus_mean);
  }
  report.narrative.push_back(intercept + ").");
  return report;
}

nlohmann::ordered_json to_json(const LedgerReport& report) {
  nlohmann::ordered_json j;
  j["schema"] = kLedgerSchema;
  j["response"] = report.response;
  j["tolerance"] = report.tolerance;
  const auto& s = report.fit_summary;
  j["fit_summary"] = {{"n", s.n},
                      {"k", s.k},
                      {"r_squared", s.r_squared},
                      {"condition_estimate", s.condition_estimate},
                      {"response_mean", s.response_mean},
                      {"implied_intercept", s.implied_intercept}};
  j["narrative"] = report.narrative;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    const auto& d = row.decomposition;
    nlohmann::ordered_json r;
    r["focus"] = d.focus;
    r["controls"] = d.controls;
    r["narrative"] = row.narrative;
    r["beta_multivariate"] = d.beta_multivariate;
    r["beta_prt_v1"] = d.beta_prt_v1;
    r["beta_prt_v2"] = d.beta_prt_v2;
    r["semi_partial_r2"] = d.semi_partial_r2;
    r["partial_r2"] = d.partial_r2;
    r["partial_correlation"] = d.partial_correlation;
    r["focus_mean"] = row.focus_mean;
    r["betas_agree"] = row.betas_agree;
    r["delta"] = std::vector<double>(d.delta.begin(), d.delta.end());
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j;
}

LedgerReport ledger_from_json(const nlohmann::json& j) {
  if (field<std::string>(j, "schema") != kLedgerSchema) {
    throw ValidationError("unsupported ledger schema '" + field<std::string>(j, "schema") + "'");
  }
  LedgerReport report;
  report.response = field<std::string>(j, "response");
  report.tolerance = field<double>(j, "tolerance");
  const auto& s = j.at("fit_summary");
  report.fit_summary.n = field<std::size_t>(s, "n");
  report.fit_summary.k = field<std::size_t>(s, "k");
  report.fit_summary.r_squared = field<double>(s, "r_squared");
  report.fit_summary.condition_estimate = field<double>(s, "condition_estimate");
  report.fit_summary.response_mean = field<double>(s, "response_mean");
  report.fit_summary.implied_intercept = field<double>(s, "implied_intercept");
  report.narrative = field<std::vector<std::string>>(j, "narrative");
  if (!j.contains("rows") || !j.at("rows").is_array()) {
    throw ValidationError("ledger JSON is missing array 'rows'");
  }
  for (const auto& r : j.at("rows")) {
    LedgerRow row;
    auto& d = row.decomposition;
    d.focus = field<std::string>(r, "focus");
    d.controls = field<std::vector<std::string>>(r, "controls");
    row.narrative = field<std::string>(r, "narrative");
    d.beta_multivariate = field<double>(r, "beta_multivariate");
    d.beta_prt_v1 = field<double>(r, "beta_prt_v1");
    d.beta_prt_v2 = field<double>(r, "beta_prt_v2");
    d.semi_partial_r2 = field<double>(r, "semi_partial_r2");
    d.partial_r2 = field<double>(r, "partial_r2");
    d.partial_correlation = field<double>(r, "partial_correlation");
    row.focus_mean = field<double>(r, "focus_mean");
    row.betas_agree = field<bool>(r, "betas_agree");
    const auto delta = field<std::vector<double>>(r, "delta");
    d.delta = Eigen::Map<const Eigen::VectorXd>(delta.data(),
                                                static_cast<Eigen::Index>(delta.size()));
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string render_table(const LedgerReport& report) {
  std::ostringstream out;
  const auto& s = report.fit_summary;
  out << "Decomposition ledger for " << report.response << "\n\n";
  out << "Interpretation\n";
  for (const auto& line : report.narrative) out << "  " << line << "\n";
  for (const auto& row : report.rows) out << "  - " << row.narrative << "\n";

  out << "\nEstimation detail\n";
  out << "  n = " << s.n << ", k = " << s.k << ", R^2 = " << format_sig6(s.r_squared)
      << ", condition = " << format_sig6(s.condition_estimate)
      << ", implied intercept = " << format_sig6(s.implied_intercept)
      << ", tolerance = " << format_sig6(report.tolerance) << "\n\n";

  char line[256];
  std::snprintf(line, sizeof line, "%-14s %13s %13s %13s %13s %13s %13s %5s\n", "focus",
                "beta", "prt_v1", "prt_v2", "semi_R2", "partial_R2", "partial_r", "agree");
  out << line;
  for (const auto& row : report.rows) {
    const auto& d = row.decomposition;
    std::snprintf(line, sizeof line, "%-14s %13s %13s %13s %13s %13s %13s %5s\n",
                  d.focus.c_str(), format_sig6(d.beta_multivariate).c_str(),
                  format_sig6(d.beta_prt_v1).c_str(), format_sig6(d.beta_prt_v2).c_str(),
                  format_sig6(d.semi_partial_r2).c_str(), format_sig6(d.partial_r2).c_str(),
                  format_sig6(d.partial_correlation).c_str(), row.betas_agree ? "yes" : "NO");
    out << line;
  }
  return out.str();
}

}  // namespace partialreg
