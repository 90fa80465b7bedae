#include "partialreg/cli/commands.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "partialreg/config.hpp"
#include "partialreg/csv.hpp"
#include "partialreg/errors.hpp"
#include "partialreg/ledger.hpp"
#include "partialreg/ols.hpp"
#include "partialreg/pearson.hpp"
#include "partialreg/synthetic.hpp"

namespace partialreg::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

struct CommonOptions {
  std::string format = "json";
  std::optional<double> tolerance;

  double resolved_tolerance() const {
    const double tol = tolerance ? *tolerance : default_tolerance();
    if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
    return tol;
  }
};

struct RegressionOptions {
  std::string input;
  std::string response;
  std::vector<std::string> regressors;
};

struct PearsonOptions {
  double beta_y_x1 = 0.5;
  double beta_y_x2 = 0.0;
  double beta_x2_x1 = 0.6;
  double beta_x1_x2 = 0.6;
  std::optional<double> rho;
  std::size_t n = 50;
  std::uint64_t seed = 1;
};

struct SimulateOptions {
  std::string spec;
  std::optional<std::uint64_t> seed;
  std::string output;
};

void add_common(CLI::App* cmd, CommonOptions& common) {
  cmd->add_option("--format", common.format, "Output format")
      ->check(CLI::IsMember({"json", "table"}))
      ->capture_default_str();
  cmd->add_option("--tolerance", common.tolerance,
                  "Agreement tolerance (default: $PARTIALREG_TOLERANCE or 1e-8)");
}

void add_regression(CLI::App* cmd, RegressionOptions& reg) {
  cmd->add_option("--input", reg.input, "CSV file with a header row")->required();
  cmd->add_option("--response", reg.response, "Response column")->required();
  cmd->add_option("--regressors", reg.regressors, "Comma-separated regressor columns")
      ->required()
      ->delimiter(',');
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.begin(), v.end()}; }

// Table output only: values at rounding level relative to `scale` print as 0
// so text reports do not depend on the last bits of the arithmetic.
std::string format_on_scale(double value, double scale) {
  return std::abs(value) <= 1e-12 * scale ? "0" : format_sig6(value);
}

void emit(std::ostream& out, const ordered_json& j) { out << j.dump(2) << '\n'; }

// ---- fit ----------------------------------------------------------------

int cmd_fit(const RegressionOptions& reg, const CommonOptions& common, std::ostream& out) {
  const auto data = ingest_csv(reg.input).center();
  const auto fit = fit_ols(data, reg.response, reg.regressors);
  const double intercept = implied_intercept(data, fit);

  if (common.format == "table") {
    out << "Least-squares fit of " << fit.response_name << " (n = " << data.rows()
        << ", k = " << fit.regressor_names.size() << ")\n";
    out << "  R^2 = " << format_sig6(fit.r_squared)
        << ", condition = " << format_sig6(fit.condition_estimate)
        << ", implied intercept = " << format_sig6(intercept) << "\n\n";
    char line[128];
    std::snprintf(line, sizeof line, "%-14s %13s %13s\n", "regressor", "beta", "mean");
    out << line;
    for (std::size_t j = 0; j < fit.regressor_names.size(); ++j) {
      std::snprintf(line, sizeof line, "%-14s %13s %13s\n", fit.regressor_names[j].c_str(),
                    format_sig6(fit.beta[static_cast<Eigen::Index>(j)]).c_str(),
                    format_sig6(data.mean_of(fit.regressor_names[j])).c_str());
      out << line;
    }
    return kSuccess;
  }

  ordered_json j;
  j["schema"] = "partialreg.fit/1";
  j["response"] = fit.response_name;
  j["n"] = data.rows();
  j["k"] = fit.regressor_names.size();
  j["r_squared"] = fit.r_squared;
  j["rank"] = fit.rank;
  j["condition_estimate"] = fit.condition_estimate;
  j["implied_intercept"] = intercept;
  auto coefs = ordered_json::array();
  for (std::size_t c = 0; c < fit.regressor_names.size(); ++c) {
    coefs.push_back({{"name", fit.regressor_names[c]},
                     {"beta", fit.beta[static_cast<Eigen::Index>(c)]},
                     {"mean", data.mean_of(fit.regressor_names[c])}});
  }
  j["coefficients"] = std::move(coefs);
  emit(out, j);
  return kSuccess;
}

// ---- decompose ----------------------------------------------------------

int cmd_decompose(const RegressionOptions& reg, const CommonOptions& common, std::ostream& out,
                  std::ostream& err) {
  const auto data = ingest_csv(reg.input).center();
  const auto report = build_ledger(data, reg.response, reg.regressors,
                                   common.resolved_tolerance());
  if (common.format == "table") {
    out << render_table(report);
  } else {
    emit(out, to_json(report));
  }
  if (!report.all_agree()) {
    err << "error: partial-regression slopes disagree with the multivariate fit beyond "
        << format_sig6(report.tolerance) << "\n";
    return kDegenerate;
  }
  return kSuccess;
}

// ---- pearson-demo -------------------------------------------------------

int cmd_pearson_demo(const PearsonOptions& opt, const CommonOptions& common, std::ostream& out) {
  const double tol = common.resolved_tolerance();
  const auto s = opt.rho ? PearsonScenario::with_correlation(opt.beta_y_x1, opt.beta_y_x2, *opt.rho)
                         : PearsonScenario::make(opt.beta_y_x1, opt.beta_y_x2, opt.beta_x2_x1,
                                                 opt.beta_x1_x2);
  const double b1 = multivariate_beta1(s);
  const double b2 = multivariate_beta2(s);

  const auto sample = exact_moment_sample(scenario_covariance(s), opt.n, opt.seed,
                                          {"x1", "x2", "y"});
  const auto fit = fit_ols(sample, "y", {"x1", "x2"});
  const double scale = std::max(std::abs(b1), std::abs(b2));
  const bool sample_agrees = agrees_on_scale(fit.beta[0], b1, scale, tol) &&
                             agrees_on_scale(fit.beta[1], b2, scale, tol);

  std::vector<std::string> narrative;
  if (s.non_assortative()) {
    narrative.push_back("Non-assortative case: rho^2 = 0, so each two-regressor coefficient "
                        "equals its simple slope: beta1 = " + format_sig6(b1) +
                        " = beta_y_x1, beta2 = " + format_sig6(b2) + " = beta_y_x2.");
  } else {
    narrative.push_back("With rho^2 = " + format_sig6(s.rho_sq) +
                        " the coefficient of x1 is (" + format_sig6(s.beta_y_x1) + " - " +
                        format_sig6(s.beta_y_x2) + " x " + format_sig6(s.beta_x2_x1) +
                        ") / (1 - " + format_sig6(s.rho_sq) + ") = " + format_sig6(b1) +
                        " and the coefficient of x2 is " + format_sig6(b2) + ".");
  }

  std::optional<std::pair<double, double>> attenuation;
  std::optional<AmplificationReport> amp;
  std::optional<DeltaIdentityReport> identity;
  if (s.beta_y_x2 == 0.0) {
    attenuation = attenuation_scenario(s.beta_y_x1, s.beta_x1_x2, s.beta_x2_x1);
    amp = amplification_and_variance(s);
    identity = check_delta_identity(s, sample, tol);
    if (!s.non_assortative()) {
      narrative.push_back(
          "x2 is uncorrelated with y (beta_y_x2 = 0) yet its coefficient is " +
          format_sig6(attenuation->second) + ": the fit is " + format_sig6(b1) + " x (x1 - " +
          format_sig6(s.beta_x1_x2) + " x x2), so the coefficient " + format_sig6(b1) +
          " applies to x1 adjusted for x2, not to raw x1.");
      narrative.push_back(
          "Partialling x2 out of x1 removes variance unrelated to y: Var(adjusted x1) = " +
          format_sig6(amp->var_delta) + " x Var(x1) while cov(y, adjusted x1) = " +
          format_sig6(amp->cov_y_delta) + " = cov(y, x1). The coefficient grows from " +
          format_sig6(amp->simple_beta) + " to " + format_sig6(amp->amplified_beta) +
          " (factor " + format_sig6(amp->amplification_factor) +
          ") and explained variance grows by the same factor, " +
          format_sig6(amp->variance_ratio) + ".");
    }
  }
  narrative.push_back("Exact-moment sample (n = " + std::to_string(opt.n) + ", seed " +
                      std::to_string(opt.seed) + "): least squares gives " +
                      format_on_scale(fit.beta[0], scale) + " and " +
                      format_on_scale(fit.beta[1], scale) + ", " +
                      (sample_agrees ? "matching" : "NOT matching") +
                      " the closed form within " + format_sig6(tol) + ".");

  bool ok = sample_agrees && (!identity || identity->holds);

  if (common.format == "table") {
    out << "Two-regressor scenario\n";
    out << "  beta_y_x1 = " << format_sig6(s.beta_y_x1) << ", beta_y_x2 = "
        << format_sig6(s.beta_y_x2) << ", beta_x2_x1 = " << format_sig6(s.beta_x2_x1)
        << ", beta_x1_x2 = " << format_sig6(s.beta_x1_x2) << ", rho^2 = "
        << format_sig6(s.rho_sq) << "\n\nInterpretation\n";
    for (const auto& line : narrative) out << "  " << line << "\n";
    out << "\nEstimation detail\n";
    out << "  closed form:   beta1 = " << format_sig6(b1) << ", beta2 = " << format_sig6(b2)
        << "\n";
    out << "  sample fit:    beta1 = " << format_on_scale(fit.beta[0], scale)
        << ", beta2 = " << format_on_scale(fit.beta[1], scale) << "\n";
    if (identity) out << "  delta identity: " << identity->message << "\n";
    return ok ? kSuccess : kDegenerate;
  }

  ordered_json j;
  j["schema"] = "partialreg.pearson/1";
  j["scenario"] = {{"beta_y_x1", s.beta_y_x1},
                   {"beta_y_x2", s.beta_y_x2},
                   {"beta_x2_x1", s.beta_x2_x1},
                   {"beta_x1_x2", s.beta_x1_x2},
                   {"rho_sq", s.rho_sq}};
  j["non_assortative"] = s.non_assortative();
  j["narrative"] = narrative;
  j["closed_form"] = {{"beta1", b1}, {"beta2", b2}};
  if (attenuation) {
    j["attenuation"] = {{"x1_coefficient", attenuation->first},
                        {"x2_coefficient", attenuation->second}};
  }
  if (amp) {
    j["amplification"] = {{"simple_beta", amp->simple_beta},
                          {"amplified_beta", amp->amplified_beta},
                          {"amplification_factor", amp->amplification_factor},
                          {"var_delta", amp->var_delta},
                          {"explained_variance_simple", amp->explained_variance_simple},
                          {"explained_variance_full", amp->explained_variance_full},
                          {"variance_ratio", amp->variance_ratio},
                          {"cov_y_x1", amp->cov_y_x1},
                          {"cov_y_delta", amp->cov_y_delta}};
  }
  ordered_json check = {{"n", opt.n},
                        {"seed", opt.seed},
                        {"tolerance", tol},
                        {"fitted_beta1", fit.beta[0]},
                        {"fitted_beta2", fit.beta[1]},
                        {"agrees", sample_agrees}};
  if (identity) {
    check["delta_identity"] = {{"relative_discrepancy", identity->relative_discrepancy},
                               {"sample_corr_y_x2", identity->sample_corr_y_x2},
                               {"construction_ok", identity->construction_ok},
                               {"holds", identity->holds},
                               {"message", identity->message}};
  }
  j["sample_check"] = std::move(check);
  emit(out, j);
  return ok ? kSuccess : kDegenerate;
}

// ---- simulate -----------------------------------------------------------

int cmd_simulate(const SimulateOptions& opt, const CommonOptions& common, std::ostream& out) {
  auto spec = load_simulation_spec(opt.spec);
  if (opt.seed) spec.seed = *opt.seed;
  const auto sample = generate(spec);
  const auto names = simulated_regressor_names(spec.k);
  const auto fit = fit_ols(sample.data, "y", names);
  const auto report = bias_report(spec, fit);

  if (!opt.output.empty()) {
    std::ofstream file(opt.output, std::ios::binary);
    if (!file) throw ValidationError("cannot write '" + opt.output + "'");
    write_csv(sample.raw, file);
    if (!file) throw ValidationError("failed writing '" + opt.output + "'");
  }

  std::vector<std::string> narrative;
  for (int c = 0; c < spec.k; ++c) {
    const auto i = static_cast<Eigen::Index>(c);
    narrative.push_back(
        names[static_cast<std::size_t>(c)] + ": best-fit coefficient " +
        format_sig6(report.gamma_hat[i]) + " estimates the best linear predictor " +
        format_sig6(report.gamma_population[i]) + " (standard error " +
        format_sig6(report.standard_errors[i]) + "); the structural parameter is " +
        format_sig6(report.beta_structural[i]) + ", a gap of " +
        format_sig6(report.endogeneity_bias[i]) + " due to cov(x, eps).");
  }
  narrative.push_back(
      std::string(report.exogenous ? "Errors are uncorrelated with the regressors, so the best "
                                     "fit also estimates the structural parameters. "
                                   : "Errors correlate with the regressors: the fit remains the "
                                     "best linear predictor but does not estimate the "
                                     "structural parameters. ") +
      "Sample R^2 = " + format_sig6(report.r_squared) + ", population R^2 of the best fit = " +
      format_sig6(report.population_r_squared) + ".");

  if (common.format == "table") {
    out << "Simulation (n = " << spec.n << ", k = " << spec.k << ", seed " << spec.seed
        << ")\n\nInterpretation\n";
    for (const auto& line : narrative) out << "  " << line << "\n";
    out << "\nEstimation detail\n";
    char line[160];
    std::snprintf(line, sizeof line, "%-10s %13s %13s %13s %13s\n", "regressor", "gamma_hat",
                  "gamma", "beta", "std_err");
    out << line;
    for (int c = 0; c < spec.k; ++c) {
      const auto i = static_cast<Eigen::Index>(c);
      std::snprintf(line, sizeof line, "%-10s %13s %13s %13s %13s\n",
                    names[static_cast<std::size_t>(c)].c_str(),
                    format_sig6(report.gamma_hat[i]).c_str(),
                    format_sig6(report.gamma_population[i]).c_str(),
                    format_sig6(report.beta_structural[i]).c_str(),
                    format_sig6(report.standard_errors[i]).c_str());
      out << line;
    }
    return kSuccess;
  }

  ordered_json j;
  j["schema"] = "partialreg.simulation/1";
  j["spec"] = simulation_spec_to_json(spec);
  j["exogenous"] = report.exogenous;
  j["narrative"] = narrative;
  j["regressors"] = names;
  j["gamma_hat"] = to_std(report.gamma_hat);
  j["gamma_population"] = to_std(report.gamma_population);
  j["beta_structural"] = to_std(report.beta_structural);
  j["endogeneity_bias"] = to_std(report.endogeneity_bias);
  j["gap_to_population"] = to_std(report.gap_to_population);
  j["standard_errors"] = to_std(report.standard_errors);
  j["r_squared"] = report.r_squared;
  j["population_r_squared"] = report.population_r_squared;
  if (!opt.output.empty()) j["output"] = opt.output;
  emit(out, j);
  return kSuccess;
}

}  // namespace

double default_tolerance() {
  const char* env = std::getenv("PARTIALREG_TOLERANCE");
  if (env == nullptr || *env == '\0') return kDefaultTolerance;
  const std::string_view text(env);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || !(value > 0.0) ||
      !std::isfinite(value)) {
    throw ValidationError("PARTIALREG_TOLERANCE must be a positive number, got '" +
                          std::string(text) + "'");
  }
  return value;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Least squares read through partial regressions", "partialreg"};
  app.require_subcommand(1);

  CommonOptions common;
  RegressionOptions reg;
  PearsonOptions pearson;
  SimulateOptions sim;

  auto* fit = app.add_subcommand("fit", "Least-squares fit on centered data");
  add_regression(fit, reg);
  add_common(fit, common);

  auto* dec = app.add_subcommand(
      "decompose", "Restate each coefficient as a regression on its residualized regressor");
  add_regression(dec, reg);
  add_common(dec, common);

  auto* demo = app.add_subcommand("pearson-demo", "Two-regressor closed forms");
  auto* b21 = demo->add_option("--beta-x2-x1", pearson.beta_x2_x1, "Slope of x2 on x1")
                  ->capture_default_str();
  auto* b12 = demo->add_option("--beta-x1-x2", pearson.beta_x1_x2, "Slope of x1 on x2")
                  ->capture_default_str();
  demo->add_option("--beta-y-x1", pearson.beta_y_x1, "Slope of y on x1")->capture_default_str();
  demo->add_option("--beta-y-x2", pearson.beta_y_x2, "Slope of y on x2")->capture_default_str();
  demo->add_option("--rho", pearson.rho, "Correlation of x1 and x2 (unit variances)")
      ->excludes(b21)
      ->excludes(b12);
  demo->add_option("--n", pearson.n, "Rows in the exact-moment cross-check sample")
      ->check(CLI::Range(std::size_t{4}, std::size_t{10'000'000}))
      ->capture_default_str();
  demo->add_option("--seed", pearson.seed, "Seed of the cross-check sample")
      ->capture_default_str();
  add_common(demo, common);

  auto* simulate = app.add_subcommand("simulate", "Draw a sample and report best fit vs structure");
  simulate->add_option("--spec", sim.spec, "JSON simulation config")->required();
  simulate->add_option("--seed", sim.seed, "Override the config seed");
  simulate->add_option("--output", sim.output, "Write the drawn sample as CSV");
  add_common(simulate, common);

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.emplace_back("partialreg");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n"
        << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return kUsage;
  }

  try {
    common.resolved_tolerance();
    if (fit->parsed()) return cmd_fit(reg, common, out);
    if (dec->parsed()) return cmd_decompose(reg, common, out, err);
    if (demo->parsed()) return cmd_pearson_demo(pearson, common, out);
    if (simulate->parsed()) return cmd_simulate(sim, common, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kValidationError;
  } catch (const DegeneracyError& e) {
    err << "error: " << e.what() << "\n";
    return kDegenerate;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
  err << app.help();
  return kUsage;
}

}  // namespace partialreg::cli
