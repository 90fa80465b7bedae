#include "partialreg/synthetic.hpp"

#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include "partialreg/errors.hpp"
#include "partialreg/rng.hpp"

namespace partialreg {

namespace {

bool all_finite(const Eigen::MatrixXd& m) { return m.allFinite(); }

void require_symmetric(const Eigen::MatrixXd& m, const char* what) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw ValidationError(std::string(what) + " is not symmetric");
  }
}

}  // namespace

void SimulationSpec::validate() const {
  if (k < 1) throw ValidationError("k must be at least 1");
  const auto kk = static_cast<Eigen::Index>(k);
  if (sigma_xx.rows() != kk || sigma_xx.cols() != kk) {
    throw ValidationError("sigma_xx must be " + std::to_string(k) + " x " + std::to_string(k));
  }
  if (beta_structural.size() != kk) {
    throw ValidationError("beta must have " + std::to_string(k) + " entries");
  }
  if (sigma_x_eps.size() != kk) {
    throw ValidationError("sigma_x_eps must have " + std::to_string(k) + " entries");
  }
  if (!all_finite(sigma_xx) || !beta_structural.allFinite() || !sigma_x_eps.allFinite() ||
      !std::isfinite(sigma_eps)) {
    throw ValidationError("simulation spec contains non-finite values");
  }
  if (!(sigma_eps > 0.0)) throw ValidationError("sigma_eps must be positive");
  if (n < static_cast<std::size_t>(k) + 2) {
    throw ValidationError("n must be at least k + 2 = " + std::to_string(k + 2));
  }
  require_symmetric(sigma_xx, "sigma_xx");
  if (Eigen::LLT<Eigen::MatrixXd>(sigma_xx).info() != Eigen::Success) {
    throw DegeneracyError("sigma_xx is not positive definite");
  }
  lower_cholesky(extended_covariance());
}

Eigen::MatrixXd SimulationSpec::extended_covariance() const {
  const auto kk = static_cast<Eigen::Index>(k);
  Eigen::MatrixXd ext(kk + 1, kk + 1);
  ext.topLeftCorner(kk, kk) = sigma_xx;
  ext.topRightCorner(kk, 1) = sigma_x_eps;
  ext.bottomLeftCorner(1, kk) = sigma_x_eps.transpose();
  ext(kk, kk) = sigma_eps * sigma_eps;
  return ext;
}

std::vector<std::string> simulated_regressor_names(int k) {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(k));
  for (int j = 1; j <= k; ++j) names.push_back("x" + std::to_string(j));
  return names;
}

Eigen::MatrixXd lower_cholesky(const Eigen::MatrixXd& cov) {
  const Eigen::Index d = cov.rows();
  if (cov.cols() != d) throw ValidationError("covariance must be square");
  const double scale = std::max(1e-300, cov.diagonal().cwiseAbs().maxCoeff());
  const double tiny = 1e-13 * scale;
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const double pivot = cov(j, j) - l.row(j).head(j).squaredNorm();
    if (pivot < -tiny) {
      throw DegeneracyError("covariance is not positive semidefinite (pivot " +
                            std::to_string(pivot) + " at index " + std::to_string(j) + ")");
    }
    if (pivot <= tiny) {
      // Zero column: the remaining entries of column j must vanish too.
      for (Eigen::Index i = j + 1; i < d; ++i) {
        const double rest = cov(i, j) - l.row(i).head(j).dot(l.row(j).head(j));
        if (std::abs(rest) > std::sqrt(tiny * scale)) {
          throw DegeneracyError("covariance is not positive semidefinite at index " +
                                std::to_string(j));
        }
      }
      continue;
    }
    const double root = std::sqrt(pivot);
    l(j, j) = root;
    for (Eigen::Index i = j + 1; i < d; ++i) {
      l(i, j) = (cov(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / root;
    }
  }
  return l;
}

GeneratedSample generate(const SimulationSpec& spec) {
  spec.validate();
  const auto k = static_cast<Eigen::Index>(spec.k);
  const auto n = static_cast<Eigen::Index>(spec.n);
  const Eigen::MatrixXd l = lower_cholesky(spec.extended_covariance());

  NormalStream normals(spec.seed);
  Eigen::MatrixXd values(n, k + 1);
  Eigen::VectorXd eps(n);
  Eigen::VectorXd z(k + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= k; ++j) z[j] = normals.next();
    const Eigen::VectorXd w = l.triangularView<Eigen::Lower>() * z;
    values.row(i).head(k) = w.head(k).transpose();
    eps[i] = w[k];
    values(i, k) = w.head(k).dot(spec.beta_structural) + eps[i];
  }

  auto names = simulated_regressor_names(spec.k);
  names.push_back("y");
  Dataset raw = Dataset::from_matrix(std::move(names), std::move(values));
  Dataset data = raw.center();
  return GeneratedSample{std::move(raw), std::move(data),
                         SimulationTruth{spec.beta_structural, std::move(eps)}};
}

Eigen::VectorXd population_gamma(const SimulationSpec& spec) {
  spec.validate();
  return spec.beta_structural + Eigen::LLT<Eigen::MatrixXd>(spec.sigma_xx).solve(spec.sigma_x_eps);
}

BiasReport bias_report(const SimulationSpec& spec, const RegressionFit& fit) {
  spec.validate();
  if (fit.beta.size() != static_cast<Eigen::Index>(spec.k)) {
    throw ValidationError("fit has " + std::to_string(fit.beta.size()) +
                          " coefficients but the simulation has k = " + std::to_string(spec.k));
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(spec.sigma_xx);
  const Eigen::MatrixXd sigma_inv =
      llt.solve(Eigen::MatrixXd::Identity(spec.sigma_xx.rows(), spec.sigma_xx.cols()));
  const Eigen::VectorXd& beta = spec.beta_structural;

  BiasReport r;
  r.gamma_hat = fit.beta;
  r.beta_structural = beta;
  r.gamma_population = population_gamma(spec);
  r.gap_to_population = r.gamma_hat - r.gamma_population;
  r.gap_to_structural = r.gamma_hat - beta;
  r.endogeneity_bias = r.gamma_population - beta;
  r.exogenous = spec.sigma_x_eps.isZero(0.0);

  const double var_y = beta.dot(spec.sigma_xx * beta) + 2.0 * beta.dot(spec.sigma_x_eps) +
                       spec.sigma_eps * spec.sigma_eps;
  const double explained = r.gamma_population.dot(spec.sigma_xx * r.gamma_population);
  const double var_u = std::max(0.0, var_y - explained);
  r.standard_errors =
      (var_u * sigma_inv.diagonal() / static_cast<double>(spec.n)).cwiseSqrt();
  r.population_r_squared = var_y > 0.0 ? explained / var_y : 0.0;
  r.r_squared = fit.r_squared;
  return r;
}

Dataset exact_moment_sample(const Eigen::MatrixXd& target_cov, std::size_t n,
                            std::uint64_t seed, std::vector<std::string> names) {
  const Eigen::Index d = target_cov.rows();
  if (d < 1 || target_cov.cols() != d) throw ValidationError("target covariance must be square");
  if (n <= static_cast<std::size_t>(d)) {
    throw ValidationError("exact-moment sample needs n > " + std::to_string(d) + ", got " +
                          std::to_string(n));
  }
  require_symmetric(target_cov, "target covariance");
  const Eigen::LLT<Eigen::MatrixXd> llt(target_cov);
  if (llt.info() != Eigen::Success) {
    throw DegeneracyError("target covariance is not positive definite");
  }
  if (names.empty()) names = simulated_regressor_names(static_cast<int>(d));
  if (static_cast<Eigen::Index>(names.size()) != d) {
    throw ValidationError("expected " + std::to_string(d) + " column names");
  }

  const auto rows = static_cast<Eigen::Index>(n);
  NormalStream normals(seed);
  Eigen::MatrixXd draw(rows, d);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) draw(i, j) = normals.next();
  }
  draw.rowwise() -= draw.colwise().mean();

  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(draw);
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(rows, d);
  Eigen::MatrixXd values = std::sqrt(static_cast<double>(n)) * q * llt.matrixU();
  return Dataset::from_matrix(std::move(names), std::move(values)).center();
}

Eigen::MatrixXd sample_covariance(const Dataset& data, const std::vector<std::string>& names) {
  const Eigen::MatrixXd x = data.select(names);
  return x.transpose() * x / static_cast<double>(data.rows());
}

}  // namespace partialreg
