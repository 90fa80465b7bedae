#include "partialreg/config.hpp"

#include <fstream>
#include <set>

#include "partialreg/errors.hpp"

namespace partialreg {

namespace {

double number(const nlohmann::json& j, const std::string& key) {
  if (!j.is_number()) throw ValidationError("config key '" + key + "' must be a number");
  return j.get<double>();
}

Eigen::VectorXd vector_of(const nlohmann::json& j, const std::string& key) {
  if (!j.is_array()) throw ValidationError("config key '" + key + "' must be an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = number(j[i], key);
  return v;
}

const nlohmann::json& required(const nlohmann::json& j, const std::string& key) {
  if (!j.contains(key)) throw ValidationError("config is missing key '" + key + "'");
  return j.at(key);
}

}  // namespace

SimulationSpec simulation_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("simulation config must be a JSON object");
  static const std::set<std::string> known{"k", "sigma_xx", "beta", "sigma_eps",
                                           "sigma_x_eps", "n", "seed"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw ValidationError("unknown config key '" + key + "'");
  }

  SimulationSpec spec;
  const auto& k = required(j, "k");
  if (!k.is_number_integer() || k.get<long long>() < 1) {
    throw ValidationError("config key 'k' must be a positive integer");
  }
  spec.k = k.get<int>();
  const auto kk = static_cast<Eigen::Index>(spec.k);

  const auto& sxx = required(j, "sigma_xx");
  if (sxx.is_number() && spec.k == 1) {
    spec.sigma_xx = Eigen::MatrixXd::Constant(1, 1, number(sxx, "sigma_xx"));
  } else {
    if (!sxx.is_array() || static_cast<Eigen::Index>(sxx.size()) != kk) {
      throw ValidationError("config key 'sigma_xx' must be a " + std::to_string(spec.k) + " x " +
                            std::to_string(spec.k) + " array");
    }
    spec.sigma_xx.resize(kk, kk);
    for (Eigen::Index r = 0; r < kk; ++r) {
      const auto row = vector_of(sxx[static_cast<std::size_t>(r)], "sigma_xx");
      if (row.size() != kk) {
        throw ValidationError("config key 'sigma_xx' row " + std::to_string(r + 1) + " has " +
                              std::to_string(row.size()) + " entries");
      }
      spec.sigma_xx.row(r) = row.transpose();
    }
  }

  spec.beta_structural = vector_of(required(j, "beta"), "beta");
  spec.sigma_eps = number(required(j, "sigma_eps"), "sigma_eps");
  spec.sigma_x_eps = j.contains("sigma_x_eps") ? vector_of(j.at("sigma_x_eps"), "sigma_x_eps")
                                               : Eigen::VectorXd::Zero(kk);

  const auto& n = required(j, "n");
  if (!n.is_number_integer() || n.get<long long>() < 1) {
    throw ValidationError("config key 'n' must be a positive integer");
  }
  spec.n = n.get<std::size_t>();

  if (j.contains("seed")) {
    const auto& seed = j.at("seed");
    if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0)) {
      throw ValidationError("config key 'seed' must be a non-negative integer");
    }
    spec.seed = seed.get<std::uint64_t>();
  }
  spec.validate();
  return spec;
}

nlohmann::ordered_json simulation_spec_to_json(const SimulationSpec& spec) {
  nlohmann::ordered_json j;
  j["k"] = spec.k;
  auto rows = nlohmann::ordered_json::array();
  for (Eigen::Index r = 0; r < spec.sigma_xx.rows(); ++r) {
    auto row = nlohmann::ordered_json::array();
    for (Eigen::Index c = 0; c < spec.sigma_xx.cols(); ++c) row.push_back(spec.sigma_xx(r, c));
    rows.push_back(std::move(row));
  }
  j["sigma_xx"] = std::move(rows);
  j["beta"] = std::vector<double>(spec.beta_structural.begin(), spec.beta_structural.end());
  j["sigma_eps"] = spec.sigma_eps;
  j["sigma_x_eps"] = std::vector<double>(spec.sigma_x_eps.begin(), spec.sigma_x_eps.end());
  j["n"] = spec.n;
  j["seed"] = spec.seed;
  return j;
}

SimulationSpec load_simulation_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
  return simulation_spec_from_json(j);
}

}  // namespace partialreg
