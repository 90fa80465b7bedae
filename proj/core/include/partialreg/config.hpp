#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include "partialreg/synthetic.hpp"

namespace partialreg {

/// Simulation config. Keys: k, sigma_xx (k x k nested array; a bare number
/// is accepted for k = 1), beta, sigma_eps, sigma_x_eps (optional, zeros by
/// default), n, seed. Unknown keys are rejected so typos do not pass
/// silently. Throws ValidationError naming the offending key.
SimulationSpec simulation_spec_from_json(const nlohmann::json& j);
nlohmann::ordered_json simulation_spec_to_json(const SimulationSpec& spec);
SimulationSpec load_simulation_spec(const std::filesystem::path& path);

}  // namespace partialreg
