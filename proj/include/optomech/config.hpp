#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "optomech/dynamics.hpp"
#include "optomech/params.hpp"
#include "optomech/qfi.hpp"

namespace optomech {

// Fully resolved scenario: SI inputs from the JSON config plus the derived
// dimensionless quantities every evaluator needs.
struct Scenario {
  SensorConfig system;
  GravitySignal signal;
  CouplingSpec coupling{ConstantCoupling{0.0}};
  FreqModSpec freq_mod = FreqModSpec::zero();
  CavityState cavity_state{Coherent{}};
  double r_T = 0.0;
  std::optional<double> validity_length;  // m
  std::optional<double> homodyne_lambda;  // rad; analytic optimum when absent

  double x0 = 0.0;     // m, derived
  DriveSpec drive;     // dimensionless, derived
  double k0_scale = 0.0;
};

Scenario parse_scenario(const nlohmann::json& j);

struct LoadedScenario {
  Scenario scenario;
  std::string config_hash;  // FNV-1a 64 of the raw config bytes, hex
};

LoadedScenario load_scenario(const std::string& path);

std::uint64_t fnv1a64(const std::string& bytes);
std::string hash_hex(std::uint64_t h);

}  // namespace optomech
