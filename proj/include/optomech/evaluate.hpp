#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "optomech/config.hpp"
#include "optomech/csv.hpp"
#include "optomech/sensitivity.hpp"

namespace optomech {

enum class Quantity {
  QfiGlobal,
  QfiLocal,
  CfiHomodyne,
  CfiHeterodyne,
  KNaSquared,
  MeanX,
  StdX,
  PhononNumber,
};

Quantity quantity_from_string(const std::string& name);
std::string to_string(Quantity q);

struct ValidityVerdict {
  bool evaluated = false;
  std::string scheme = "unknown";
  double max_mean_n = 0.0;
  double max_std_n = 0.0;
  double safety_factor = 100.0;
  bool mean_ok = true;
  bool std_ok = true;

  bool ok() const { return !evaluated || (mean_ok && std_ok); }
};

struct EvalOutcome {
  double value = 0.0;
  std::vector<std::string> warnings;
  ValidityVerdict validity;
};

SchemeSpec classify_scheme(const Scenario& sc);
ValidityVerdict photon_validity(const Scenario& sc, double tau, double safety_factor);

EvalOutcome evaluate_quantity(const Scenario& sc, Quantity q, double tau,
                              double safety_factor = 100.0);

nlohmann::json eval_record(const Scenario& sc, Quantity q, double tau,
                           const EvalOutcome& outcome, const std::string& config_hash);

struct SweepRequest {
  Quantity quantity = Quantity::QfiGlobal;
  double tau_start = 0.0;
  double tau_end = 1.0;
  int points = 2;

  void validate() const;
};

// Deterministic tau sweep; one dense dynamics solve shared by all points.
CsvTable run_sweep(const Scenario& sc, const SweepRequest& req);

struct SensitivityOptions {
  double tau = kTwoPi;
  double measurements = 1.0;
  double safety_factor = 100.0;
  std::optional<double> source_distance;     // r0, m
  std::optional<double> source_ratio;        // 2 delta_r0 / r0
};

nlohmann::json sensitivity_report(const Scenario& sc, const SensitivityOptions& opt,
                                  const std::string& config_hash);

nlohmann::json separability_listing(int s_max, int q_max);
nlohmann::json separability_eval(const Scenario& sc, double tau,
                                 const std::string& config_hash);

}  // namespace optomech
