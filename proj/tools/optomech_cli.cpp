// Command-line front end: single evaluations, tau sweeps, separability
// listings, sensitivity reports and table/figure data regeneration.
//
// Exit codes: 0 ok, 1 reproduction tolerance failure, 2 config error,
// 3 numeric error, 4 I/O error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "optomech/config.hpp"
#include "optomech/csv.hpp"
#include "optomech/errors.hpp"
#include "optomech/evaluate.hpp"
#include "optomech/reproduce.hpp"

namespace {

using nlohmann::json;

struct TauRange {
  double start = 0.0, end = 0.0;
  int points = 0;
};

TauRange parse_tau_range(const std::string& spec) {
  TauRange r;
  const auto c1 = spec.find(':');
  const auto c2 = spec.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos) {
    throw optomech::ConfigError("tau-range", "expected format a:b:n");
  }
  try {
    r.start = std::stod(spec.substr(0, c1));
    r.end = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
    r.points = std::stoi(spec.substr(c2 + 1));
  } catch (const std::exception&) {
    throw optomech::ConfigError("tau-range", "expected format a:b:n with numeric fields");
  }
  return r;
}

void emit(const json& j, const std::optional<std::string>& out_path) {
  const std::string text = j.dump(2) + "\n";
  std::cout << text;
  if (out_path) {
    std::ofstream f(*out_path, std::ios::binary);
    if (!f) throw optomech::IoError("cannot open output file: " + *out_path);
    f << text;
  }
}

int run(int argc, char** argv) {
  CLI::App app{"optomech: sensitivity of a nonlinear optomechanical sensor to "
               "time-dependent gravitational signals"};
  app.require_subcommand(1);

  std::string config_path, quantity_name = "qfi_global", tau_range_spec;
  std::string out_path, target_name;
  double tau = 2.0 * optomech::kPi;
  double safety_factor = 100.0;
  double measurements = 1.0;
  int s_max = 12, q_max = 3, phase_grid = 101;
  std::optional<double> source_distance, source_ratio;

  auto* eval_cmd = app.add_subcommand("eval", "evaluate one quantity at a single tau");
  eval_cmd->add_option("--config", config_path, "scenario JSON")->required();
  eval_cmd->add_option("--quantity", quantity_name, "quantity name");
  eval_cmd->add_option("--tau", tau, "dimensionless time");
  eval_cmd->add_option("--safety-factor", safety_factor, "validity safety factor");
  eval_cmd->add_option("--out", out_path, "also write the JSON record here");

  auto* sweep_cmd = app.add_subcommand("sweep", "tau sweep to CSV");
  sweep_cmd->add_option("--config", config_path, "scenario JSON")->required();
  sweep_cmd->add_option("--quantity", quantity_name, "quantity name");
  sweep_cmd->add_option("--tau-range", tau_range_spec, "a:b:n")->required();
  sweep_cmd->add_option("--out", out_path, "output CSV path")->required();

  auto* sep_cmd = app.add_subcommand(
      "separability", "fractional frequencies, or |K_Na|^2 for a scenario");
  sep_cmd->add_option("--config", config_path, "scenario JSON (optional)");
  sep_cmd->add_option("--tau", tau, "dimensionless time (with --config)");
  sep_cmd->add_option("--s-max", s_max, "largest s to enumerate");
  sep_cmd->add_option("--q-max", q_max, "decoupling multiples to verify");
  sep_cmd->add_option("--out", out_path, "also write the JSON report here");

  auto* sens_cmd = app.add_subcommand("sensitivity", "QCRB sensitivity report");
  sens_cmd->add_option("--config", config_path, "scenario JSON")->required();
  sens_cmd->add_option("--tau", tau, "measurement time");
  sens_cmd->add_option("--measurements", measurements, "number of measurements M");
  sens_cmd->add_option("--safety-factor", safety_factor, "validity safety factor");
  sens_cmd->add_option("--r0", source_distance, "source distance for m_S (m)");
  sens_cmd->add_option("--ratio", source_ratio, "oscillation ratio 2*delta_r0/r0");
  sens_cmd->add_option("--out", out_path, "also write the JSON report here");

  auto* rep_cmd = app.add_subcommand("reproduce", "regenerate table/figure data");
  rep_cmd->add_option("--target", target_name, "table1|table2|fig2a|...")->required();
  rep_cmd->add_option("--out", out_path, "output directory")->required();
  rep_cmd->add_option("--phase-grid", phase_grid, "fig4 grid points per axis");

  CLI11_PARSE(app, argc, argv);

  const auto maybe_out =
      out_path.empty() ? std::nullopt : std::optional<std::string>(out_path);

  if (eval_cmd->parsed()) {
    const auto loaded = optomech::load_scenario(config_path);
    const auto q = optomech::quantity_from_string(quantity_name);
    const auto outcome =
        optomech::evaluate_quantity(loaded.scenario, q, tau, safety_factor);
    emit(optomech::eval_record(loaded.scenario, q, tau, outcome, loaded.config_hash),
         maybe_out);
    return 0;
  }

  if (sweep_cmd->parsed()) {
    const auto loaded = optomech::load_scenario(config_path);
    optomech::SweepRequest req;
    req.quantity = optomech::quantity_from_string(quantity_name);
    const TauRange r = parse_tau_range(tau_range_spec);
    req.tau_start = r.start;
    req.tau_end = r.end;
    req.points = r.points;
    const optomech::CsvTable table = optomech::run_sweep(loaded.scenario, req);
    optomech::write_csv(out_path, table, loaded.config_hash);
    return 0;
  }

  if (sep_cmd->parsed()) {
    json report;
    if (!config_path.empty()) {
      const auto loaded = optomech::load_scenario(config_path);
      report = optomech::separability_eval(loaded.scenario, tau, loaded.config_hash);
    } else {
      report = optomech::separability_listing(s_max, q_max);
    }
    emit(report, maybe_out);
    return 0;
  }

  if (sens_cmd->parsed()) {
    const auto loaded = optomech::load_scenario(config_path);
    optomech::SensitivityOptions opt;
    opt.tau = tau;
    opt.measurements = measurements;
    opt.safety_factor = safety_factor;
    opt.source_distance = source_distance;
    opt.source_ratio = source_ratio;
    emit(optomech::sensitivity_report(loaded.scenario, opt, loaded.config_hash),
         maybe_out);
    return 0;
  }

  // reproduce
  const optomech::ReproduceOutcome outcome =
      optomech::reproduce(target_name, out_path, phase_grid);
  for (const auto& c : outcome.checks) {
    std::printf("[%s] %s: computed=%.6e reference=%.6e\n",
                c.pass ? "PASS" : "FAIL", c.name.c_str(), c.computed, c.reference);
  }
  std::printf("%s: %zu file(s) written to %s\n", outcome.target.c_str(),
              outcome.files.size(), out_path.c_str());
  return outcome.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const optomech::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const optomech::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const optomech::NumericError& e) {
    std::cerr << "numeric error: " << e.what()
              << " (achieved tolerance " << e.achieved_tolerance() << ")\n";
    return 3;
  } catch (const std::domain_error& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
