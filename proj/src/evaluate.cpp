#include "optomech/evaluate.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "optomech/cfi.hpp"
#include "optomech/parallel.hpp"
#include "optomech/separability.hpp"

namespace optomech {

using nlohmann::json;

Quantity quantity_from_string(const std::string& name) {
  static const std::map<std::string, Quantity> table = {
      {"qfi_global", Quantity::QfiGlobal},
      {"qfi_local", Quantity::QfiLocal},
      {"cfi_homodyne", Quantity::CfiHomodyne},
      {"cfi_heterodyne", Quantity::CfiHeterodyne},
      {"k_na_squared", Quantity::KNaSquared},
      {"mean_x", Quantity::MeanX},
      {"std_x", Quantity::StdX},
      {"phonon_number", Quantity::PhononNumber},
  };
  const auto it = table.find(name);
  if (it == table.end()) throw ConfigError("quantity", "unknown quantity '" + name + "'");
  return it->second;
}

std::string to_string(Quantity q) {
  switch (q) {
    case Quantity::QfiGlobal: return "qfi_global";
    case Quantity::QfiLocal: return "qfi_local";
    case Quantity::CfiHomodyne: return "cfi_homodyne";
    case Quantity::CfiHeterodyne: return "cfi_heterodyne";
    case Quantity::KNaSquared: return "k_na_squared";
    case Quantity::MeanX: return "mean_x";
    case Quantity::StdX: return "std_x";
    case Quantity::PhononNumber: return "phonon_number";
  }
  return "unknown";
}

SchemeSpec classify_scheme(const Scenario& sc) {
  SchemeSpec spec;
  if (!sc.freq_mod.is_zero()) {
    spec.kind = Scheme::Parametric;
    spec.d2 = sc.freq_mod.d2;
    return spec;
  }
  if (const auto* mod = std::get_if<ModulatedCoupling>(&sc.coupling)) {
    if (std::abs(mod->omega_k - 1.0) < 1e-9) {
      spec.kind = Scheme::ResonantCoupling;
      return spec;
    }
    spec.kind = Scheme::Fractional;
    // recover the smallest s with omega_k = 1 + 2 n1 / s, if one exists
    for (int s = 1; s <= 64; ++s) {
      const double n1 = (mod->omega_k - 1.0) * s / 2.0;
      if (std::abs(n1 - std::round(n1)) < 1e-9 && std::round(n1) != 0.0) {
        spec.s = s;
        break;
      }
    }
    return spec;
  }
  spec.kind = Scheme::Constant;
  return spec;
}

ValidityVerdict photon_validity(const Scenario& sc, double tau, double safety_factor) {
  ValidityVerdict v;
  v.safety_factor = safety_factor;
  if (!sc.validity_length || sc.k0_scale <= 0.0 || tau <= 0.0) {
    return v;  // not evaluated
  }
  const SchemeSpec scheme = classify_scheme(sc);
  v.scheme = scheme_label(scheme);
  const PhotonCeilings c =
      photon_bounds(scheme, *sc.validity_length, sc.x0, sc.k0_scale, tau);
  const PhotonStats ps = photon_stats(sc.cavity_state);
  v.evaluated = true;
  v.max_mean_n = c.max_mean_n;
  v.max_std_n = c.max_std_n;
  v.mean_ok = ps.mean_n * safety_factor <= c.max_mean_n;
  v.std_ok = ps.std_n() * safety_factor <= c.max_std_n;
  return v;
}

namespace {

struct CfiInputs {
  double b;
  double f_na;
  double f_na2;
  double kna2;
};

CfiInputs cfi_inputs(const Scenario& sc, const DynamicsSolution& unit_dyn, double tau) {
  const FCoefficients f1 = unit_dyn.f_at(tau);
  CfiInputs in;
  in.b = generator_from(f1).b;
  in.f_na = sc.drive.d1 * f1.f_na;  // F coefficients are linear in d1
  in.f_na2 = f1.f_na2;
  in.kna2 = k_na_squared(f1);
  return in;
}

void add_cfi_warnings(const Scenario& sc, const CfiInputs& in,
                      std::vector<std::string>* warnings) {
  if (in.kna2 >= separability_threshold(sc.k0_scale)) {
    warnings->push_back(
        "cfi: optics and mechanics are not separable at this tau; "
        "the measured-state CFI formulas assume a separable state");
  }
  if (!fna2_is_two_pi_multiple(in.f_na2)) {
    warnings->push_back(
        "cfi: F_na2 is not a multiple of 2*pi at this tau; the closed-form "
        "CFI assumes the evolved probe is again coherent");
  }
}

// Shared dense solves for a whole sweep. DynamicsSolution evaluation is
// const, so grid points can be filled from many threads.
class Evaluator {
 public:
  Evaluator(const Scenario& sc, double tau_max)
      : sc_(sc), ps_(photon_stats(sc.cavity_state)) {
    // one dense solve at unit drive amplitude serves every quantity; the
    // drive-linear coefficients are rescaled to the actual d1 where needed
    unit_.emplace(sc.drive.with_d1(1.0), sc.coupling, sc.freq_mod, tau_max);
  }

  double value(Quantity q, double tau, std::vector<std::string>* warnings) const {
    switch (q) {
      case Quantity::QfiGlobal: {
        const GeneratorCoefficients gc = generator_from(unit_->f_at(tau));
        return qfi_global(gc, ps_, sc_.r_T);
      }
      case Quantity::QfiLocal: {
        const FCoefficients f = unit_->f_at(tau);
        const double kna2 = k_na_squared(f);
        if (kna2 >= separability_threshold(sc_.k0_scale)) {
          std::ostringstream msg;
          msg << "qfi_local: state is not separable at tau = " << tau
              << " (|K_Na|^2 = " << kna2 << "); the global QFI is the only bound";
          throw std::domain_error(msg.str());
        }
        return 4.0 * f.f_na * f.f_na * ps_.var_n;
      }
      case Quantity::CfiHomodyne: {
        const CfiInputs in = cfi_inputs(sc_, *unit_, tau);
        if (warnings) add_cfi_warnings(sc_, in, warnings);
        return std::visit(
            [&](const auto& st) -> double {
              using T = std::decay_t<decltype(st)>;
              if constexpr (std::is_same_v<T, Coherent>) {
                const RotatedAmplitude ra = rotate_amplitude(st.mu_c, 0.0, in.f_na);
                const double lambda = sc_.homodyne_lambda
                                          ? *sc_.homodyne_lambda
                                          : optimal_homodyne_lambda(ra);
                return cfi_homodyne_coherent(in.b, ra, HomodyneSetting{lambda});
              } else {
                const RotatedAmplitude ra = rotate_amplitude(st.mu_c, st.varphi, in.f_na);
                if (warnings && sc_.homodyne_lambda && std::norm(st.mu_c) > 0.0) {
                  warnings->push_back(
                      "cfi_homodyne: bright squeezed probes use the matched-phase "
                      "optimum; measurement.lambda applies to the vacuum branch only");
                }
                const double lambda =
                    sc_.homodyne_lambda ? *sc_.homodyne_lambda : optimal_homodyne_lambda(ra);
                return cfi_homodyne_squeezed(in.b, ra, st.r, HomodyneSetting{lambda});
              }
            },
            sc_.cavity_state);
      }
      case Quantity::CfiHeterodyne: {
        const CfiInputs in = cfi_inputs(sc_, *unit_, tau);
        if (warnings) add_cfi_warnings(sc_, in, warnings);
        return std::visit(
            [&](const auto& st) -> double {
              using T = std::decay_t<decltype(st)>;
              if constexpr (std::is_same_v<T, Coherent>) {
                return cfi_heterodyne_coherent(in.b, st.mu_c);
              } else {
                const RotatedAmplitude ra = rotate_amplitude(st.mu_c, st.varphi, in.f_na);
                return cfi_heterodyne_squeezed(in.b, ra, st.r);
              }
            },
            sc_.cavity_state);
      }
      case Quantity::KNaSquared:
        return k_na_squared(unit_->f_at(tau));
      case Quantity::MeanX:
      case Quantity::StdX: {
        if (warnings && sc_.r_T != 0.0) {
          warnings->push_back(
              "displacement: ground-state mechanical formulas used (r_T ignored)");
        }
        const BogoliubovPair bp = unit_->bogoliubov_at(tau);
        FCoefficients f = unit_->f_at(tau);
        f.f_bp *= sc_.drive.d1;  // rescale drive-linear terms to the actual d1
        f.f_bm *= sc_.drive.d1;
        const auto gd = detail::gamma_delta(bp, f);
        if (q == Quantity::MeanX) {
          return 2.0 * sc_.x0 * std::real(gd.gamma + gd.delta * ps_.mean_n);
        }
        const double re_delta = std::real(gd.delta);
        return sc_.x0 * std::sqrt(1.0 + 2.0 * std::real(bp.alpha * bp.beta) +
                                  2.0 * std::norm(bp.beta) +
                                  4.0 * re_delta * re_delta * ps_.var_n);
      }
      case Quantity::PhononNumber: {
        if (sc_.r_T != 0.0) {
          throw std::domain_error(
              "phonon_number: requires ground-state mechanics (thermal.T_kelvin = 0)");
        }
        const BogoliubovPair bp = unit_->bogoliubov_at(tau);
        FCoefficients f = unit_->f_at(tau);
        f.f_bp *= sc_.drive.d1;
        f.f_bm *= sc_.drive.d1;
        const auto gd = detail::gamma_delta(bp, f);
        return 2.0 * std::real(gd.gamma * std::conj(gd.delta)) * ps_.mean_n +
               std::norm(gd.delta) * ps_.mean_n2() + std::norm(bp.beta) +
               std::norm(gd.gamma);
      }
    }
    throw std::logic_error("evaluate: unhandled quantity");
  }

  const PhotonStats& photon() const { return ps_; }

 private:
  const Scenario& sc_;
  PhotonStats ps_;
  std::optional<DynamicsSolution> unit_;
};

}  // namespace

EvalOutcome evaluate_quantity(const Scenario& sc, Quantity q, double tau,
                              double safety_factor) {
  if (tau < 0.0) throw std::domain_error("evaluate: tau must be >= 0");
  Evaluator ev(sc, tau);
  EvalOutcome out;
  if (auto w = sc.freq_mod.validity_warning(tau)) out.warnings.push_back(*w);
  out.value = ev.value(q, tau, &out.warnings);
  out.validity = photon_validity(sc, tau, safety_factor);
  return out;
}

json eval_record(const Scenario& sc, Quantity q, double tau,
                 const EvalOutcome& outcome, const std::string& config_hash) {
  json v;
  v["evaluated"] = outcome.validity.evaluated;
  if (outcome.validity.evaluated) {
    v["scheme"] = outcome.validity.scheme;
    v["max_mean_n"] = outcome.validity.max_mean_n;
    v["max_std_n"] = outcome.validity.max_std_n;
    v["safety_factor"] = outcome.validity.safety_factor;
    v["mean_ok"] = outcome.validity.mean_ok;
    v["std_ok"] = outcome.validity.std_ok;
    v["ok"] = outcome.validity.ok();
  }
  const PhotonStats ps = photon_stats(sc.cavity_state);
  return json{{"version", kVersion},
              {"config_hash", config_hash},
              {"quantity", to_string(q)},
              {"tau", tau},
              {"value", outcome.value},
              {"mean_photon_number", ps.mean_n},
              {"photon_number_variance", ps.var_n},
              {"warnings", outcome.warnings},
              {"validity", v}};
}

void SweepRequest::validate() const {
  if (!(tau_end > tau_start) || tau_start < 0.0) {
    throw ConfigError("tau-range", "need tau_end > tau_start >= 0");
  }
  if (points < 2) throw ConfigError("tau-range", "need at least 2 points");
}

CsvTable run_sweep(const Scenario& sc, const SweepRequest& req) {
  req.validate();
  Evaluator ev(sc, req.tau_end);
  CsvTable table;
  table.header = {"tau", to_string(req.quantity)};
  table.rows.assign(static_cast<std::size_t>(req.points), {0.0, 0.0});
  const double step = (req.tau_end - req.tau_start) / (req.points - 1);
  parallel_for(static_cast<std::size_t>(req.points), [&](std::size_t i) {
    const double tau = req.tau_start + step * static_cast<double>(i);
    table.rows[i][0] = tau;
    if (req.quantity == Quantity::QfiLocal) {
      // a sweep crosses entangled times; mark them NaN instead of aborting
      try {
        table.rows[i][1] = ev.value(req.quantity, tau, nullptr);
      } catch (const std::domain_error&) {
        table.rows[i][1] = std::numeric_limits<double>::quiet_NaN();
      }
    } else {
      table.rows[i][1] = ev.value(req.quantity, tau, nullptr);
    }
  });
  return table;
}

json sensitivity_report(const Scenario& sc, const SensitivityOptions& opt,
                        const std::string& config_hash) {
  if (!(opt.tau > 0.0)) throw ConfigError("tau", "must be > 0");
  if (opt.measurements < 1.0) throw ConfigError("measurements", "must be >= 1");

  const PhotonStats ps = photon_stats(sc.cavity_state);
  const FCoefficients f =
      f_coefficients_numeric(sc.drive.with_d1(1.0), sc.coupling, sc.freq_mod, opt.tau);
  const double kna2 = k_na_squared(f);
  const bool separable = kna2 < separability_threshold(sc.k0_scale);

  double qfi;
  std::string qfi_kind;
  if (separable) {
    qfi = 4.0 * f.f_na * f.f_na * ps.var_n;
    qfi_kind = "local_cavity";
  } else {
    // never-disentangling dynamics: only the global QFI bounds the precision
    qfi = qfi_global(generator_from(f), ps, sc.r_T);
    qfi_kind = "global_upper_bound";
  }
  const double delta_g0 =
      qcrb_delta_g0(qfi, opt.measurements, sc.x0, sc.system.omega_m);

  json rep{{"version", kVersion},
           {"config_hash", config_hash},
           {"tau", opt.tau},
           {"measurements", opt.measurements},
           {"scheme", scheme_label(classify_scheme(sc))},
           {"qfi", qfi},
           {"qfi_kind", qfi_kind},
           {"k_na_squared", kna2},
           {"separable", separable},
           {"delta_g0", delta_g0}};
  if (sc.system.cavity_length) {
    rep["delta_h"] = gw_strain_bound(delta_g0, *sc.system.cavity_length, sc.system.omega_m);
  }
  if (opt.source_distance && opt.source_ratio) {
    rep["min_source_mass"] =
        min_source_mass(delta_g0, *opt.source_distance, *opt.source_ratio);
  }
  const ValidityVerdict v = photon_validity(sc, opt.tau, opt.safety_factor);
  rep["validity"] = json{{"evaluated", v.evaluated},
                         {"scheme", v.scheme},
                         {"max_mean_n", v.max_mean_n},
                         {"max_std_n", v.max_std_n},
                         {"safety_factor", v.safety_factor},
                         {"mean_ok", v.mean_ok},
                         {"std_ok", v.std_ok},
                         {"ok", v.ok()}};
  std::vector<std::string> warnings;
  if (auto w = sc.freq_mod.validity_warning(opt.tau)) warnings.push_back(*w);
  rep["warnings"] = warnings;
  return rep;
}

json separability_listing(int s_max, int q_max) {
  json freqs = json::array();
  for (const FractionalFrequency& ff : fractional_frequencies(s_max)) {
    bool ok = true;
    for (int q = 1; q <= q_max; ++q) ok = ok && verify_decoupling(ff, 1.0, q);
    freqs.push_back(json{{"n1", ff.n1},
                         {"s", ff.s},
                         {"omega_frac", ff.omega_frac},
                         {"tau_sep", ff.tau_sep},
                         {"decouples", ok}});
  }
  return json{{"version", kVersion}, {"s_max", s_max}, {"q_max", q_max},
              {"frequencies", freqs}};
}

json separability_eval(const Scenario& sc, double tau, const std::string& config_hash) {
  const FCoefficients f =
      f_coefficients_numeric(sc.drive.with_d1(1.0), sc.coupling, sc.freq_mod, tau);
  const double kna2 = k_na_squared(f);
  return json{{"version", kVersion},
              {"config_hash", config_hash},
              {"tau", tau},
              {"k_na_squared", kna2},
              {"threshold", separability_threshold(sc.k0_scale)},
              {"separable_by_criterion", kna2 < separability_threshold(sc.k0_scale)}};
}

}  // namespace optomech
