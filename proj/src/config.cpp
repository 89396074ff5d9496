#include "optomech/config.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "optomech/errors.hpp"

namespace optomech {

using nlohmann::json;

namespace {

const json& require_object(const json& j, const std::string& key) {
  if (!j.contains(key)) throw ConfigError(key, "missing required object");
  if (!j.at(key).is_object()) throw ConfigError(key, "must be an object");
  return j.at(key);
}

double require_number(const json& j, const std::string& scope, const std::string& key) {
  const std::string path = scope + "." + key;
  if (!j.contains(key)) throw ConfigError(path, "missing required number");
  if (!j.at(key).is_number()) throw ConfigError(path, "must be a number");
  return j.at(key).get<double>();
}

double number_or(const json& j, const std::string& scope, const std::string& key,
                 double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw ConfigError(scope + "." + key, "must be a number");
  return j.at(key).get<double>();
}

std::optional<double> optional_number(const json& j, const std::string& scope,
                                      const std::string& key) {
  if (!j.contains(key)) return std::nullopt;
  if (!j.at(key).is_number()) throw ConfigError(scope + "." + key, "must be a number");
  return j.at(key).get<double>();
}

CouplingSpec parse_coupling(const json& c, const Scenario& sc) {
  if (c.contains("tau") || c.contains("k")) {
    if (!c.contains("tau") || !c.contains("k") || !c.at("tau").is_array() ||
        !c.at("k").is_array()) {
      throw ConfigError("coupling", "sampled coupling needs arrays 'tau' and 'k'");
    }
    try {
      return SampledCoupling(c.at("tau").get<std::vector<double>>(),
                             c.at("k").get<std::vector<double>>());
    } catch (const std::exception& e) {
      throw ConfigError("coupling", e.what());
    }
  }
  double k0;
  if (c.contains("k0")) {
    k0 = require_number(c, "coupling", "k0");
  } else if (sc.system.k0) {
    k0 = *sc.system.k0;
  } else {
    throw ConfigError("coupling.k0", "missing and not derivable from system");
  }
  if (k0 < 0.0) throw ConfigError("coupling.k0", "must be >= 0");
  if (c.contains("omega_k")) {
    ModulatedCoupling m;
    m.k0 = k0;
    m.omega_k = require_number(c, "coupling", "omega_k") / sc.system.omega_m;
    m.phi_k = number_or(c, "coupling", "phi_k", 0.0);
    if (m.omega_k < 0.0) throw ConfigError("coupling.omega_k", "must be >= 0");
    return m;
  }
  return ConstantCoupling{k0};
}

CavityState parse_cavity_state(const json& cs) {
  std::string type = "coherent";
  if (cs.contains("type")) {
    if (!cs.at("type").is_string()) throw ConfigError("cavity_state.type", "must be a string");
    type = cs.at("type").get<std::string>();
  }
  const Complex mu(number_or(cs, "cavity_state", "mu_re", 0.0),
                   number_or(cs, "cavity_state", "mu_im", 0.0));
  if (type == "coherent") {
    return Coherent{mu};
  }
  if (type == "squeezed") {
    SqueezedCoherent s;
    s.mu_c = mu;
    s.r = require_number(cs, "cavity_state", "r");
    s.varphi = number_or(cs, "cavity_state", "varphi", 0.0);
    if (s.r < 0.0) throw ConfigError("cavity_state.r", "must be >= 0");
    return s;
  }
  throw ConfigError("cavity_state.type", "must be 'coherent' or 'squeezed'");
}

double parse_thermal(const json& j, double omega_m) {
  if (!j.contains("thermal")) return 0.0;
  const json& t = require_object(j, "thermal");
  if (!t.contains("T_kelvin")) throw ConfigError("thermal.T_kelvin", "missing");
  const json& tk = t.at("T_kelvin");
  if (tk.is_string()) {
    if (tk.get<std::string>() != "infinite") {
      throw ConfigError("thermal.T_kelvin", "string value must be \"infinite\"");
    }
    return kInfiniteTemperature;
  }
  if (!tk.is_number()) throw ConfigError("thermal.T_kelvin", "must be a number or \"infinite\"");
  const double T = tk.get<double>();
  if (T < 0.0) throw ConfigError("thermal.T_kelvin", "must be >= 0");
  return thermal_parameter(T, omega_m);
}

}  // namespace

Scenario parse_scenario(const json& j) {
  if (!j.is_object()) throw ConfigError("(root)", "config must be a JSON object");
  Scenario sc;

  const json& sys = require_object(j, "system");
  sc.system.omega_m = require_number(sys, "system", "omega_m");
  sc.system.mass = require_number(sys, "system", "mass");
  sc.system.omega_c = optional_number(sys, "system", "omega_c");
  sc.system.cavity_length = optional_number(sys, "system", "cavity_length");
  sc.system.k0 = optional_number(sys, "system", "k0");
  sc.validity_length = optional_number(sys, "system", "validity_length");
  try {
    sc.system.validate();
    sc.x0 = zero_point_fluctuation(sc.system);
  } catch (const std::domain_error& e) {
    throw ConfigError("system", e.what());
  }

  // A missing coupling amplitude may be derived from exactly one platform
  // description: Fabry-Perot (omega_c + cavity_length) or levitated sphere.
  if (!sc.system.k0 && j.contains("levitated")) {
    const json& lv = require_object(j, "levitated");
    if (sc.system.cavity_length) {
      throw ConfigError("levitated", "ambiguous: both cavity_length and levitated given");
    }
    LevitatedParams lp;
    lp.volume = require_number(lv, "levitated", "volume");
    lp.relative_permittivity = require_number(lv, "levitated", "relative_permittivity");
    lp.cavity_mode_volume = require_number(lv, "levitated", "cavity_mode_volume");
    lp.wavelength = require_number(lv, "levitated", "wavelength");
    if (!sc.system.omega_c) throw ConfigError("system.omega_c", "required to derive k0");
    try {
      sc.system.k0 = coupling_levitated(lp, sc.x0, *sc.system.omega_c, sc.system.omega_m);
    } catch (const std::domain_error& e) {
      throw ConfigError("levitated", e.what());
    }
  } else if (!sc.system.k0 && sc.system.omega_c && sc.system.cavity_length) {
    sc.system.k0 = coupling_fabry_perot(sc.x0, *sc.system.omega_c,
                                        *sc.system.cavity_length, sc.system.omega_m);
  }

  const json& sig = require_object(j, "signal");
  sc.signal.g0 = require_number(sig, "signal", "g0");
  sc.signal.a = number_or(sig, "signal", "a", 0.0);
  sc.signal.epsilon = number_or(sig, "signal", "epsilon", 0.0);
  sc.signal.omega_g = require_number(sig, "signal", "omega_g");
  sc.signal.phi_g = number_or(sig, "signal", "phi_g", 0.0);
  try {
    sc.drive = d1_from_signal(sc.signal, sc.system);
  } catch (const std::domain_error& e) {
    throw ConfigError("signal", e.what());
  }

  const json& cpl = require_object(j, "coupling");
  sc.coupling = parse_coupling(cpl, sc);
  sc.k0_scale = coupling_scale(sc.coupling);

  if (j.contains("freq_mod")) {
    const json& fm = require_object(j, "freq_mod");
    sc.freq_mod.d2 = number_or(fm, "freq_mod", "d2", 0.0);
    sc.freq_mod.omega_d2 =
        fm.contains("omega_d2")
            ? require_number(fm, "freq_mod", "omega_d2") / sc.system.omega_m
            : 2.0;
    sc.freq_mod.phi_d2 = number_or(fm, "freq_mod", "phi_d2", 0.0);
    try {
      sc.freq_mod.validate();
    } catch (const std::domain_error& e) {
      throw ConfigError("freq_mod.d2", e.what());
    }
  }

  sc.cavity_state = parse_cavity_state(require_object(j, "cavity_state"));
  try {
    sc.r_T = parse_thermal(j, sc.system.omega_m);
  } catch (const std::domain_error& e) {
    throw ConfigError("thermal.T_kelvin", e.what());
  }

  if (j.contains("measurement")) {
    const json& m = require_object(j, "measurement");
    sc.homodyne_lambda = optional_number(m, "measurement", "lambda");
  }
  return sc;
}

LoadedScenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string bytes = buf.str();
  json j;
  try {
    j = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw ConfigError("(root)", std::string("invalid JSON: ") + e.what());
  }
  LoadedScenario out{parse_scenario(j), hash_hex(fnv1a64(bytes))};
  return out;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = digits[h & 0xF];
    h >>= 4;
  }
  return s;
}

}  // namespace optomech
