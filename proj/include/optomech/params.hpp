#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "optomech/constants.hpp"
#include "optomech/dynamics.hpp"

namespace optomech {

// Physical system in SI units. Everything downstream of this module works in
// the rescaled time tau = omega_m * t and is dimensionless; SI re-enters only
// in the sensitivity conversions.
struct SensorConfig {
  double omega_m = 0.0;                    // mechanical angular frequency, rad/s
  double mass = 0.0;                       // oscillator mass, kg
  std::optional<double> omega_c;           // optical angular frequency, rad/s
  std::optional<double> cavity_length;     // L, m
  std::optional<double> k0;                // dimensionless coupling amplitude

  void validate() const {
    if (!(omega_m > 0.0)) throw std::domain_error("system.omega_m must be > 0");
    if (!(mass > 0.0)) throw std::domain_error("system.mass must be > 0");
    if (k0 && *k0 < 0.0) throw std::domain_error("system.k0 must be >= 0");
  }
};

struct LevitatedParams {
  double volume = 0.0;                 // V, m^3
  double relative_permittivity = 0.0;  // epsilon (dimensionless), > 1
  double cavity_mode_volume = 0.0;     // V_c, m^3
  double wavelength = 0.0;             // lambda_c, m

  void validate() const {
    if (!(volume > 0.0)) throw std::domain_error("levitated.volume must be > 0");
    if (!(relative_permittivity > 1.0)) {
      throw std::domain_error("levitated.relative_permittivity must be > 1");
    }
    if (!(cavity_mode_volume > 0.0)) {
      throw std::domain_error("levitated.cavity_mode_volume must be > 0");
    }
    if (!(wavelength > 0.0)) throw std::domain_error("levitated.wavelength must be > 0");
  }
};

// g(t) = -g0 (a + epsilon cos(omega_g t + phi_g))
struct GravitySignal {
  double g0 = 0.0;       // m/s^2
  double a = 0.0;
  double epsilon = 0.0;
  double omega_g = 0.0;  // rad/s
  double phi_g = 0.0;    // rad

  void validate() const {
    if (epsilon < 0.0) throw std::domain_error("signal.epsilon must be >= 0");
    if (a < 0.0) throw std::domain_error("signal.a must be >= 0");
  }
};

// x0 = sqrt(hbar / (2 m omega_m))
inline double zero_point_fluctuation(const SensorConfig& cfg) {
  if (!(cfg.mass > 0.0) || !(cfg.omega_m > 0.0)) {
    throw std::domain_error("zero_point_fluctuation: mass and omega_m must be > 0");
  }
  return std::sqrt(kHBar / (2.0 * cfg.mass * cfg.omega_m));
}

// Fabry-Perot moving-end mirror: k0 = x0 omega_c / (L omega_m)
inline double coupling_fabry_perot(double x0, double omega_c, double length,
                                   double omega_m) {
  if (!(length > 0.0) || !(omega_m > 0.0) || !(omega_c > 0.0) || x0 < 0.0) {
    throw std::domain_error("coupling_fabry_perot: arguments must be positive");
  }
  return x0 * omega_c / (length * omega_m);
}

// Levitated dielectric sphere: k0 = P k_c x0 omega_c / (2 omega_m V_c eps0)
// with P = 3 V eps0 (eps - 1)/(eps + 2); eps0 cancels.
inline double coupling_levitated(const LevitatedParams& p, double x0,
                                 double omega_c, double omega_m) {
  p.validate();
  if (!(omega_m > 0.0) || !(omega_c > 0.0) || x0 < 0.0) {
    throw std::domain_error("coupling_levitated: arguments must be positive");
  }
  const double eps = p.relative_permittivity;
  const double k_c = kTwoPi / p.wavelength;
  const double polarizability_over_eps0 = 3.0 * p.volume * (eps - 1.0) / (eps + 2.0);
  return polarizability_over_eps0 * k_c * x0 * omega_c /
         (2.0 * omega_m * p.cavity_mode_volume);
}

// d1 = g0 / (2 x0 omega_m^2), Omega_d1 = omega_g / omega_m, phi_d1 = phi_g
inline DriveSpec d1_from_signal(const GravitySignal& sig, const SensorConfig& cfg) {
  cfg.validate();
  sig.validate();
  const double x0 = zero_point_fluctuation(cfg);
  DriveSpec d;
  d.d1 = sig.g0 / (2.0 * x0 * cfg.omega_m * cfg.omega_m);
  d.a = sig.a;
  d.epsilon = sig.epsilon;
  d.omega_d1 = sig.omega_g / cfg.omega_m;
  d.phi_d1 = sig.phi_g;
  return d;
}

inline constexpr double kInfiniteTemperature = std::numeric_limits<double>::infinity();

// r_T = artanh(exp(-hbar omega_m / (2 k_B T))); T = 0 -> 0, T = inf -> inf.
inline double thermal_parameter(double temperature_kelvin, double omega_m) {
  if (temperature_kelvin < 0.0) {
    throw std::domain_error("thermal_parameter: temperature must be >= 0");
  }
  if (!(omega_m > 0.0)) throw std::domain_error("thermal_parameter: omega_m must be > 0");
  if (temperature_kelvin == 0.0) return 0.0;
  if (std::isinf(temperature_kelvin)) return kInfiniteTemperature;
  const double x = kHBar * omega_m / (2.0 * kBoltzmann * temperature_kelvin);
  return std::atanh(std::exp(-x));
}

// sech(2 r_T); the r_T = inf sentinel maps to exactly 0.
inline double thermal_weight(double r_T) {
  if (r_T < 0.0) throw std::domain_error("thermal_weight: r_T must be >= 0");
  if (std::isinf(r_T)) return 0.0;
  return 1.0 / std::cosh(2.0 * r_T);
}

// r = S_dB / (20 log10 e) = S_dB ln(10) / 20
inline double squeeze_from_db(double s_db) {
  if (s_db < 0.0) throw std::domain_error("squeeze_from_db: S_dB must be >= 0");
  return s_db * std::log(10.0) / 20.0;
}

}  // namespace optomech
