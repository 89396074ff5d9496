#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

#include "optomech/constants.hpp"
#include "optomech/dynamics.hpp"
#include "optomech/qfi.hpp"

namespace optomech {

// Initial mechanical state: thermal parameter plus an optional coherent
// displacement. The displacement and phonon formulas below are the
// ground-state (r_T = 0) expressions; mu_m enters the mean displacement.
struct MechanicalState {
  double r_T = 0.0;
  Complex mu_m{0.0, 0.0};
};

struct DisplacementStats {
  double mean_x = 0.0;  // m
  double std_x = 0.0;   // m
};

enum class Scheme { Constant, ResonantCoupling, Fractional, Parametric };

struct SchemeSpec {
  Scheme kind = Scheme::Constant;
  int s = 0;       // Fractional only
  double d2 = 0.0; // Parametric only
};

inline std::string scheme_label(const SchemeSpec& s) {
  switch (s.kind) {
    case Scheme::Constant: return "constant";
    case Scheme::ResonantCoupling: return "resonant_coupling";
    case Scheme::Fractional: return "fractional(s=" + std::to_string(s.s) + ")";
    case Scheme::Parametric: return "parametric";
  }
  return "unknown";
}

struct PhotonCeilings {
  double max_mean_n = 0.0;
  double max_std_n = 0.0;
};

// Quantum Cramer-Rao bound on the acceleration amplitude:
// delta_g0 = 2 x0 omega_m^2 / sqrt(M * I). Zero information yields an
// infinite bound, reported as such rather than thrown.
inline double qcrb_delta_g0(double qfi, double measurements, double x0,
                            double omega_m) {
  if (measurements < 1.0) throw std::domain_error("qcrb_delta_g0: M must be >= 1");
  if (qfi < 0.0) throw std::domain_error("qcrb_delta_g0: qfi must be >= 0");
  if (qfi == 0.0) return std::numeric_limits<double>::infinity();
  return 2.0 * x0 * omega_m * omega_m / std::sqrt(measurements * qfi);
}

// Resonant constant-coupling bound at tau = 2 pi n, optimal drive phase:
// delta_g0 = (1/sqrt(M)) (1 / (4 pi n k0 (2a + eps))) (1/dN) sqrt(2 hbar w^3/m),
// with sqrt(2 hbar omega_m^3 / m) = 2 x0 omega_m^2.
inline double delta_g0_resonant(int n, double k0, double a, double epsilon,
                                const PhotonStats& ps, double measurements,
                                double x0, double omega_m) {
  if (n < 1) throw std::domain_error("delta_g0_resonant: n must be >= 1");
  const double dn = ps.std_n();
  return 2.0 * x0 * omega_m * omega_m /
         (std::sqrt(measurements) * 4.0 * kPi * n * k0 * (2.0 * a + epsilon) * dn);
}

// Fractional-modulation bound at tau = s pi (eps = 1, a = 0):
// delta_g0 = (1/sqrt(M)) (2 (s-1) / (pi k0 s^3)) (1/dN) * 2 x0 omega_m^2.
inline double delta_g0_fractional(int s, double k0, const PhotonStats& ps,
                                  double measurements, double x0,
                                  double omega_m) {
  if (s < 3) throw std::domain_error("delta_g0_fractional: s must be >= 3");
  const double dn = ps.std_n();
  const double s3 = static_cast<double>(s) * s * s;
  return 2.0 * x0 * omega_m * omega_m * 2.0 * (s - 1.0) /
         (std::sqrt(measurements) * kPi * k0 * s3 * dn);
}

// Gravitational-wave strain bound: delta_h = 2 delta_g0 / (L omega_m^2).
inline double gw_strain_bound(double delta_g0, double cavity_length,
                              double omega_m) {
  if (!(cavity_length > 0.0)) throw std::domain_error("gw_strain_bound: L must be > 0");
  return 2.0 * delta_g0 / (cavity_length * omega_m * omega_m);
}

// Smallest detectable oscillating source mass: the oscillating part of the
// acceleration is ratio * G m_S / r0^2 with ratio = 2 delta_r0 / r0, so
// m_S = delta_g0 r0^2 / (ratio G).
inline double min_source_mass(double delta_g0_osc, double r0,
                              double delta_r0_ratio) {
  if (!(r0 > 0.0) || !(delta_r0_ratio > 0.0)) {
    throw std::domain_error("min_source_mass: r0 and ratio must be > 0");
  }
  return delta_g0_osc * r0 * r0 / (delta_r0_ratio * kGravitation);
}

// Casimir acceleration between two perfectly conducting spheres:
// a_C = 161 hbar c R^6 / (4 pi m r^8), valid for separation r > 2R.
inline double casimir_acceleration(double mass, double radius, double separation) {
  if (!(mass > 0.0) || !(radius > 0.0)) {
    throw std::domain_error("casimir_acceleration: mass and radius must be > 0");
  }
  if (!(separation > 2.0 * radius)) {
    throw std::domain_error("casimir_acceleration: spheres overlap (need r > 2R)");
  }
  const double R6 = std::pow(radius, 6);
  const double r8 = std::pow(separation, 8);
  return 161.0 * kHBar * kSpeedOfLight * R6 / (4.0 * kPi * mass * r8);
}

inline double sphere_radius_from_density(double mass, double density) {
  if (!(mass > 0.0) || !(density > 0.0)) {
    throw std::domain_error("sphere_radius_from_density: arguments must be > 0");
  }
  return std::cbrt(3.0 * mass / (4.0 * kPi * density));
}

namespace detail {

struct GammaDelta {
  Complex gamma, delta;
};

inline GammaDelta gamma_delta(const BogoliubovPair& bp, const FCoefficients& f) {
  const Complex ap = bp.alpha + bp.beta;
  const Complex am = bp.alpha - bp.beta;
  GammaDelta gd;
  gd.delta = ap * f.f_nabm - Complex(0.0, 1.0) * am * f.f_nabp;
  gd.gamma = ap * f.f_bm - Complex(0.0, 1.0) * am * f.f_bp;
  return gd;
}

}  // namespace detail

// Mean and standard deviation of the mechanical position x_m = x0 (b^dag + b).
// cancel_radiation_pressure models an external linear potential that removes
// every <Na>-proportional contribution from the mean (it does not change the
// QFI or the variance).
inline DisplacementStats displacement_stats(const DriveSpec& drive,
                                            const CouplingSpec& coupling,
                                            const FreqModSpec& fm,
                                            const MechanicalState& mech,
                                            const PhotonStats& ps, double x0,
                                            double tau,
                                            bool cancel_radiation_pressure = false) {
  if (tau < 0.0) throw std::domain_error("displacement_stats: tau must be >= 0");
  DynamicsSolution dyn(drive, coupling, fm, tau);
  const BogoliubovPair bp = dyn.bogoliubov_at(tau);
  const FCoefficients f = dyn.f_at(tau);
  const auto gd = detail::gamma_delta(bp, f);
  Complex mean_b = bp.alpha * mech.mu_m + bp.beta * std::conj(mech.mu_m) + gd.gamma;
  if (!cancel_radiation_pressure) mean_b += gd.delta * ps.mean_n;
  const double re_delta = std::real(gd.delta);
  const double var = 1.0 + 2.0 * std::real(bp.alpha * bp.beta) +
                     2.0 * std::norm(bp.beta) +
                     4.0 * re_delta * re_delta * ps.var_n;
  DisplacementStats out;
  out.mean_x = 2.0 * x0 * std::real(mean_b);
  out.std_x = x0 * std::sqrt(var);
  return out;
}

// Ceilings on <Na> and dNa below which the extended Hamiltonian stays valid
// for a displacement scale l. The "much smaller than" of the model is
// operationalized by callers via a safety factor (default 100).
inline PhotonCeilings photon_bounds(const SchemeSpec& scheme, double validity_length,
                                    double x0, double k0, double tau) {
  if (!(validity_length > 0.0) || !(x0 > 0.0) || !(k0 > 0.0)) {
    throw std::domain_error("photon_bounds: l, x0, k0 must be > 0");
  }
  double ceiling = 0.0;
  switch (scheme.kind) {
    case Scheme::Constant:
      ceiling = validity_length / (2.0 * x0 * k0);
      break;
    case Scheme::ResonantCoupling:
      if (!(tau > 0.0)) throw std::domain_error("photon_bounds: tau must be > 0");
      ceiling = validity_length / (x0 * k0 * tau);
      break;
    case Scheme::Fractional:
      // tau is the decoupling time s pi; larger than the resonant case by pi
      if (!(tau > 0.0)) throw std::domain_error("photon_bounds: tau must be > 0");
      ceiling = kPi * validity_length / (x0 * k0 * tau);
      break;
    case Scheme::Parametric:
      ceiling = validity_length /
                (2.0 * x0 * k0 * (1.0 + std::exp(scheme.d2 * tau)));
      break;
    default:
      throw std::domain_error("photon_bounds: unknown scheme");
  }
  return PhotonCeilings{ceiling, ceiling};
}

// Phonon number for initially ground-state mechanics:
// <Nb> = (Gamma* Delta + Gamma Delta*) <Na> + |Delta|^2 <Na^2> + |beta|^2 + |Gamma|^2.
inline double phonon_number(const DriveSpec& drive, const CouplingSpec& coupling,
                            const FreqModSpec& fm, const PhotonStats& ps,
                            double tau) {
  if (tau < 0.0) throw std::domain_error("phonon_number: tau must be >= 0");
  DynamicsSolution dyn(drive, coupling, fm, tau);
  const BogoliubovPair bp = dyn.bogoliubov_at(tau);
  const auto gd = detail::gamma_delta(bp, dyn.f_at(tau));
  return 2.0 * std::real(gd.gamma * std::conj(gd.delta)) * ps.mean_n +
         std::norm(gd.delta) * ps.mean_n2() + std::norm(bp.beta) +
         std::norm(gd.gamma);
}

}  // namespace optomech
