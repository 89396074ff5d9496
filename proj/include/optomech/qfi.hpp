#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <variant>

#include <Eigen/Core>

#include "optomech/dynamics.hpp"
#include "optomech/parallel.hpp"
#include "optomech/params.hpp"
#include "optomech/separability.hpp"

namespace optomech {

struct Coherent {
  Complex mu_c{0.0, 0.0};
};

// |zeta, mu_c> = S(zeta) |mu_c> with zeta = r e^{i varphi}
struct SqueezedCoherent {
  Complex mu_c{0.0, 0.0};
  double r = 0.0;
  double varphi = 0.0;
};

using CavityState = std::variant<Coherent, SqueezedCoherent>;

struct PhotonStats {
  double mean_n = 0.0;
  double var_n = 0.0;

  double mean_n2() const { return var_n + mean_n * mean_n; }
  double std_n() const { return std::sqrt(var_n); }
};

inline PhotonStats photon_stats(const CavityState& state) {
  return std::visit(
      [](const auto& s) -> PhotonStats {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Coherent>) {
          const double n = std::norm(s.mu_c);
          return PhotonStats{n, n};
        } else {
          if (s.r < 0.0) throw std::domain_error("photon_stats: r must be >= 0");
          const double r = s.r, phi = s.varphi;
          const double mod2 = std::norm(s.mu_c);
          // Re[e^{-i phi/2} mu]^2 selects the quadrature the squeezer acts on
          const double re_proj =
              std::real(std::exp(Complex(0.0, -phi / 2.0)) * s.mu_c);
          const Complex mu_zeta = std::cosh(r) * s.mu_c -
                                  std::exp(Complex(0.0, phi)) * std::sinh(r) *
                                      std::conj(s.mu_c);
          PhotonStats ps;
          ps.mean_n = std::norm(mu_zeta) + std::sinh(r) * std::sinh(r);
          ps.var_n = mod2 * std::exp(4.0 * r) +
                     0.5 * std::sinh(2.0 * r) * std::sinh(2.0 * r) -
                     2.0 * re_proj * re_proj * std::sinh(4.0 * r);
          return ps;
        }
      },
      state);
}

// Generator of the d1 shift, H = B Na + C+ B+ + C- B-. The d1 derivatives
// are exact: every d1-dependent F coefficient is linear in d1, so they equal
// the coefficients evaluated at d1 = 1.
struct GeneratorCoefficients {
  double b = 0.0;
  double c_plus = 0.0;
  double c_minus = 0.0;
};

inline GeneratorCoefficients generator_from(const FCoefficients& f_at_unit_d1) {
  GeneratorCoefficients g;
  g.b = -f_at_unit_d1.f_na - 2.0 * f_at_unit_d1.f_nabm * f_at_unit_d1.f_bp;
  g.c_plus = -f_at_unit_d1.f_bp;
  g.c_minus = -f_at_unit_d1.f_bm;
  return g;
}

inline GeneratorCoefficients generator_coefficients(const DriveSpec& drive,
                                                    const CouplingSpec& coupling,
                                                    const FreqModSpec& fm,
                                                    double tau) {
  return generator_from(
      f_coefficients_numeric(drive.with_d1(1.0), coupling, fm, tau));
}

// I = 4 [ B^2 Var(Na) + sech(2 r_T) (C+^2 + C-^2) ]
inline double qfi_global(const GeneratorCoefficients& gc, const PhotonStats& ps,
                         double r_T) {
  if (ps.var_n < 0.0) throw std::domain_error("qfi_global: var_n must be >= 0");
  return 4.0 * (gc.b * gc.b * ps.var_n +
                thermal_weight(r_T) * (gc.c_plus * gc.c_plus + gc.c_minus * gc.c_minus));
}

// Cavity-only QFI, defined at separable times: I_c = 4 (dF_Na)^2 Var(Na).
inline double qfi_local_cavity(const DriveSpec& drive, const CouplingSpec& coupling,
                               const FreqModSpec& fm, double tau_sep,
                               const PhotonStats& ps) {
  const FCoefficients f = f_coefficients_numeric(drive.with_d1(1.0), coupling, fm, tau_sep);
  const double kna2 = k_na_squared(f);
  if (kna2 >= separability_threshold(coupling_scale(coupling))) {
    std::ostringstream msg;
    msg << "qfi_local_cavity: state is not separable at tau = " << tau_sep
        << " (|K_Na|^2 = " << kna2 << ")";
    throw std::domain_error(msg.str());
  }
  return 4.0 * f.f_na * f.f_na * ps.var_n;
}

// Constant coupling, resonant drive (Omega_d1 = 1), arbitrary tau.
inline double qfi_resonant_closed(double k0, const DriveSpec& drive, double tau,
                                  const PhotonStats& ps, double r_T) {
  const double a = drive.a, eps = drive.epsilon, phi = drive.phi_d1;
  const double st = std::sin(tau);
  const double b_term =
      -4.0 * a * (tau - st) +
      eps * (2.0 * tau * std::cos(phi) - 4.0 * std::sin(tau + phi) +
             std::sin(2.0 * tau + phi) + 3.0 * std::sin(phi));
  const double c1 = tau * eps * std::cos(phi) + st * (eps * std::cos(tau + phi) + 2.0 * a);
  const double c2 = 2.0 * tau * eps * std::sin(phi) + eps * std::cos(2.0 * tau + phi) -
                    eps * std::cos(phi) + 4.0 * a * (std::cos(tau) - 1.0);
  return k0 * k0 * ps.var_n * b_term * b_term +
         0.25 * thermal_weight(r_T) * (4.0 * c1 * c1 + c2 * c2);
}

// Coupling and drive both resonant (Omega_k = Omega_d1 = 1), arbitrary tau.
inline double qfi_doubly_resonant(double k0, double phi_k, const DriveSpec& drive,
                                  double tau, const PhotonStats& ps, double r_T) {
  const double a = drive.a, eps = drive.epsilon, p1 = drive.phi_d1;
  const double br =
      4.0 * a * std::sin(tau - phi_k) - 12.0 * a * std::sin(tau + phi_k) +
      8.0 * a * tau * std::cos(tau + phi_k) + 16.0 * a * std::sin(phi_k) +
      2.0 * tau * tau * eps * std::sin(p1 - phi_k) +
      eps * std::sin(2.0 * tau - phi_k + p1) -
      2.0 * eps * std::sin(2.0 * tau + phi_k + p1) -
      2.0 * tau * eps * std::cos(p1 - phi_k) +
      2.0 * tau * eps * std::cos(phi_k + p1) +
      2.0 * tau * eps * std::cos(2.0 * tau + phi_k + p1) -
      eps * std::sin(p1 - phi_k) + 2.0 * eps * std::sin(phi_k + p1);
  const double c1 = std::sin(tau) * (2.0 * a + eps * std::cos(tau + p1)) +
                    tau * eps * std::cos(p1);
  const double c2 = 4.0 * a * std::cos(tau) - 4.0 * a +
                    2.0 * tau * eps * std::sin(p1) +
                    eps * std::cos(2.0 * tau + p1) - eps * std::cos(p1);
  return k0 * k0 * ps.var_n * br * br / 16.0 +
         0.25 * thermal_weight(r_T) * (4.0 * c1 * c1 + c2 * c2);
}

// Coupling and drive modulated at the same frequency Omega != 1, arbitrary
// tau. The printed form cancels catastrophically as Omega -> 1; within
// 1e-6 of resonance it defers to the doubly resonant expression.
inline double qfi_same_frequency(double k0, double omega, double phi_k,
                                 const DriveSpec& drive, double tau,
                                 const PhotonStats& ps, double r_T) {
  if (std::abs(omega - 1.0) <= 1e-6) {
    return qfi_doubly_resonant(k0, phi_k, drive, tau, ps, r_T);
  }
  const double O = omega, a = drive.a, eps = drive.epsilon;
  const double pk = phi_k, p1 = drive.phi_d1;
  const double O2 = O * O, O3 = O2 * O, O4 = O2 * O2;
  const double br =
      -2.0 * a * O4 * std::sin(tau + pk) - 2.0 * a * O3 * std::sin(tau + pk) +
      2.0 * a * O2 * std::sin(tau + pk) + 4.0 * a * O2 * std::sin(tau * O + pk) +
      2.0 * a * (O - 1.0) * (O - 1.0) * (O + 1.0) * O * std::sin(tau - pk) +
      2.0 * a * O * std::sin(tau + pk) - 4.0 * a * std::sin(tau * O + pk) +
      4.0 * a * O4 * std::sin(pk) - 8.0 * a * O2 * std::sin(pk) +
      4.0 * a * std::sin(pk) + O3 * eps * std::sin(tau * O + tau - pk + p1) -
      O3 * eps * std::sin(tau * O + tau + pk + p1) -
      O3 * eps * std::sin(-tau * O + tau - pk - p1) +
      O3 * eps * std::sin(-tau * O + tau + pk - p1) -
      2.0 * O2 * eps * std::sin(tau * O + tau - pk + p1) +
      O2 * eps * std::sin(2.0 * tau * O + pk + p1) +
      2.0 * O2 * eps * std::sin(-tau * O + tau + pk - p1) +
      2.0 * tau * (O2 - 1.0) * O * eps * std::cos(p1 - pk) +
      O * eps * std::sin(tau * O + tau - pk + p1) +
      O * eps * std::sin(tau * O + tau + pk + p1) +
      O * eps * std::sin(-tau * O + tau - pk - p1) +
      O * eps * std::sin(-tau * O + tau + pk - p1) -
      eps * std::sin(2.0 * tau * O + pk + p1) +
      4.0 * O2 * eps * std::sin(p1 - pk) - O2 * eps * std::sin(pk + p1) +
      eps * std::sin(pk + p1);
  const double den = O2 - 1.0;
  const double c1 =
      a * (1.0 - std::cos(tau)) +
      eps * (O * std::sin(tau) * std::sin(tau * O + p1) +
             std::cos(tau) * std::cos(tau * O + p1) - std::cos(p1)) / den;
  const double c2 =
      std::sin(tau) * (a * den - eps * std::cos(tau * O + p1)) +
      O * eps * (std::sin(p1) * (std::cos(tau) * std::cos(tau * O) - 1.0) +
                 std::cos(tau) * std::cos(p1) * std::sin(tau * O));
  return k0 * k0 * ps.var_n * br * br / (O2 * den * den * den * den) +
         4.0 * thermal_weight(r_T) * (c1 * c1 + c2 * c2 / (den * den));
}

// Fractional modulation (Omega_k = Omega_d1 = Omega_frac) at the decoupling
// time tau = q s pi.
inline double qfi_fractional_at_sep(const FractionalFrequency& ff, int q,
                                    double k0, double phi_k,
                                    const DriveSpec& drive,
                                    const PhotonStats& ps, double r_T) {
  if (q < 1) throw std::domain_error("qfi_fractional_at_sep: q must be >= 1");
  const double n1 = ff.n1, s = ff.s;
  const double a = drive.a, eps = drive.epsilon;
  const double parity = (q * ff.s) % 2 == 0 ? 0.0 : -2.0;  // (-1)^(qs) - 1
  const double br = kPi * q * s * s * eps * (2.0 * n1 + s) *
                        std::cos(drive.phi_d1 - phi_k) -
                    8.0 * a * n1 * (n1 + s) * parity * std::sin(phi_k);
  const double pref = k0 * k0 * ps.var_n * s * s /
                      (4.0 * n1 * n1 * (n1 + s) * (n1 + s) * (2.0 * n1 + s) *
                       (2.0 * n1 + s));
  return pref * br * br + 4.0 * a * a * parity * parity * thermal_weight(r_T);
}

struct ParametricQfi {
  double full = 0.0;      // bracketed large-temperature closed form
  double dominant = 0.0;  // 4 k0^2 eps^2 (e^{d2 tau} - 1)^2 / d2^2 * Var(Na)
};

// Parametric resonance (Omega_d2 = 2) with constant coupling and resonant
// drive, at the optimal phases phi_d2 = -pi/2, phi_d1 = 0 and a = 0. This is
// the perturbative large-temperature form; for general phases use the
// numeric pipeline (generator_coefficients + qfi_global).
inline ParametricQfi qfi_parametric(double k0, const DriveSpec& drive,
                                    const FreqModSpec& fm, double tau,
                                    const PhotonStats& ps, double /*r_T*/) {
  fm.validate();
  const double d2 = fm.d2, eps = drive.epsilon;
  if (d2 == 0.0) {
    throw std::domain_error("qfi_parametric: d2 must be nonzero");
  }
  const double E = std::exp(d2 * tau);
  const double st = std::sin(tau), ct = std::cos(tau);
  const double Em1 = E - 1.0;
  const double g = E * ct - 2.0;
  ParametricQfi out;
  out.dominant = 4.0 * k0 * k0 * eps * eps * Em1 * Em1 / (d2 * d2) * ps.var_n;
  out.full =
      (2.0 / 3.0) * k0 * k0 * eps * eps * ps.var_n *
      (6.0 * Em1 * Em1 / (d2 * d2) - 15.0 * Em1 * Em1 +
       6.0 * st * st * g * g + 12.0 * Em1 * st * g / d2 +
       Em1 * ((9.0 * std::cos(2.0 * tau) + 3.0) * std::sinh(d2 * tau) +
              6.0 * st * st * std::cosh(d2 * tau) +
              16.0 * (ct * ct * ct - 1.0)));
  return out;
}

struct PhaseMap {
  Eigen::VectorXd phi_d2;   // row coordinates
  Eigen::VectorXd phi_d1;   // column coordinates
  Eigen::MatrixXd qfi;      // qfi(i, j) at (phi_d2[i], phi_d1[j])
  Eigen::Index argmax_row = 0;
  Eigen::Index argmax_col = 0;
};

// Exact (numeric-pipeline) QFI over an initial-phase grid for a purely
// oscillating drive at resonance with parametric modulation Omega_d2 = 2.
inline PhaseMap qfi_phase_map(const Eigen::VectorXd& phi_d2_grid,
                              const Eigen::VectorXd& phi_d1_grid, double k0,
                              double d2, double tau, const PhotonStats& ps,
                              double r_T = kInfiniteTemperature,
                              double epsilon = 1.0) {
  PhaseMap map;
  map.phi_d2 = phi_d2_grid;
  map.phi_d1 = phi_d1_grid;
  map.qfi.resize(phi_d2_grid.size(), phi_d1_grid.size());
  const Eigen::Index cols = phi_d1_grid.size();
  parallel_for(static_cast<std::size_t>(phi_d2_grid.size()), [&](std::size_t i) {
    FreqModSpec fm{d2, 2.0, phi_d2_grid[static_cast<Eigen::Index>(i)]};
    for (Eigen::Index j = 0; j < cols; ++j) {
      DriveSpec drive{1.0, 0.0, epsilon, 1.0, phi_d1_grid[j]};
      const GeneratorCoefficients gc =
          generator_coefficients(drive, ConstantCoupling{k0}, fm, tau);
      map.qfi(static_cast<Eigen::Index>(i), j) = qfi_global(gc, ps, r_T);
    }
  });
  map.qfi.maxCoeff(&map.argmax_row, &map.argmax_col);
  return map;
}

}  // namespace optomech
