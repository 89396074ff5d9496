#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "optomech/constants.hpp"
#include "optomech/dynamics.hpp"

namespace optomech {

// |K_Na|^2 = F_nab-^2 + F_nab+^2. Zero means the optics-mechanics state is
// separable (for initial product states); this is a sufficient criterion, so
// callers report "separable by criterion", never "entanglement proven".
inline double k_na_squared(const FCoefficients& f) {
  return f.f_nabm * f.f_nabm + f.f_nabp * f.f_nabp;
}

inline double separability_threshold(double k0_scale) {
  return 1e-12 * std::max(k0_scale * k0_scale, 1.0);
}

inline bool is_separable(const FCoefficients& f, double k0_scale) {
  return k_na_squared(f) < separability_threshold(k0_scale);
}

// Coupling/drive modulation frequency Omega = 1 + 2 n1 / s, which guarantees
// disentangling at every multiple of tau_sep = s pi.
struct FractionalFrequency {
  int n1 = 0;
  int s = 1;
  double omega_frac = 1.0;
  double tau_sep = kPi;
};

inline FractionalFrequency make_fractional(int n1, int s) {
  if (s < 1 || n1 == 0 || 2 * n1 <= -s) {
    throw std::domain_error("fractional frequency: need s >= 1, n1 != 0, n1 > -s/2");
  }
  if (std::gcd(std::abs(n1), s) != 1) {
    throw std::domain_error("fractional frequency: (n1, s) must be coprime");
  }
  FractionalFrequency ff;
  ff.n1 = n1;
  ff.s = s;
  ff.omega_frac = 1.0 + 2.0 * static_cast<double>(n1) / static_cast<double>(s);
  ff.tau_sep = static_cast<double>(s) * kPi;
  return ff;
}

// All canonical (n1, s) with 1 <= s <= s_max and -s/2 < n1 <= s, sorted by
// (s, n1). The n1 <= s cap keeps the enumeration finite and covers the whole
// frequency window 0 < Omega <= 3 used in practice.
inline std::vector<FractionalFrequency> fractional_frequencies(int s_max) {
  if (s_max < 3) throw std::domain_error("fractional_frequencies: s_max must be >= 3");
  std::vector<FractionalFrequency> out;
  for (int s = 1; s <= s_max; ++s) {
    for (int n1 = -(s - 1) / 2; n1 <= s; ++n1) {
      if (n1 == 0 || 2 * n1 <= -s) continue;
      if (std::gcd(std::abs(n1), s) != 1) continue;
      out.push_back(make_fractional(n1, s));
    }
  }
  return out;
}

// Checks the q-th decoupling time tau = q s pi via the modulated-coupling
// closed form.
inline bool verify_decoupling(const FractionalFrequency& ff, double k0, int q,
                              double phi_k = 0.0) {
  if (q < 1) throw std::domain_error("verify_decoupling: q must be >= 1");
  const double tau = q * ff.tau_sep;
  const FCoefficients f =
      f_coefficients_modulated(k0, ff.omega_frac, phi_k, DriveSpec{}, tau);
  return is_separable(f, k0);
}

}  // namespace optomech
