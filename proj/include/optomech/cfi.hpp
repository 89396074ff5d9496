#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include "optomech/constants.hpp"
#include "optomech/dynamics.hpp"

namespace optomech {

// Local-oscillator phase of the measured quadrature x_lambda.
struct HomodyneSetting {
  double lambda = 0.0;
};

// Cavity amplitude after the separable-time evolution: mu_tilde =
// mu e^{-i F_Na}; a squeezed state's angle shifts to varphi - 2 F_Na.
struct RotatedAmplitude {
  Complex mu_tilde{0.0, 0.0};
  double varphi_tilde = 0.0;
};

inline RotatedAmplitude rotate_amplitude(Complex mu_c, double varphi, double f_na) {
  RotatedAmplitude ra;
  ra.mu_tilde = mu_c * std::exp(Complex(0.0, -f_na));
  ra.varphi_tilde = varphi - 2.0 * f_na;
  return ra;
}

// The measured-quadrature CFI formulas below hold when F_Na2 is a multiple
// of 2 pi at the measurement time, so the evolved coherent state is again
// coherent. Callers check with this predicate; the CLI warns on violation.
inline bool fna2_is_two_pi_multiple(double f_na2, double tol = 1e-6) {
  return std::abs(std::remainder(f_na2, kTwoPi)) < tol;
}

// I = 4 B^2 Im(mu_tilde e^{-i lambda})^2
inline double cfi_homodyne_coherent(double b, const RotatedAmplitude& ra,
                                    const HomodyneSetting& h) {
  const double im = std::imag(ra.mu_tilde * std::exp(Complex(0.0, -h.lambda)));
  return 4.0 * b * b * im * im;
}

// lambda maximizing Im(mu_tilde e^{-i lambda})^2, i.e. arg(mu_tilde) - pi/2.
inline double optimal_homodyne_lambda(const RotatedAmplitude& ra) {
  return std::arg(ra.mu_tilde) - kPi / 2.0;
}

// Squeezed probe at the matched phases: I = 4 B^2 |mu|^2 e^{4r}.
inline double cfi_homodyne_squeezed_optimal(double b, const RotatedAmplitude& ra,
                                            double r) {
  return 4.0 * b * b * std::norm(ra.mu_tilde) * std::exp(4.0 * r);
}

// Squeezed vacuum (mu = 0) at arbitrary lambda.
inline double cfi_homodyne_squeezed_vacuum(double b, double varphi_tilde,
                                           double r, const HomodyneSetting& h) {
  const double delta = varphi_tilde - 2.0 * h.lambda;
  const double s2 = std::sinh(2.0 * r), c2 = std::cosh(2.0 * r);
  const double den = c2 - s2 * std::cos(delta);
  const double sd = std::sin(delta);
  return b * b * 2.0 * s2 * s2 * sd * sd / (den * den);
}

// Dispatch: vacuum formula for mu = 0, matched-phase optimum otherwise.
inline double cfi_homodyne_squeezed(double b, const RotatedAmplitude& ra,
                                    double r, const HomodyneSetting& h) {
  if (std::norm(ra.mu_tilde) == 0.0) {
    return cfi_homodyne_squeezed_vacuum(b, ra.varphi_tilde, r, h);
  }
  return cfi_homodyne_squeezed_optimal(b, ra, r);
}

// I = 2 B^2 |mu|^2, exactly half of the local QFI for coherent probes.
inline double cfi_heterodyne_coherent(double b, Complex mu_c) {
  return 2.0 * b * b * std::norm(mu_c);
}

// I = 2 B^2 [ |mu|^2 e^{3r} sech r + 2 sinh^2 r
//             - 2 Re(e^{-i varphi_tilde / 2} mu_tilde)^2 sinh(3r) sech r ]
inline double cfi_heterodyne_squeezed(double b, const RotatedAmplitude& ra,
                                      double r) {
  const double sech = 1.0 / std::cosh(r);
  const double re_proj = std::real(
      std::exp(Complex(0.0, -ra.varphi_tilde / 2.0)) * ra.mu_tilde);
  const double value =
      2.0 * b * b *
      (std::norm(ra.mu_tilde) * std::exp(3.0 * r) * sech +
       2.0 * std::sinh(r) * std::sinh(r) -
       2.0 * re_proj * re_proj * std::sinh(3.0 * r) * sech);
  if (value < 0.0) {
    throw std::runtime_error("cfi_heterodyne_squeezed: negative value, inputs inconsistent");
  }
  return value;
}

}  // namespace optomech
