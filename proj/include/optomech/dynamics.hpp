#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "optomech/constants.hpp"
#include "optomech/errors.hpp"
#include "optomech/ode.hpp"

namespace optomech {

using Complex = std::complex<double>;

// Dimensionless drive D1(tau) = -d1 (a + epsilon cos(omega_d1 tau + phi_d1)).
struct DriveSpec {
  double d1 = 0.0;
  double a = 0.0;
  double epsilon = 0.0;
  double omega_d1 = 1.0;
  double phi_d1 = 0.0;

  double value(double tau) const {
    return -d1 * (a + epsilon * std::cos(omega_d1 * tau + phi_d1));
  }
  DriveSpec with_d1(double new_d1) const {
    DriveSpec d = *this;
    d.d1 = new_d1;
    return d;
  }
};

struct ConstantCoupling {
  double k0 = 0.0;
};

// k(tau) = k0 cos(omega_k tau + phi_k)
struct ModulatedCoupling {
  double k0 = 0.0;
  double omega_k = 1.0;
  double phi_k = 0.0;
};

// User-supplied k(tau) on a strictly increasing grid, interpolated with a
// monotone (Fritsch-Carlson) cubic so the integrand does not ring.
class SampledCoupling {
 public:
  SampledCoupling(std::vector<double> tau, std::vector<double> k)
      : tau_(std::move(tau)), k_(std::move(k)) {
    if (tau_.size() != k_.size() || tau_.size() < 2) {
      throw std::domain_error("sampled coupling: need >= 2 (tau, k) pairs");
    }
    for (std::size_t i = 1; i < tau_.size(); ++i) {
      if (!(tau_[i] > tau_[i - 1])) {
        throw std::domain_error("sampled coupling: tau grid must be strictly increasing");
      }
    }
    build_slopes();
  }

  double value(double t) const {
    if (t <= tau_.front()) return k_.front();
    if (t >= tau_.back()) return k_.back();
    std::size_t lo = 0, hi = tau_.size() - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      (tau_[mid] <= t ? lo : hi) = mid;
    }
    const double h = tau_[lo + 1] - tau_[lo];
    const double s = (t - tau_[lo]) / h;
    const double y0 = k_[lo], y1 = k_[lo + 1];
    const double m0 = m_[lo] * h, m1 = m_[lo + 1] * h;
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * m0 +
           (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * m1;
  }

  double scale() const {
    double m = 0.0;
    for (double v : k_) m = std::max(m, std::abs(v));
    return m;
  }

  const std::vector<double>& grid_tau() const { return tau_; }
  const std::vector<double>& grid_k() const { return k_; }

 private:
  void build_slopes() {
    const std::size_t n = tau_.size();
    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      h[i] = tau_[i + 1] - tau_[i];
      delta[i] = (k_[i + 1] - k_[i]) / h[i];
    }
    m_.assign(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (delta[i - 1] * delta[i] > 0.0) {
        const double w1 = 2 * h[i] + h[i - 1];
        const double w2 = h[i] + 2 * h[i - 1];
        m_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
      }
    }
    if (n == 2) {
      m_[0] = m_[1] = delta[0];
      return;
    }
    m_[0] = endpoint_slope(h[0], h[1], delta[0], delta[1]);
    m_[n - 1] = endpoint_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  }

  static double endpoint_slope(double h0, double h1, double d0, double d1) {
    double m = ((2 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (m * d0 <= 0.0) {
      m = 0.0;
    } else if (d0 * d1 < 0.0 && std::abs(m) > 3.0 * std::abs(d0)) {
      m = 3.0 * d0;
    }
    return m;
  }

  std::vector<double> tau_, k_, m_;
};

using CouplingSpec = std::variant<ConstantCoupling, ModulatedCoupling, SampledCoupling>;

inline double coupling_value(const CouplingSpec& c, double tau) {
  return std::visit(
      [tau](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ConstantCoupling>) {
          return v.k0;
        } else if constexpr (std::is_same_v<T, ModulatedCoupling>) {
          return v.k0 * std::cos(v.omega_k * tau + v.phi_k);
        } else {
          return v.value(tau);
        }
      },
      c);
}

// Amplitude scale of the coupling, used by separability thresholds.
inline double coupling_scale(const CouplingSpec& c) {
  return std::visit(
      [](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, SampledCoupling>) {
          return v.scale();
        } else {
          return std::abs(v.k0);
        }
      },
      c);
}

// Mechanical frequency modulation D2(tau) = d2 cos(omega_d2 tau + phi_d2).
struct FreqModSpec {
  double d2 = 0.0;
  double omega_d2 = 2.0;
  double phi_d2 = 0.0;

  static FreqModSpec zero() { return FreqModSpec{0.0, 2.0, 0.0}; }
  bool is_zero() const { return d2 == 0.0; }

  double value(double tau) const {
    return d2 == 0.0 ? 0.0 : d2 * std::cos(omega_d2 * tau + phi_d2);
  }

  // |d2| >= 0.5 is outside any perturbative validity; refuse it outright.
  void validate() const {
    if (std::abs(d2) >= 0.5) {
      throw std::domain_error("freq_mod: |d2| >= 0.5 is outside the model's validity");
    }
  }

  // Soft validity notes (|d2| < 0.1 and d2*tau <~ 1).
  std::optional<std::string> validity_warning(double tau) const {
    if (d2 == 0.0) return std::nullopt;
    if (std::abs(d2) >= 0.1) {
      return "freq_mod: |d2| >= 0.1, perturbative treatment is marginal";
    }
    if (std::abs(d2) * tau > 1.0) {
      return "freq_mod: d2*tau > 1, perturbative solutions degrade";
    }
    return std::nullopt;
  }
};

struct BogoliubovPair {
  Complex alpha{1.0, 0.0};
  Complex beta{0.0, 0.0};
  double p11 = 1.0, ip22 = 0.0;
  double dp11 = 0.0, dip22 = 1.0;

  double normalization_defect() const {
    return std::norm(alpha) - std::norm(beta) - 1.0;
  }
};

struct FCoefficients {
  double f_na = 0.0;
  double f_na2 = 0.0;
  double f_bp = 0.0;
  double f_bm = 0.0;
  double f_nabp = 0.0;
  double f_nabm = 0.0;
};

struct JCoefficients {
  double j_b = 0.0;
  double j_plus = 0.0;
  double j_minus = 0.0;
};

// xi = alpha + conj(beta); equals P11 - i*IP22, the kernel of every
// F-coefficient integral.
inline Complex xi(const BogoliubovPair& bp) {
  return bp.alpha + std::conj(bp.beta);
}

namespace detail {

// sin(x)/x and (cos(x)-1)/x with series fallbacks; these keep the
// oscillatory antiderivatives below uniformly accurate through resonance
// (omega -> 1), where the textbook forms lose ~12 digits to cancellation.
inline double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

inline double cosm1_over_x(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return x * (-0.5 + x2 / 24.0 - x2 * x2 / 720.0);
  }
  return (std::cos(x) - 1.0) / x;
}

// int_0^tau cos(omega u + phi) cos(u) du
inline double int_cos_cos(double omega, double phi, double tau) {
  const double x = (omega - 1.0) * tau;
  return 0.5 * tau * (std::sin(phi) * cosm1_over_x(x) + std::cos(phi) * sinc(x)) +
         (std::sin((omega + 1.0) * tau + phi) - std::sin(phi)) / (2.0 * (omega + 1.0));
}

// int_0^tau cos(omega u + phi) sin(u) du
inline double int_cos_sin(double omega, double phi, double tau) {
  const double x = (omega - 1.0) * tau;
  return 0.5 * (std::cos(phi) - std::cos((omega + 1.0) * tau + phi)) / (omega + 1.0) +
         0.5 * tau * (std::cos(phi) * cosm1_over_x(x) - std::sin(phi) * sinc(x));
}

}  // namespace detail

// Two-timescale solution of y'' + (1 + 4 d2 cos(2 tau + phi_d2)) y = 0,
// valid for |d2| << 1 and d2*tau of order one.
struct MathieuSolution {
  double p11, ip22, dp11, dip22;
};

inline MathieuSolution mathieu_perturbative(double d2, double phi_d2, double tau) {
  const double den = 2.0 * (d2 * std::cos(phi_d2) - 1.0);
  if (std::abs(den) < 1e-12) {
    throw std::domain_error("mathieu_perturbative: singular denominator d2*cos(phi_d2) = 1");
  }
  const double u = std::exp(d2 * tau), v = std::exp(-d2 * tau);
  const double um = u - v, up = u + v;
  const double st = std::sin(tau), ct = std::cos(tau);
  const double sp = std::sin(tau + phi_d2), cp = std::cos(tau + phi_d2);
  MathieuSolution m;
  m.p11 = (um * (sp - d2 * st) + d2 * up * cp - up * ct) / den;
  m.ip22 = (um * cp - up * st) / den;
  m.dp11 = ((1.0 - d2 * d2) * up * st + (1.0 + d2 * d2) * um * cp - 2.0 * d2 * um * ct) / den;
  m.dip22 = (d2 * up * cp - um * sp - d2 * um * st - up * ct) / den;
  return m;
}

inline BogoliubovPair bogoliubov_from(double p11, double ip22, double dp11, double dip22) {
  BogoliubovPair bp;
  bp.p11 = p11;
  bp.ip22 = ip22;
  bp.dp11 = dp11;
  bp.dip22 = dip22;
  bp.alpha = 0.5 * Complex(p11 + dip22, dp11 - ip22);
  bp.beta = 0.5 * Complex(p11 - dip22, dp11 + ip22);
  return bp;
}

inline BogoliubovPair bogoliubov_from(const MathieuSolution& m) {
  return bogoliubov_from(m.p11, m.ip22, m.dp11, m.dip22);
}

// Dense solve of the decoupled dynamics on [0, tau_max].
//
// The nested (B-type) integrals are carried as extra components of one
// first-order system so a single adaptive pass yields P11, IP22, their
// derivatives and all six F coefficients on a common grid:
//   y = [P11, P11', IP22, IP22', Ck, Sk, CD, SD, F_na2, F_na]
// with Ck = int k P11, Sk = int k IP22 (= -F_nabp resp. -F_nabm),
// CD = F_bp, SD = F_bm.
class DynamicsSolution {
 public:
  using State = Eigen::Matrix<double, 10, 1>;

  DynamicsSolution(DriveSpec drive, CouplingSpec coupling, FreqModSpec fm,
                   double tau_max, double rtol = 1e-10, double atol = 1e-12)
      : drive_(std::move(drive)), coupling_(std::move(coupling)), fm_(fm) {
    fm_.validate();
    // The controller bounds the per-step error; tighten it so the requested
    // tolerance holds for the accumulated global error as well.
    rtol /= 100.0;
    atol /= 100.0;
    State y0;
    y0 << 1, 0, 0, 1, 0, 0, 0, 0, 0, 0;
    auto rhs = [this](double t, const State& y) -> State {
      const double w2 = 1.0 + 4.0 * fm_.value(t);
      const double k = coupling_value(coupling_, t);
      const double d1v = drive_.value(t);
      State dy;
      dy[0] = y[1];
      dy[1] = -w2 * y[0];
      dy[2] = y[3];
      dy[3] = -w2 * y[2];
      dy[4] = k * y[0];
      dy[5] = k * y[2];
      dy[6] = d1v * y[0];
      dy[7] = d1v * y[2];
      dy[8] = -2.0 * k * y[2] * y[4];
      dy[9] = 2.0 * d1v * y[2] * y[4] + 2.0 * k * y[2] * y[6];
      return dy;
    };
    sol_ = integrate_dopri5<State>(rhs, y0, 0.0, std::max(tau_max, 0.0), rtol, atol);
  }

  BogoliubovPair bogoliubov_at(double tau) const {
    const State y = sol_(tau);
    return bogoliubov_from(y[0], y[2], y[1], y[3]);
  }

  FCoefficients f_at(double tau) const {
    const State y = sol_(tau);
    FCoefficients f;
    f.f_nabp = -y[4];
    f.f_nabm = -y[5];
    f.f_bp = y[6];
    f.f_bm = y[7];
    f.f_na2 = y[8];
    f.f_na = y[9];
    return f;
  }

  const DriveSpec& drive() const { return drive_; }
  const CouplingSpec& coupling() const { return coupling_; }
  const FreqModSpec& freq_mod() const { return fm_; }

 private:
  DriveSpec drive_;
  CouplingSpec coupling_;
  FreqModSpec fm_;
  DenseSolution<State> sol_;
};

inline BogoliubovPair solve_mechanics(const FreqModSpec& fm, double tau,
                                      double rtol = 1e-10, double atol = 1e-12) {
  if (tau < 0.0) throw std::domain_error("solve_mechanics: tau must be >= 0");
  if (fm.is_zero()) {
    return bogoliubov_from(std::cos(tau), std::sin(tau), -std::sin(tau), std::cos(tau));
  }
  DynamicsSolution dyn(DriveSpec{}, ConstantCoupling{0.0}, fm, tau, rtol, atol);
  return dyn.bogoliubov_at(tau);
}

inline FCoefficients f_coefficients_numeric(const DriveSpec& drive,
                                            const CouplingSpec& coupling,
                                            const FreqModSpec& fm, double tau,
                                            double rtol = 1e-10,
                                            double atol = 1e-12) {
  if (tau < 0.0) throw std::domain_error("f_coefficients_numeric: tau must be >= 0");
  DynamicsSolution dyn(drive, coupling, fm, tau, rtol, atol);
  return dyn.f_at(tau);
}

// Closed forms for constant coupling, resonant drive (omega_d1 = 1), D2 = 0.
inline FCoefficients f_coefficients_constant_resonant(double k0,
                                                      const DriveSpec& drive,
                                                      double tau) {
  const double a = drive.a, eps = drive.epsilon, d1 = drive.d1;
  const double phi = drive.phi_d1;
  const double st = std::sin(tau), ct = std::cos(tau);
  FCoefficients f;
  f.f_bp = -0.5 * d1 * (tau * eps * std::cos(phi) + (2 * a + eps * std::cos(tau + phi)) * st);
  f.f_bm = 0.25 * d1 * (4 * a * (ct - 1) +
                        eps * (2 * tau * std::sin(phi) + std::cos(2 * tau + phi) - std::cos(phi)));
  f.f_nabp = -k0 * st;
  f.f_nabm = k0 * (ct - 1);
  f.f_na2 = -k0 * k0 * (tau - st * ct);
  // int_0^tau cos(u + phi) sin^2(u) du
  const double ic = 0.5 * (std::sin(tau + phi) - std::sin(phi)) -
                    0.25 * ((std::sin(3 * tau + phi) - std::sin(phi)) / 3.0 +
                            std::sin(tau - phi) + std::sin(phi));
  f.f_na = -k0 * d1 * (2 * a * (tau - st * ct) + 3 * eps * ic +
                       eps * std::cos(phi) * (st - tau * ct));
  return f;
}

// Closed forms for k(tau) = k0 cos(omega_k tau + phi_k) and a general drive,
// D2 = 0. Only the four linear coefficients have printed closed forms; the
// quadratic ones (f_na, f_na2) are left at zero here and come from the
// numeric pipeline when needed.
inline FCoefficients f_coefficients_modulated(double k0, double omega_k,
                                              double phi_k,
                                              const DriveSpec& drive,
                                              double tau) {
  if (omega_k < 0.0 || drive.omega_d1 < 0.0) {
    throw std::domain_error("f_coefficients_modulated: frequencies must be >= 0");
  }
  FCoefficients f;
  f.f_nabp = -k0 * detail::int_cos_cos(omega_k, phi_k, tau);
  f.f_nabm = -k0 * detail::int_cos_sin(omega_k, phi_k, tau);
  f.f_bp = -drive.d1 * (drive.a * std::sin(tau) +
                        drive.epsilon * detail::int_cos_cos(drive.omega_d1, drive.phi_d1, tau));
  f.f_bm = -drive.d1 * (drive.a * (1.0 - std::cos(tau)) +
                        drive.epsilon * detail::int_cos_sin(drive.omega_d1, drive.phi_d1, tau));
  return f;
}

// J coefficients of the squeezing factor, from the Bogoliubov pair.
inline JCoefficients j_coefficients(const BogoliubovPair& bp) {
  if (std::abs(bp.normalization_defect()) > 1e-8) {
    throw std::domain_error("j_coefficients: Bogoliubov pair is not symplectic");
  }
  const Complex m = bp.alpha * bp.alpha - bp.beta * bp.beta;
  const double mod = std::abs(m);
  auto clamped_acosh = [](double x) {
    // roundoff can push the argument to 1 - eps
    return std::acosh(std::max(x, 1.0));
  };
  JCoefficients j;
  j.j_plus = clamped_acosh(mod) / 4.0;
  j.j_minus = clamped_acosh((2.0 * std::norm(bp.alpha) - 1.0) / mod) / 4.0;
  j.j_b = -0.5 * std::arg(m / mod);
  return j;
}

}  // namespace optomech
