#include <cmath>

#include <doctest.h>

#include "optomech/params.hpp"

using namespace optomech;

namespace {
SensorConfig table1_system() {
  SensorConfig cfg;
  cfg.omega_m = kTwoPi * 100.0;
  cfg.mass = 1e-15;
  return cfg;
}
}  // namespace

TEST_CASE("zero-point fluctuation from the defining formula") {
  // oracle: direct evaluation sqrt(hbar / (2 m omega_m)) with CODATA hbar
  CHECK(zero_point_fluctuation(table1_system()) ==
        doctest::Approx(9.160794657696233e-12).epsilon(1e-12));

  SensorConfig heavy;
  heavy.omega_m = 10.0;
  heavy.mass = 1e-10;
  CHECK(zero_point_fluctuation(heavy) ==
        doctest::Approx(2.2962706907069993e-13).epsilon(1e-12));

  // quadrupling the mass halves x0
  SensorConfig quad = table1_system();
  quad.mass *= 4.0;
  CHECK(zero_point_fluctuation(quad) ==
        doctest::Approx(0.5 * zero_point_fluctuation(table1_system())).epsilon(1e-14));

  SensorConfig bad = table1_system();
  bad.mass = 0.0;
  CHECK_THROWS_AS(zero_point_fluctuation(bad), std::domain_error);
  bad = table1_system();
  bad.omega_m = -1.0;
  CHECK_THROWS_AS(zero_point_fluctuation(bad), std::domain_error);
}

TEST_CASE("Fabry-Perot coupling") {
  CHECK(coupling_fabry_perot(1e-15, 1e15, 0.1, 1e4) == doctest::Approx(1e-3).epsilon(1e-14));
  const double k = coupling_fabry_perot(2e-12, 1.8e15, 0.05, 700.0);
  CHECK(coupling_fabry_perot(2e-12, 1.8e15, 0.10, 700.0) ==
        doctest::Approx(0.5 * k).epsilon(1e-14));
  CHECK(coupling_fabry_perot(0.0, 1e15, 0.1, 1e4) == 0.0);
  CHECK_THROWS_AS(coupling_fabry_perot(1e-15, 1e15, 0.0, 1e4), std::domain_error);
}

TEST_CASE("levitated coupling") {
  LevitatedParams p;
  p.volume = 1e-19;
  p.relative_permittivity = 2.0;
  p.cavity_mode_volume = 1e-12;
  p.wavelength = 1064e-9;
  const double x0 = 1e-11;
  const double omega_c = kTwoPi * kSpeedOfLight / p.wavelength;
  const double omega_m = 1e5;
  // arithmetic oracle: P/eps0 = 3 V (eps-1)/(eps+2), k_c = 2 pi / lambda
  const double expected = (3.0 * 1e-19 * 1.0 / 4.0) * (kTwoPi / 1064e-9) * x0 *
                          omega_c / (2.0 * omega_m * 1e-12);
  CHECK(coupling_levitated(p, x0, omega_c, omega_m) ==
        doctest::Approx(expected).epsilon(1e-14));

  // eps -> infinity saturates the polarizability at 3 V eps0
  LevitatedParams sat = p;
  sat.relative_permittivity = 1e12;
  const double cap = (3.0 * p.volume) * (kTwoPi / p.wavelength) * x0 * omega_c /
                     (2.0 * omega_m * p.cavity_mode_volume);
  CHECK(coupling_levitated(sat, x0, omega_c, omega_m) ==
        doctest::Approx(cap).epsilon(1e-6));

  // invariance under joint rescaling of V and V_c
  LevitatedParams scaled = p;
  scaled.volume *= 7.3;
  scaled.cavity_mode_volume *= 7.3;
  CHECK(coupling_levitated(scaled, x0, omega_c, omega_m) ==
        doctest::Approx(coupling_levitated(p, x0, omega_c, omega_m)).epsilon(1e-14));

  LevitatedParams vac = p;
  vac.relative_permittivity = 1.0;
  CHECK_THROWS_AS(coupling_levitated(vac, x0, omega_c, omega_m), std::domain_error);
  LevitatedParams nomode = p;
  nomode.cavity_mode_volume = 0.0;
  CHECK_THROWS_AS(coupling_levitated(nomode, x0, omega_c, omega_m), std::domain_error);
}

TEST_CASE("drive from gravitational signal") {
  const SensorConfig cfg = table1_system();
  GravitySignal sig;
  sig.g0 = 9.81;
  sig.a = 1.0;
  sig.epsilon = 0.1;
  sig.omega_g = cfg.omega_m;
  sig.phi_g = 0.7;
  const DriveSpec d = d1_from_signal(sig, cfg);
  // oracle: g0 / (2 x0 omega_m^2) with the frozen x0 above
  CHECK(d.d1 == doctest::Approx(1356269.9098056413).epsilon(1e-12));
  CHECK(d.omega_d1 == doctest::Approx(1.0));
  CHECK(d.phi_d1 == doctest::Approx(0.7));
  CHECK(d.a == doctest::Approx(1.0));
  CHECK(d.epsilon == doctest::Approx(0.1));

  GravitySignal off = sig;
  off.g0 = 0.0;
  CHECK(d1_from_signal(off, cfg).d1 == 0.0);

  // linearity in g0
  GravitySignal twice = sig;
  twice.g0 *= 2.0;
  CHECK(d1_from_signal(twice, cfg).d1 == doctest::Approx(2.0 * d.d1).epsilon(1e-14));
}

TEST_CASE("thermal parameter and weight") {
  const double omega_m = kTwoPi * 100.0;
  CHECK(thermal_parameter(0.0, omega_m) == 0.0);
  CHECK(thermal_weight(0.0) == doctest::Approx(1.0));
  CHECK(thermal_weight(kInfiniteTemperature) == 0.0);
  CHECK(thermal_parameter(kInfiniteTemperature, omega_m) == kInfiniteTemperature);

  // T chosen so hbar omega_m / (2 kB T) = 1: r_T = artanh(1/e)
  const double T = kHBar * omega_m / (2.0 * kBoltzmann);
  CHECK(thermal_parameter(T, omega_m) ==
        doctest::Approx(0.3859684164526524).epsilon(1e-12));

  // monotonic: r_T increasing in T, sech(2 r_T) decreasing
  double prev_r = -1.0, prev_w = 2.0;
  for (double temp : {1e-9, 1e-7, 1e-5, 1e-3, 0.1, 10.0}) {
    const double r = thermal_parameter(temp, omega_m);
    CHECK(r > prev_r);
    const double w = thermal_weight(r);
    CHECK(w < prev_w);
    prev_r = r;
    prev_w = w;
  }
  CHECK_THROWS_AS(thermal_parameter(-0.1, omega_m), std::domain_error);
}

TEST_CASE("squeezing from decibels") {
  CHECK(squeeze_from_db(10.0) == doctest::Approx(1.151292546497023).epsilon(1e-14));
  CHECK(squeeze_from_db(0.0) == 0.0);
  CHECK(squeeze_from_db(20.0 / std::log(10.0)) == doctest::Approx(1.0).epsilon(1e-14));
  // r = 1.73 corresponds to roughly 15 dB, not 10 dB
  CHECK(squeeze_from_db(15.026) == doctest::Approx(1.73).epsilon(1e-3));
}
