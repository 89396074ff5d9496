#include <cmath>

#include <doctest.h>

#include "optomech/constants.hpp"
#include "optomech/ode.hpp"

using optomech::integrate_dopri5;
using Vec2 = Eigen::Matrix<double, 2, 1>;
using Vec1 = Eigen::Matrix<double, 1, 1>;

TEST_CASE("harmonic oscillator over many periods") {
  auto rhs = [](double, const Vec2& y) { return Vec2(y[1], -y[0]); };
  const Vec2 y0(1.0, 0.0);
  const double t1 = 40.0 * optomech::kPi;
  const auto sol = integrate_dopri5<Vec2>(rhs, y0, 0.0, t1, 1e-11, 1e-13);
  for (double t : {0.3, 1.7, 10.0, 55.0, t1}) {
    const Vec2 y = sol(t);
    CHECK(y[0] == doctest::Approx(std::cos(t)).epsilon(1e-9));
    CHECK(y[1] == doctest::Approx(-std::sin(t)).epsilon(1e-9));
  }
}

TEST_CASE("dense output matches interior points of exponential decay") {
  auto rhs = [](double, const Vec1& y) { return Vec1(-0.7 * y[0]); };
  Vec1 y0;
  y0 << 2.0;
  const auto sol = integrate_dopri5<Vec1>(rhs, y0, 0.0, 12.0, 1e-11, 1e-13);
  for (int i = 0; i <= 200; ++i) {
    const double t = 12.0 * i / 200.0;
    CHECK(sol(t)[0] == doctest::Approx(2.0 * std::exp(-0.7 * t)).epsilon(1e-9));
  }
}

TEST_CASE("tolerance failure raises NumericError with an achieved estimate") {
  // y' = 1/(1 - t): unbounded as t -> 1, so the step controller underflows
  auto rhs = [](double t, const Vec1& y) {
    (void)y;
    return Vec1(1.0 / (1.0 - t));
  };
  Vec1 y0;
  y0 << 0.0;
  CHECK_THROWS_AS(integrate_dopri5<Vec1>(rhs, y0, 0.0, 2.0, 1e-10, 1e-12),
                  optomech::NumericError);
}

TEST_CASE("degenerate interval returns the initial state") {
  auto rhs = [](double, const Vec1& y) { return Vec1(y[0]); };
  Vec1 y0;
  y0 << 3.0;
  const auto sol = integrate_dopri5<Vec1>(rhs, y0, 0.0, 0.0);
  CHECK(sol(0.0)[0] == doctest::Approx(3.0));
}
