#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Core>

#include "optomech/errors.hpp"

namespace optomech {

// Embedded Dormand-Prince 5(4) with the standard quartic continuous
// extension. State is any fixed- or dynamic-size Eigen column vector.
// The dense solution stays valid and const after construction, so a solve
// over [0, tau_max] can be evaluated from many threads at once.
namespace dopri5 {

inline constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0,
                        c5 = 8.0 / 9.0;
inline constexpr double a21 = 1.0 / 5.0;
inline constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
inline constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
inline constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                        a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
inline constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                        a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                        a65 = -5103.0 / 18656.0;
inline constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0,
                        a74 = 125.0 / 192.0, a75 = -2187.0 / 6784.0,
                        a76 = 11.0 / 84.0;
// y5 - y4 residual weights
inline constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0,
                        e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                        e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// dense-output weights
inline constexpr double d1 = -12715105075.0 / 11282082432.0;
inline constexpr double d3 = 87487479700.0 / 32700410799.0;
inline constexpr double d4 = -10690763975.0 / 1880347072.0;
inline constexpr double d5 = 701980252875.0 / 199316789632.0;
inline constexpr double d6 = -1453857185.0 / 822651844.0;
inline constexpr double d7 = 69997945.0 / 29380423.0;

}  // namespace dopri5

template <typename State>
struct DenseSegment {
  double t0, h;
  State r1, r2, r3, r4, r5;

  State eval(double t) const {
    const double theta = (t - t0) / h;
    const double om = 1.0 - theta;
    return r1 + theta * (r2 + om * (r3 + theta * (r4 + om * r5)));
  }
};

template <typename State>
class DenseSolution {
 public:
  DenseSolution() = default;
  DenseSolution(double t_begin, double t_end,
                std::vector<DenseSegment<State>> segments)
      : t_begin_(t_begin), t_end_(t_end), segments_(std::move(segments)) {}

  double t_begin() const { return t_begin_; }
  double t_end() const { return t_end_; }

  State operator()(double t) const {
    const double tc = std::clamp(t, t_begin_, t_end_);
    std::size_t lo = 0, hi = segments_.size() - 1;
    while (lo < hi) {
      const std::size_t mid = (lo + hi + 1) / 2;
      if (segments_[mid].t0 <= tc) {
        lo = mid;
      } else {
        hi = mid - 1;
      }
    }
    return segments_[lo].eval(tc);
  }

 private:
  double t_begin_ = 0, t_end_ = 0;
  std::vector<DenseSegment<State>> segments_;
};

// Integrates y' = rhs(t, y) from t0 to t1 (t1 > t0) and returns the dense
// solution. Throws NumericError when the controller cannot reach the
// requested tolerance, reporting the error estimate it did achieve.
template <typename State, typename Rhs>
DenseSolution<State> integrate_dopri5(Rhs&& rhs, const State& y0, double t0,
                                      double t1, double rtol = 1e-10,
                                      double atol = 1e-12,
                                      std::size_t max_steps = 2000000) {
  using namespace dopri5;
  std::vector<DenseSegment<State>> segments;
  if (t1 <= t0) {
    DenseSegment<State> seg{t0, 1.0, y0, State::Zero(y0.size()),
                            State::Zero(y0.size()), State::Zero(y0.size()),
                            State::Zero(y0.size())};
    segments.push_back(seg);
    return DenseSolution<State>(t0, t0, std::move(segments));
  }

  double t = t0;
  State y = y0;
  State k1 = rhs(t, y);
  double h = std::min(0.1, t1 - t0);

  std::size_t steps = 0;
  while (t < t1) {
    if (++steps > max_steps) {
      throw NumericError("dopri5: step budget exhausted", rtol);
    }
    h = std::min(h, t1 - t);

    const State k2 = rhs(t + c2 * h, (y + h * a21 * k1).eval());
    const State k3 = rhs(t + c3 * h, (y + h * (a31 * k1 + a32 * k2)).eval());
    const State k4 =
        rhs(t + c4 * h, (y + h * (a41 * k1 + a42 * k2 + a43 * k3)).eval());
    const State k5 = rhs(
        t + c5 * h,
        (y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)).eval());
    const State k6 =
        rhs(t + h, (y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 +
                             a65 * k5))
                       .eval());
    const State ynew =
        y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    const State k7 = rhs(t + h, ynew);

    const State resid =
        h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double err2 = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double sc =
          atol + rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      const double r = resid[i] / sc;
      err2 += r * r;
    }
    const double err = std::sqrt(err2 / static_cast<double>(y.size()));

    if (err <= 1.0) {
      DenseSegment<State> seg;
      seg.t0 = t;
      seg.h = h;
      seg.r1 = y;
      seg.r2 = ynew - y;
      seg.r3 = h * k1 - seg.r2;
      seg.r4 = seg.r2 - h * k7 - seg.r3;
      seg.r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
      segments.push_back(std::move(seg));
      t += h;
      y = ynew;
      k1 = k7;  // FSAL
      h *= std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    } else {
      h *= std::max(0.9 * std::pow(err, -0.2), 0.2);
    }
    if (h < 1e-14 * std::max(1.0, std::abs(t))) {
      throw NumericError("dopri5: step size underflow", err * rtol);
    }
  }
  return DenseSolution<State>(t0, t1, std::move(segments));
}

}  // namespace optomech
