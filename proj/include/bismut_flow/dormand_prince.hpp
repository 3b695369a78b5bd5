// Copyright 2026 The bismut-flow Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file dormand_prince.hpp
 * @brief Adaptive Dormand-Prince 5(4) integrator for small fixed-size systems.
 *
 * Error control: max norm of the embedded error, component-wise scaled by
 * abs_tol + rel_tol * max(|y_n|, |y_{n+1}|), with a PI step-size controller.
 * A caller-supplied predicate rejects any stage or step that leaves the
 * admissible region; the step is then halved. By default steps are shortened
 * to end exactly on requested sample times; with land_on_samples off, samples
 * come from the fourth-order continuous extension of Dormand-Prince.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>

namespace bismut_flow::ode {

template <std::size_t N>
using State = std::array<double, N>;

struct StepControl {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  std::size_t max_steps = 10'000'000;
  double initial_step = 0.0;  ///< 0 selects a step from the initial derivative
  double safety = 0.9;
  double min_factor = 0.2;  ///< smallest step shrink per rejection
  double max_factor = 10.0;
  double beta = 0.04;  ///< PI stabilisation exponent
  /// Shorten steps to end on sample times; otherwise samples are interpolated.
  bool land_on_samples = true;
};

enum class Status { Completed, StepUnderflow, MaxStepsExceeded, InvalidInitialState };

struct Statistics {
  std::size_t accepted = 0;
  std::size_t rejected = 0;        ///< error-test failures
  std::size_t guard_rejected = 0;  ///< rejections by the admissibility predicate
  std::size_t rhs_evaluations = 0;
};

template <std::size_t N>
struct Outcome {
  Status status = Status::Completed;
  double t = 0.0;     ///< last accepted time
  State<N> y{};       ///< last accepted state
  double last_step = 0.0;
  Statistics stats{};
};

namespace detail {

// Dormand & Prince (1980) coefficients.
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                        a75 = -2187.0 / 6784, a76 = 11.0 / 84;
// b (5th order) equals row 7; e = b - b_hat.
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

template <std::size_t N>
bool finite(const State<N>& y) {
  return std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
}

// Continuous extension coefficients (Hairer's DOPRI5 dense output).
inline constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                        d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                        d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

/// Fourth-order interpolant on one accepted step [t0, t0 + h].
template <std::size_t N>
struct DenseStep {
  std::array<State<N>, 5> r{};
  double t0 = 0.0;
  double h = 0.0;

  State<N> operator()(double t) const {
    const double th = (t - t0) / h;
    const double th1 = 1.0 - th;
    State<N> out{};
    for (std::size_t k = 0; k < N; ++k) {
      out[k] = r[0][k] + th * (r[1][k] + th1 * (r[2][k] + th * (r[3][k] + th1 * r[4][k])));
    }
    return out;
  }
};

}  // namespace detail

/**
 * @brief Integrates y' = rhs(t, y) from t0 to t_end.
 *
 * @param rhs        callable State<N>(double, const State<N>&)
 * @param admissible callable bool(const State<N>&); rhs is only ever called on
 *                   admissible states
 * @param samples    increasing times in (t0, t_end]; observer(t, y) is called
 *                   once for each, in order
 * @param observer   callable void(double, const State<N>&)
 * @param on_step    callable void(double, const State<N>&) after each accepted step
 */
template <std::size_t N, class Rhs, class Admissible, class Observer, class OnStep>
Outcome<N> integrate(Rhs&& rhs, Admissible&& admissible, double t0, const State<N>& y0,
                     double t_end, std::span<const double> samples, const StepControl& ctl,
                     Observer&& observer, OnStep&& on_step) {
  using namespace detail;
  Outcome<N> out;
  out.t = t0;
  out.y = y0;
  if (!finite(y0) || !admissible(y0)) {
    out.status = Status::InvalidInitialState;
    return out;
  }

  const auto scale = [&](double a, double b) {
    return ctl.abs_tol + ctl.rel_tol * std::max(std::abs(a), std::abs(b));
  };

  double t = t0;
  State<N> y = y0;
  State<N> f = rhs(t, y);
  ++out.stats.rhs_evaluations;

  const double span_len = t_end - t0;
  double h = ctl.initial_step;
  if (h <= 0.0) {
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t k = 0; k < N; ++k) {
      const double sk = scale(y[k], y[k]);
      d0 += (y[k] / sk) * (y[k] / sk);
      d1 += (f[k] / sk) * (f[k] / sk);
    }
    d0 = std::sqrt(d0 / N);
    d1 = std::sqrt(d1 / N);
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  }
  h = std::min(h, span_len);

  std::size_t next_sample = 0;
  while (next_sample < samples.size() && samples[next_sample] <= t0) ++next_sample;

  double err_prev = 1e-4;
  bool last_rejected = false;
  std::size_t steps = 0;

  State<N> k2, k3, k4, k5, k6, k7, ys, ynew;
  while (t < t_end) {
    if (steps++ >= ctl.max_steps) {
      out.status = Status::MaxStepsExceeded;
      break;
    }
    if (h < 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
      out.status = Status::StepUnderflow;
      break;
    }
    bool landing = false;
    double target = t_end;
    if (ctl.land_on_samples && next_sample < samples.size() && samples[next_sample] < t_end) {
      target = samples[next_sample];
    }
    const double h_free = h;
    if (t + 1.01 * h >= target) {
      h = target - t;
      landing = true;
    }

    // Stages; any inadmissible stage point halves the step.
    bool guard = false;
    const auto stage = [&](State<N>& k, double c, auto&& combine) {
      if (guard) return;
      for (std::size_t i = 0; i < N; ++i) ys[i] = combine(i);
      if (!finite(ys) || !admissible(ys)) {
        guard = true;
        return;
      }
      ++out.stats.rhs_evaluations;
      k = rhs(t + c * h, ys);
    };
    stage(k2, c2, [&](std::size_t i) { return y[i] + h * a21 * f[i]; });
    stage(k3, c3, [&](std::size_t i) { return y[i] + h * (a31 * f[i] + a32 * k2[i]); });
    stage(k4, c4, [&](std::size_t i) { return y[i] + h * (a41 * f[i] + a42 * k2[i] + a43 * k3[i]); });
    stage(k5, c5, [&](std::size_t i) {
      return y[i] + h * (a51 * f[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    });
    stage(k6, 1.0, [&](std::size_t i) {
      return y[i] + h * (a61 * f[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    });
    if (!guard) {
      for (std::size_t i = 0; i < N; ++i) {
        ynew[i] = y[i] + h * (a71 * f[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
      }
      guard = !finite(ynew) || !admissible(ynew);
    }
    if (guard) {
      ++out.stats.guard_rejected;
      h *= 0.5;
      last_rejected = true;
      continue;
    }
    k7 = rhs(t + h, ynew);
    ++out.stats.rhs_evaluations;

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double ei =
          h * (e1 * f[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double r = ei / scale(y[i], ynew[i]);
      err = std::max(err, std::abs(r));
    }

    const double expo = 0.2 - ctl.beta * 0.75;
    if (err <= 1.0) {
      const double tnew = landing ? target : t + h;
      DenseStep<N> dense;
      bool dense_ready = false;
      while (next_sample < samples.size() && samples[next_sample] <= tnew) {
        const double ts = samples[next_sample];
        if (ts == tnew) {
          observer(ts, ynew);
        } else {
          if (!dense_ready) {
            dense.t0 = t;
            dense.h = tnew - t;
            for (std::size_t i = 0; i < N; ++i) {
              const double dy = ynew[i] - y[i];
              const double bspl = dense.h * f[i] - dy;
              dense.r[0][i] = y[i];
              dense.r[1][i] = dy;
              dense.r[2][i] = bspl;
              dense.r[3][i] = dy - dense.h * k7[i] - bspl;
              dense.r[4][i] = dense.h * (d1 * f[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                                         d6 * k6[i] + d7 * k7[i]);
            }
            dense_ready = true;
          }
          observer(ts, dense(ts));
        }
        ++next_sample;
      }
      t = tnew;
      y = ynew;
      f = k7;
      ++out.stats.accepted;
      out.last_step = h;
      on_step(t, y);

      double fac = std::pow(std::max(err, 1e-16), expo) / std::pow(err_prev, ctl.beta);
      fac = std::clamp(fac / ctl.safety, 1.0 / ctl.max_factor, 1.0 / ctl.min_factor);
      double hnew = h / fac;
      if (landing) hnew = std::max(hnew, h_free);
      if (last_rejected) hnew = std::min(hnew, h);
      err_prev = std::max(err, 1e-4);
      last_rejected = false;
      h = hnew;
    } else {
      ++out.stats.rejected;
      const double fac = std::pow(err, expo) / ctl.safety;
      h /= std::min(1.0 / ctl.min_factor, fac);
      last_rejected = true;
    }
  }

  out.t = t;
  out.y = y;
  return out;
}

}  // namespace bismut_flow::ode
