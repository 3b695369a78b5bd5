// Copyright 2026 The bismut-flow Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file flow.hpp
 * @brief Pluriclosed flow d omega/dt = -(rho^b)^{(1,1)} for left-invariant
 *        metrics, as an ODE in (x, y, z).
 *
 * Matching coefficients of omega = i(x zeta^{1 1bar} + y zeta^{2 2bar} + ...)
 * gives i x' = -rho_{1 1bar}, i y' = -rho_{2 2bar}, i z' = -rho_{1 2bar}.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bismut_flow/curvature.hpp"
#include "bismut_flow/dormand_prince.hpp"
#include "bismut_flow/geometry_catalog.hpp"

namespace bismut_flow {

struct FlowRates {
  double dx = 0.0;
  double dy = 0.0;
  Complex dz{};
};

/// Raised when the generic right-hand side produces a non-real dx or dy.
class ConventionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Hand-derived ODE system per geometry.
inline FlowRates rhs_closed_form(const GeometrySpec& spec, const MetricCoefficients& g) {
  require_admissible(g);
  const double x = g.x;
  const double y = g.y;
  const Complex z = g.z;
  const Complex zb = std::conj(z);
  const double z2 = std::norm(z);
  const double d = g.det();
  const Complex i = kI;

  switch (spec.id) {
    case GeometryId::Torus:
      return {};
    case GeometryId::Hyperelliptic:
      return {0.0, 0.0, -x * z / d};
    case GeometryId::Hopf: {
      const double al = spec.params.alpha;
      return {0.0, 2.0 * (x * ((al * al + 1.0) * x - y) + 2.0 * z2) / d,
              (al * i * x * z - z * (x + y)) / d};
    }
    case GeometryId::ProperlyElliptic: {
      const double al = spec.params.alpha;
      return {2.0 * (1.0 + ((1.0 + al * al) * y * y - z2) / d), 0.0,
              (-i * al * y * z + z * (y - x)) / d};
    }
    case GeometryId::KodairaNil:
      return {2.0 * y * y / d, 0.0, {}};
    case GeometryId::KodairaNilSemidirect:
      return {2.0 * y * y / d, 0.0, -(x + i * y) * z / d};
    case GeometryId::InoueSolvable: {
      const double a = spec.params.a;
      const double b = spec.params.b;
      return {0.0, 12.0 * a * a * (1.0 + z2 / d),
              -(3.0 * a * a + b * b + 2.0 * a * b * i) * x * z / d};
    }
    case GeometryId::Sol1: {
      const double re2 = std::real((z + zb) * (z + zb));
      return {(4.0 * x * y - re2) / d, 0.0, y * (zb - z) / d};
    }
    case GeometryId::Sol1Prime: {
      const double s = 2.0 * z.real();
      return {(4.0 * x * y - y * s - s * s + 2.0 * y * y) / d, 0.0, (y * (zb - z) - y * y) / d};
    }
  }
  return {};
}

/// Relative tolerance on the imaginary part of dx, dy in rhs_generic().
inline constexpr double kRealityTolerance = 1e-11;

/// Flow from the generic Bismut-Ricci form.
inline FlowRates rhs_generic(const GeometrySpec& spec, const MetricCoefficients& g) {
  const InvariantTwoForm rho = one_one_part(bismut_ricci(spec, g));
  const Complex dx = kI * rho[TwoFormSlot::Z11b];
  const Complex dy = kI * rho[TwoFormSlot::Z22b];
  const Complex dz = kI * rho[TwoFormSlot::Z12b];
  const double scale = 1.0 + rho.max_abs();
  if (std::abs(dx.imag()) > kRealityTolerance * scale ||
      std::abs(dy.imag()) > kRealityTolerance * scale) {
    throw ConventionError("rhs_generic: non-real diagonal rate for " + std::string(spec.name()));
  }
  return {dx.real(), dy.real(), dz};
}

// ---------------------------------------------------------------------------
// Trajectories
// ---------------------------------------------------------------------------

struct FlowState {
  double t = 0.0;
  MetricCoefficients g{};
};

enum class RhsKind { ClosedForm, Generic };

struct IntegratorOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double t_end = 1.0;
  std::size_t max_steps = 10'000'000;
  /// Requested output times in (0, t_end]. Empty selects 200 log-spaced times.
  std::vector<double> sample_times{};
  RhsKind rhs = RhsKind::ClosedForm;
};

struct TrajectoryStats {
  std::size_t steps_accepted = 0;
  std::size_t steps_rejected = 0;
  std::size_t guard_rejections = 0;
  std::size_t rhs_evaluations = 0;
  double min_det = std::numeric_limits<double>::infinity();
};

struct Trajectory {
  GeometrySpec geometry{};
  /// Starts with the initial state at t = 0; strictly increasing times.
  std::vector<FlowState> samples{};
  TrajectoryStats stats{};
  double rel_tol = 0.0;
  double abs_tol = 0.0;

  const FlowState& initial() const { return samples.front(); }
  const FlowState& last() const { return samples.back(); }
};

enum class IntegrationFailure { StepUnderflow, MaxStepsExceeded };

inline const char* to_string(IntegrationFailure f) {
  return f == IntegrationFailure::StepUnderflow ? "step-size underflow" : "max_steps exceeded";
}

/// Integration stopped before t_end; carries everything computed so far.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(IntegrationFailure reason, Trajectory partial, FlowState last_good)
      : std::runtime_error(std::string("integrate: ") + to_string(reason) + " at t=" +
                           std::to_string(last_good.t)),
        reason_(reason),
        partial_(std::move(partial)),
        last_good_(last_good) {}

  IntegrationFailure reason() const { return reason_; }
  const Trajectory& partial() const { return partial_; }
  const FlowState& last_good() const { return last_good_; }

 private:
  IntegrationFailure reason_;
  Trajectory partial_;
  FlowState last_good_;
};

/// @p count log-spaced times from @p lo to @p hi inclusive.
inline std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi >= lo) || count == 0) {
    throw std::invalid_argument("log_spaced: need 0 < lo <= hi and count > 0");
  }
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = hi;
    return out;
  }
  const double llo = std::log(lo);
  const double step = (std::log(hi) - llo) / static_cast<double>(count - 1);
  for (std::size_t k = 0; k < count; ++k) out[k] = std::exp(llo + step * static_cast<double>(k));
  out.front() = lo;
  out.back() = hi;
  return out;
}

namespace detail {

using FlowVector = ode::State<4>;

inline FlowVector pack(const MetricCoefficients& g) { return {g.x, g.y, g.z.real(), g.z.imag()}; }
inline MetricCoefficients unpack(const FlowVector& v) { return {v[0], v[1], Complex{v[2], v[3]}}; }

inline std::vector<double> output_times(const IntegratorOptions& opts) {
  std::vector<double> times = opts.sample_times;
  if (times.empty()) times = log_spaced(opts.t_end * 1e-6, opts.t_end, 200);
  for (double t : times) {
    if (!std::isfinite(t) || t <= 0.0) {
      throw std::invalid_argument("integrate: sample times must be positive and finite");
    }
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  times.erase(std::remove_if(times.begin(), times.end(), [&](double t) { return t > opts.t_end; }),
              times.end());
  if (times.empty() || times.back() < opts.t_end) times.push_back(opts.t_end);
  return times;
}

}  // namespace detail

/**
 * @brief Integrates the flow from @p g0 at t = 0 to opts.t_end.
 * @throws InadmissibleMetric if D <= 1e-14 x y initially
 * @throws std::invalid_argument for bad options
 * @throws IntegrationError on step underflow or max_steps
 */
inline Trajectory integrate(const GeometrySpec& spec, const MetricCoefficients& g0,
                            const IntegratorOptions& opts) {
  require_admissible(g0);
  if (g0.det() <= 1e-14 * g0.x * g0.y) {
    throw InadmissibleMetric("integrate: initial metric is numerically degenerate");
  }
  if (!(opts.rel_tol > 0.0) || !(opts.abs_tol > 0.0)) {
    throw std::invalid_argument("integrate: tolerances must be positive");
  }
  if (!(opts.t_end > 0.0) || !std::isfinite(opts.t_end)) {
    throw std::invalid_argument("integrate: t_end must be positive and finite");
  }
  const std::vector<double> times = detail::output_times(opts);

  Trajectory traj;
  traj.geometry = spec;
  traj.rel_tol = opts.rel_tol;
  traj.abs_tol = opts.abs_tol;
  traj.samples.reserve(times.size() + 1);
  traj.samples.push_back({0.0, g0});
  traj.stats.min_det = g0.det();

  const bool generic = opts.rhs == RhsKind::Generic;
  auto rhs = [&](double, const detail::FlowVector& v) -> detail::FlowVector {
    const MetricCoefficients g = detail::unpack(v);
    const FlowRates r = generic ? rhs_generic(spec, g) : rhs_closed_form(spec, g);
    return {r.dx, r.dy, r.dz.real(), r.dz.imag()};
  };
  auto admissible = [](const detail::FlowVector& v) { return detail::unpack(v).admissible(); };
  auto observer = [&](double t, const detail::FlowVector& v) {
    traj.samples.push_back({t, detail::unpack(v)});
  };
  auto on_step = [&](double, const detail::FlowVector& v) {
    traj.stats.min_det = std::min(traj.stats.min_det, detail::unpack(v).det());
  };

  ode::StepControl ctl;
  ctl.rel_tol = opts.rel_tol;
  ctl.abs_tol = opts.abs_tol;
  ctl.max_steps = opts.max_steps;
  const auto outcome = ode::integrate<4>(rhs, admissible, 0.0, detail::pack(g0), opts.t_end,
                                         times, ctl, observer, on_step);

  traj.stats.steps_accepted = outcome.stats.accepted;
  traj.stats.steps_rejected = outcome.stats.rejected;
  traj.stats.guard_rejections = outcome.stats.guard_rejected;
  traj.stats.rhs_evaluations = outcome.stats.rhs_evaluations;

  switch (outcome.status) {
    case ode::Status::Completed:
      return traj;
    case ode::Status::StepUnderflow:
      throw IntegrationError(IntegrationFailure::StepUnderflow, std::move(traj),
                             {outcome.t, detail::unpack(outcome.y)});
    case ode::Status::MaxStepsExceeded:
      throw IntegrationError(IntegrationFailure::MaxStepsExceeded, std::move(traj),
                             {outcome.t, detail::unpack(outcome.y)});
    case ode::Status::InvalidInitialState:
      break;
  }
  throw InadmissibleMetric("integrate: invalid initial state");
}

/// t_end = 1e4 with 200 log-spaced samples in [1e-2, 1e4].
inline Trajectory solve_default(const GeometrySpec& spec, const MetricCoefficients& g0) {
  IntegratorOptions opts;
  opts.t_end = 1e4;
  opts.sample_times = log_spaced(1e-2, 1e4, 200);
  return integrate(spec, g0, opts);
}

}  // namespace bismut_flow
