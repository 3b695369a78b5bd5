// Copyright 2026 The bismut-flow Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file validation.hpp
 * @brief Self-check suite: catalog integrity, generic-versus-closed-form
 *        equivalence of curvature and flow, and conserved quantities.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "bismut_flow/curvature.hpp"
#include "bismut_flow/flow.hpp"
#include "bismut_flow/geometry_catalog.hpp"

namespace bismut_flow {

/// x, y log-uniform in [0.1, 10]; |z|^2 <= margin * x y with uniform phase.
template <class Rng>
MetricCoefficients random_admissible_metric(Rng& rng, double margin = 0.9) {
  std::uniform_real_distribution<double> logu(std::log(0.1), std::log(10.0));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double x = std::exp(logu(rng));
  const double y = std::exp(logu(rng));
  const double r = std::sqrt(margin * x * y * unit(rng));
  const double phase = 2.0 * std::numbers::pi * unit(rng);
  return {x, y, std::polar(r, phase)};
}

/// Every (id, params) combination of the test grid.
inline std::vector<GeometrySpec> parameter_grid() {
  std::vector<GeometrySpec> out;
  for (GeometryId id : kAllGeometries) {
    switch (id) {
      case GeometryId::Hopf:
      case GeometryId::ProperlyElliptic:
        for (double al : {-2.0, 0.0, 1.0, 3.0}) out.push_back(build_geometry(id, {.alpha = al}));
        break;
      case GeometryId::InoueSolvable:
        for (auto [a, b] : {std::pair{1.0, 0.0}, std::pair{0.5, 1.0}, std::pair{2.0, -1.0}}) {
          out.push_back(build_geometry(id, {.a = a, .b = b}));
        }
        break;
      case GeometryId::KodairaNilSemidirect:
        for (int e : {1, -1}) out.push_back(build_geometry(id, {.epsilon = e}));
        break;
      default:
        out.push_back(build_geometry(id));
    }
  }
  return out;
}

inline std::string describe(const GeometrySpec& spec) {
  std::string s(spec.name());
  switch (spec.id) {
    case GeometryId::Hopf:
    case GeometryId::ProperlyElliptic:
      s += "(alpha=" + std::to_string(spec.params.alpha) + ")";
      break;
    case GeometryId::InoueSolvable:
      s += "(a=" + std::to_string(spec.params.a) + ",b=" + std::to_string(spec.params.b) + ")";
      break;
    case GeometryId::KodairaNilSemidirect:
      s += "(epsilon=" + std::to_string(spec.params.epsilon) + ")";
      break;
    default:
      break;
  }
  return s;
}

/// max_k |a_k - b_k| / max(1, max_k |b_k|).
inline double relative_difference(const InvariantTwoForm& a, const InvariantTwoForm& b) {
  return (a - b).max_abs() / std::max(1.0, b.max_abs());
}

inline double relative_difference(const FlowRates& a, const FlowRates& b) {
  const double scale = std::max({1.0, std::abs(b.dx), std::abs(b.dy), std::abs(b.dz)});
  return std::max({std::abs(a.dx - b.dx), std::abs(a.dy - b.dy), std::abs(a.dz - b.dz)}) / scale;
}

struct CheckResult {
  std::string name;
  bool passed = false;
  double residual = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct ValidationOptions {
  std::size_t samples_per_geometry = 1000;
  std::uint64_t seed = 20260101;
  double equivalence_tolerance = 1e-11;
  double conservation_tolerance = 1e-9;
};

namespace detail {

inline CheckResult make_check(std::string name, double residual, double tol, std::string detail = {}) {
  return {std::move(name), residual <= tol, residual, tol, std::move(detail)};
}

/// Coordinates a geometry's flow leaves fixed (x, y, Re z, Im z flags).
struct Conserved {
  bool x = false, y = false, re_z = false, im_z = false;
};

inline Conserved conserved_coordinates(GeometryId id) {
  switch (id) {
    case GeometryId::Torus: return {true, true, true, true};
    case GeometryId::Hyperelliptic: return {true, true, false, false};
    case GeometryId::Hopf: return {true, false, false, false};
    case GeometryId::ProperlyElliptic: return {false, true, false, false};
    case GeometryId::KodairaNil: return {false, true, true, true};
    case GeometryId::KodairaNilSemidirect: return {false, true, false, false};
    case GeometryId::InoueSolvable: return {true, false, false, false};
    case GeometryId::Sol1: return {false, true, true, false};
    case GeometryId::Sol1Prime: return {false, true, false, false};
  }
  return {};
}

}  // namespace detail

/// Runs the full property suite. Every entry of the result must pass.
inline std::vector<CheckResult> run_validation(const ValidationOptions& opts = {}) {
  std::vector<CheckResult> out;
  std::mt19937_64 rng(opts.seed);
  const auto grid = parameter_grid();

  for (const auto& spec : grid) {
    const auto report = validate_geometry(spec);
    double worst = 0.0;
    std::string what;
    for (const auto& v : report) {
      worst = std::max(worst, v.residual);
      what += std::string(to_string(v.kind)) + " ";
    }
    out.push_back(detail::make_check("catalog_integrity/" + describe(spec),
                                     report.empty() ? 0.0 : worst, kAlgebraTolerance, what));
  }

  for (const auto& spec : grid) {
    double ricci = 0.0, rates = 0.0, reality = 0.0;
    for (std::size_t k = 0; k < opts.samples_per_geometry; ++k) {
      const auto g = random_admissible_metric(rng);
      const auto generic = bismut_ricci(spec, g);
      ricci = std::max(ricci, relative_difference(generic, closed_form_ricci(spec, g)));
      reality = std::max(reality, reality_residual(generic) / std::max(1.0, generic.max_abs()));
      rates = std::max(rates, relative_difference(rhs_generic(spec, g), rhs_closed_form(spec, g)));
    }
    out.push_back(detail::make_check("ricci_equivalence/" + describe(spec), ricci,
                                     opts.equivalence_tolerance));
    out.push_back(detail::make_check("rhs_equivalence/" + describe(spec), rates,
                                     opts.equivalence_tolerance));
    out.push_back(detail::make_check("ricci_reality/" + describe(spec), reality,
                                     opts.equivalence_tolerance));
  }

  {
    const auto plus = build_geometry(GeometryId::KodairaNilSemidirect, {.epsilon = 1});
    const auto minus = build_geometry(GeometryId::KodairaNilSemidirect, {.epsilon = -1});
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      const auto g = random_admissible_metric(rng);
      worst = std::max(worst, relative_difference(rhs_generic(plus, g), rhs_generic(minus, g)));
    }
    out.push_back(detail::make_check("semidirect_epsilon_independence", worst,
                                     opts.equivalence_tolerance));
  }

  {
    const auto sol1 = build_geometry(GeometryId::Sol1);
    double worst = 0.0;
    for (std::size_t k = 0; k < opts.samples_per_geometry; ++k) {
      worst = std::max(worst, std::abs(rhs_generic(sol1, random_admissible_metric(rng)).dz.real()));
    }
    out.push_back(detail::make_check("sol1_re_z_rate_zero", worst, 1e-14));
  }

  for (const auto& spec : grid) {
    const MetricCoefficients g0{1.3, 0.8, Complex{0.3, -0.4}};
    IntegratorOptions io;
    io.t_end = 20.0;
    const auto traj = integrate(spec, g0, io);
    const auto cons = detail::conserved_coordinates(spec.id);
    double worst = 0.0;
    const auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); };
    for (const auto& st : traj.samples) {
      if (cons.x) worst = std::max(worst, rel(st.g.x, g0.x));
      if (cons.y) worst = std::max(worst, rel(st.g.y, g0.y));
      if (cons.re_z) worst = std::max(worst, rel(st.g.z.real(), g0.z.real()));
      if (cons.im_z) worst = std::max(worst, rel(st.g.z.imag(), g0.z.imag()));
    }
    out.push_back(detail::make_check("conserved_coordinates/" + describe(spec), worst,
                                     opts.conservation_tolerance));
  }

  {
    const auto nil = build_geometry(GeometryId::KodairaNil);
    const MetricCoefficients g0{1.0, 1.5, Complex{0.5, 0.7}};
    IntegratorOptions io;
    io.t_end = 1e4;
    const auto traj = integrate(nil, g0, io);
    const double y0 = g0.y, z0 = std::norm(g0.z), x0 = g0.x;
    double worst = 0.0;
    for (const auto& st : traj.samples) {
      const double x = st.g.x;
      const double r = 0.5 * x * x * y0 - x * z0 - 2.0 * y0 * y0 * st.t - 0.5 * x0 * x0 * y0 + x0 * z0;
      worst = std::max(worst, std::abs(r) / (1.0 + st.t));
    }
    out.push_back(detail::make_check("kodaira_first_integral", worst, 1e-7));
  }
  return out;
}

inline bool all_passed(const std::vector<CheckResult>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

}  // namespace bismut_flow
