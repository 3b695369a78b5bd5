// Copyright 2026 The bismut-flow Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file geometry_catalog.hpp
 * @brief The four-dimensional Lie groups carrying a left-invariant
 *        non-Kaehler complex structure, with brackets on a T^{1,0} frame and
 *        the matching coframe differentials.
 *
 * Brackets and coframes are entered independently; verify_coframe() checks
 * one against the other through d zeta^k(A, B) = -zeta^k([A, B]).
 */

#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "bismut_flow/invariant_forms.hpp"

namespace bismut_flow {

enum class GeometryId {
  Torus,                 ///< R^4, complex tori
  Hyperelliptic,         ///< E(2)~ x R
  Hopf,                  ///< R x SU(2)
  ProperlyElliptic,      ///< SL2(R)~ x R
  KodairaNil,            ///< Nil^3 x R, primary Kodaira
  KodairaNilSemidirect,  ///< Nil^3 x| R, secondary Kodaira
  InoueSolvable,         ///< solvable family, Inoue S_A
  Sol1,                  ///< Sol_1^4, first complex structure
  Sol1Prime,             ///< Sol_1^4, second complex structure
};

inline constexpr std::array<GeometryId, 9> kAllGeometries{
    GeometryId::Torus,         GeometryId::Hyperelliptic, GeometryId::Hopf,
    GeometryId::ProperlyElliptic, GeometryId::KodairaNil, GeometryId::KodairaNilSemidirect,
    GeometryId::InoueSolvable, GeometryId::Sol1,          GeometryId::Sol1Prime};

/// CLI-facing name.
inline std::string_view geometry_name(GeometryId id) {
  switch (id) {
    case GeometryId::Torus: return "torus";
    case GeometryId::Hyperelliptic: return "hyperelliptic";
    case GeometryId::Hopf: return "hopf";
    case GeometryId::ProperlyElliptic: return "properly-elliptic";
    case GeometryId::KodairaNil: return "kodaira-nil";
    case GeometryId::KodairaNilSemidirect: return "kodaira-semidirect";
    case GeometryId::InoueSolvable: return "inoue";
    case GeometryId::Sol1: return "sol1";
    case GeometryId::Sol1Prime: return "sol1-prime";
  }
  return "unknown";
}

inline std::optional<GeometryId> parse_geometry_name(std::string_view name) {
  for (GeometryId id : kAllGeometries) {
    if (geometry_name(id) == name) return id;
  }
  return std::nullopt;
}

/// Real parameters of the catalog families. Fields irrelevant to a geometry are ignored.
struct GeometryParams {
  double alpha = 0.0;  ///< Hopf, ProperlyElliptic
  double a = 1.0;      ///< InoueSolvable, lambda = -b + i a, a != 0
  double b = 0.0;      ///< InoueSolvable
  int epsilon = 1;     ///< KodairaNilSemidirect, +1 or -1

  Complex inoue_lambda() const { return {-b, a}; }
};

class InvalidGeometry : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct GeometrySpec {
  GeometryId id = GeometryId::Torus;
  GeometryParams params{};
  StructureConstants constants{};
  /// d zeta^1 and d zeta^2.
  std::array<InvariantTwoForm, 2> coframe{};

  std::string_view name() const { return geometry_name(id); }
};

/// Empty iff the stored coframe equals d zeta^k computed from the brackets (to @p tol).
inline ValidationReport verify_coframe(const GeometrySpec& spec, double tol = kAlgebraTolerance) {
  ValidationReport report;
  for (BasisIndex k : {BasisIndex::H1, BasisIndex::H2}) {
    const auto from_brackets = coframe_differential(spec.constants, k);
    const double r = (from_brackets - spec.coframe[to_pos(k)]).max_abs();
    if (r > tol) {
      detail::record(report, ViolationKind::Coframe, r, "d" + detail::index_name(k));
    }
  }
  return report;
}

/// Structure-constant and coframe checks combined.
inline ValidationReport validate_geometry(const GeometrySpec& spec, double tol = kAlgebraTolerance) {
  auto report = check_structure_constants(spec.constants, tol);
  for (auto& v : verify_coframe(spec, tol)) report.push_back(std::move(v));
  return report;
}

namespace detail {

inline void check_params(GeometryId id, const GeometryParams& p) {
  const auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(p.alpha) || !finite(p.a) || !finite(p.b)) {
    throw InvalidGeometry("geometry parameters must be finite");
  }
  if (id == GeometryId::InoueSolvable && p.a == 0.0) {
    throw InvalidGeometry("inoue: parameter a must be nonzero");
  }
  if (id == GeometryId::KodairaNilSemidirect && p.epsilon != 1 && p.epsilon != -1) {
    throw InvalidGeometry("kodaira-semidirect: epsilon must be +1 or -1");
  }
}

}  // namespace detail

/**
 * @brief Builds and validates a catalog entry.
 * @throws InvalidGeometry on bad parameters, or if the hard-coded tables fail validation.
 */
inline GeometrySpec build_geometry(GeometryId id, const GeometryParams& params = {}) {
  using B = BasisIndex;
  detail::check_params(id, params);

  GeometrySpec spec;
  spec.id = id;
  spec.params = params;
  auto& c = spec.constants;
  auto& d1 = spec.coframe[0];
  auto& d2 = spec.coframe[1];
  const Complex i = kI;

  switch (id) {
    case GeometryId::Torus:
      break;

    case GeometryId::Hyperelliptic:
      c.set_real_bracket(B::H1, B::H2, {1.0, 0.0, 0.0, 0.0});
      c.set_real_bracket(B::H1, B::A2, {-1.0, 0.0, 0.0, 0.0});
      d1.add(B::H1, B::H2, -1.0).add(B::H1, B::A2, 1.0);
      break;

    case GeometryId::Hopf: {
      const double al = params.alpha;
      c.set_real_bracket(B::H1, B::H2, {0.0, 1.0, 0.0, 0.0});
      c.set_real_bracket(B::H1, B::A2, {0.0, 0.0, 0.0, -1.0});
      c.set_real_bracket(B::H2, B::A2, {i * al - 1.0, 0.0, i * al + 1.0, 0.0});
      d1.add(B::H2, B::A2, 1.0 - i * al);
      d2.add(B::H1, B::H2, -1.0).add(B::H2, B::A1, -1.0);
      break;
    }

    case GeometryId::ProperlyElliptic: {
      const double al = params.alpha;
      c.set_real_bracket(B::H1, B::H2, {i, 0.0, 0.0, 0.0});
      c.set_real_bracket(B::H1, B::A2, {i, 0.0, 0.0, 0.0});
      c.set_real_bracket(B::H1, B::A1, {0.0, i - al, 0.0, i + al});
      d1.add(B::H1, B::H2, -i).add(B::H1, B::A2, -i);
      d2.add(B::H1, B::A1, al - i);
      break;
    }

    case GeometryId::KodairaNil:
      c.set_real_bracket(B::H1, B::A1, {0.0, i, 0.0, i});
      d2.add(B::H1, B::A1, -i);
      break;

    case GeometryId::KodairaNilSemidirect: {
      const double e = params.epsilon;
      c.set_real_bracket(B::H1, B::H2, {e, 0.0, 0.0, 0.0});
      c.set_real_bracket(B::H1, B::A2, {-e, 0.0, 0.0, 0.0});
      c.set_real_bracket(B::H1, B::A1, {0.0, -e * i, 0.0, -e * i});
      d1.add(B::H1, B::H2, -e).add(B::H1, B::A2, e);
      d2.add(B::H1, B::A1, e * i);
      break;
    }

    case GeometryId::InoueSolvable: {
      const Complex lambda = params.inoue_lambda();
      const double a = params.a;
      c.set_real_bracket(B::H1, B::H2, {lambda, 0.0, 0.0, 0.0});
      c.set_real_bracket(B::H1, B::A2, {-lambda, 0.0, 0.0, 0.0});
      c.set_real_bracket(B::H2, B::A2, {0.0, 2.0 * a * i, 0.0, 2.0 * a * i});
      d1.add(B::H1, B::H2, -lambda).add(B::H1, B::A2, lambda);
      d2.add(B::H2, B::A2, -2.0 * a * i);
      break;
    }

    case GeometryId::Sol1:
      c.set_real_bracket(B::H1, B::H2, {0.0, -1.0, 0.0, 0.0});
      c.set_real_bracket(B::H1, B::A2, {0.0, -1.0, 0.0, 0.0});
      c.set_real_bracket(B::H1, B::A1, {-1.0, 0.0, 1.0, 0.0});
      d1.add(B::H1, B::A1, 1.0);
      d2.add(B::H1, B::H2, 1.0).add(B::H1, B::A2, 1.0);
      break;

    case GeometryId::Sol1Prime:
      c.set_real_bracket(B::H1, B::H2, {0.0, -1.0, 0.0, 0.0});
      c.set_real_bracket(B::H1, B::A2, {0.0, -1.0, 0.0, 0.0});
      c.set_real_bracket(B::H1, B::A1, {-1.0, 1.0, 1.0, -1.0});
      d1.add(B::H1, B::A1, 1.0);
      d2.add(B::H1, B::A1, -1.0).add(B::H1, B::A2, 1.0).add(B::H1, B::H2, 1.0);
      break;
  }

  const auto report = validate_geometry(spec);
  if (!report.empty()) {
    throw InvalidGeometry(std::string(geometry_name(id)) + ": catalog entry fails " +
                          to_string(report.front().kind) + " check at " + report.front().detail);
  }
  return spec;
}

}  // namespace bismut_flow
