// Copyright 2026 The bismut-flow Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include "bismut_flow/geometry_catalog.hpp"
#include "bismut_flow/validation.hpp"

using namespace bismut_flow;
using B = BasisIndex;
using S = TwoFormSlot;

TEST_CASE("torus is abelian with zero coframe differentials", "[catalog]") {
  const auto torus = build_geometry(GeometryId::Torus);
  for (B a : kAllIndices) {
    for (B b : kAllIndices) {
      for (B k : kAllIndices) CHECK(torus.constants.component(a, b, k) == Complex{});
    }
  }
  CHECK(verify_coframe(torus).empty());
  CHECK(torus.coframe[0].max_abs() == 0.0);
  CHECK(torus.coframe[1].max_abs() == 0.0);
}

TEST_CASE("hopf bracket of Z2 with its conjugate", "[catalog]") {
  const auto hopf = build_geometry(GeometryId::Hopf, {.alpha = 1.0});
  const FrameVector& v = hopf.constants.bracket(B::H2, B::A2);
  CHECK(v[0] == Complex{-1.0, 1.0});
  CHECK(v[1] == Complex{});
  CHECK(v[2] == Complex{1.0, 1.0});
  CHECK(v[3] == Complex{});
}

TEST_CASE("sol1-prime bracket of Z1 with its conjugate", "[catalog]") {
  const auto sol = build_geometry(GeometryId::Sol1Prime);
  const FrameVector& v = sol.constants.bracket(B::H1, B::A1);
  CHECK(v[0] == Complex{-1.0});
  CHECK(v[1] == Complex{1.0});
  CHECK(v[2] == Complex{1.0});
  CHECK(v[3] == Complex{-1.0});
}

TEST_CASE("hopf coframe matches a hand evaluation", "[catalog]") {
  for (double alpha : {-2.0, 0.0, 1.0, 3.0}) {
    const auto hopf = build_geometry(GeometryId::Hopf, {.alpha = alpha});
    CHECK(verify_coframe(hopf).empty());
    // d zeta^2 (Z1, Z2) = -zeta^2([Z1, Z2]) = -zeta^2(Z2) = -1.
    CHECK(hopf.coframe[1].evaluate(B::H1, B::H2) == Complex{-1.0});
    CHECK(coframe_differential(hopf.constants, B::H2).evaluate(B::H1, B::H2) == Complex{-1.0});
  }
}

TEST_CASE("a sign-flipped coframe is reported", "[catalog]") {
  auto pe = build_geometry(GeometryId::ProperlyElliptic, {.alpha = 1.0});
  pe.coframe[0] = -pe.coframe[0];
  const auto report = verify_coframe(pe);
  REQUIRE_FALSE(report.empty());
  CHECK(has_violation(report, ViolationKind::Coframe));
  // Independent recomputation: [Z1, Z2] = i Z1 gives d zeta^1(Z1, Z2) = -i.
  CHECK(coframe_differential(pe.constants, B::H1).evaluate(B::H1, B::H2) == Complex{0.0, -1.0});
}

TEST_CASE("every entry of the parameter grid validates exactly", "[catalog][property]") {
  const auto grid = parameter_grid();
  CHECK(grid.size() == 4 + 4 + 3 + 2 + 5);
  for (const auto& spec : grid) {
    INFO(describe(spec));
    CHECK(validate_geometry(spec, 1e-14).empty());
  }
}

TEST_CASE("invalid parameters are rejected", "[catalog]") {
  CHECK_THROWS_AS(build_geometry(GeometryId::InoueSolvable, {.a = 0.0}), InvalidGeometry);
  CHECK_THROWS_AS(build_geometry(GeometryId::KodairaNilSemidirect, {.epsilon = 0}), InvalidGeometry);
  CHECK_THROWS_AS(build_geometry(GeometryId::Hopf, {.alpha = std::nan("")}), InvalidGeometry);
}

TEST_CASE("geometry names round-trip", "[catalog]") {
  for (GeometryId id : kAllGeometries) {
    const auto parsed = parse_geometry_name(geometry_name(id));
    REQUIRE(parsed.has_value());
    CHECK(*parsed == id);
  }
  CHECK_FALSE(parse_geometry_name("klein").has_value());
}

TEST_CASE("inoue lambda", "[catalog]") {
  const GeometryParams p{.a = 2.0, .b = -1.0};
  CHECK(p.inoue_lambda() == Complex{1.0, 2.0});
}
