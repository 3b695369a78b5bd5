// Copyright 2026 The bismut-flow Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <random>

#include "bismut_flow/geometry_catalog.hpp"
#include "bismut_flow/invariant_forms.hpp"

using namespace bismut_flow;
using B = BasisIndex;
using S = TwoFormSlot;
using Catch::Matchers::WithinAbs;

namespace {

Complex random_complex(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return {n(rng), n(rng)};
}

}  // namespace

TEST_CASE("conjugate_index swaps holomorphic and antiholomorphic", "[invariant_forms]") {
  CHECK(conjugate_index(B::H1) == B::A1);
  CHECK(conjugate_index(B::A2) == B::H2);
  CHECK(conjugate_index(conjugate_index(B::H2)) == B::H2);
  for (B a : kAllIndices) {
    CHECK(conjugate_index(conjugate_index(a)) == a);
    CHECK(is_holomorphic(a) != is_holomorphic(conjugate_index(a)));
  }
}

TEST_CASE("abelian structure constants validate", "[invariant_forms]") {
  CHECK(check_structure_constants(StructureConstants{}).empty());
}

TEST_CASE("hopf brackets validate and a corrupted reality partner is reported",
          "[invariant_forms]") {
  const auto hopf = build_geometry(GeometryId::Hopf, {.alpha = 0.0});
  CHECK(check_structure_constants(hopf.constants).empty());

  StructureConstants bad = hopf.constants;
  FrameVector v = bad.bracket(B::A2, B::H2);
  v[0] += 0.1;
  bad.set_bracket(B::A2, B::H2, v);
  const auto report = check_structure_constants(bad);
  REQUIRE_FALSE(report.empty());
  CHECK(has_violation(report, ViolationKind::Reality));
  CHECK_FALSE(has_violation(report, ViolationKind::Antisymmetry));
}

TEST_CASE("broken antisymmetry, integrability and jacobi are each detected", "[invariant_forms]") {
  StructureConstants anti;
  anti.set_raw(B::H1, B::H2, unit_vector(B::H1));
  CHECK(has_violation(check_structure_constants(anti), ViolationKind::Antisymmetry));

  StructureConstants integ;
  integ.set_real_bracket(B::H1, B::H2, unit_vector(B::A1));
  CHECK(has_violation(check_structure_constants(integ), ViolationKind::Integrability));

  // [Z1,Z2] = Z2 with [Z1,conj Z1] = Z1 - conj Z1 is not a Lie algebra: (ad Z1)
  // and (ad conj Z1) fail to commute on Z2.
  StructureConstants jac;
  jac.set_real_bracket(B::H1, B::H2, unit_vector(B::H2));
  FrameVector w{};
  w[0] = 1.0;
  w[2] = -1.0;
  jac.set_bracket(B::H1, B::A1, w);
  CHECK(has_violation(check_structure_constants(jac), ViolationKind::Jacobi));
}

TEST_CASE("two-form slots and evaluation", "[invariant_forms]") {
  InvariantTwoForm f;
  f.add(B::H2, B::H1, 3.0);
  CHECK(f[S::Z12] == Complex{-3.0});
  CHECK(f.evaluate(B::H1, B::H2) == Complex{-3.0});
  CHECK(f.evaluate(B::H2, B::H1) == Complex{3.0});
  CHECK(f.evaluate(B::H1, B::H1) == Complex{});
  CHECK(slot_of(B::A1, B::H2).slot == S::Z21b);
  CHECK(slot_of(B::A1, B::H2).sign == -1);
}

TEST_CASE("d of a one-form on an abelian algebra vanishes", "[invariant_forms]") {
  const InvariantTwoForm d = d_one_form(StructureConstants{}, {Complex{1.0, 2.0}, Complex{-3.0, 0.5}});
  CHECK(d.max_abs() == 0.0);
}

TEST_CASE("d eta on Nil3 x R", "[invariant_forms]") {
  const auto nil = build_geometry(GeometryId::KodairaNil);
  const InvariantOneForm eta{0.0, 1.0};
  const InvariantTwoForm d = d_one_form(nil.constants, eta);

  // Hand evaluation: d eta(Z1, conj Z1) = -eta([Z1, conj Z1]) = -eta(i Z2 + i conj Z2).
  const FrameVector theta = eta.components();
  const Complex oracle = -(kI * theta[1] + kI * theta[3]);
  CHECK_THAT(std::abs(oracle - Complex{0.0, -2.0}), WithinAbs(0.0, 1e-15));
  CHECK_THAT(std::abs(d[S::Z11b] - oracle), WithinAbs(0.0, 1e-15));
  for (S s : {S::Z12, S::Z12b, S::Z21b, S::Z22b, S::Z1b2b}) CHECK(d[s] == Complex{});
}

TEST_CASE("d of the zero one-form on the hyperelliptic algebra vanishes", "[invariant_forms]") {
  const auto hyp = build_geometry(GeometryId::Hyperelliptic);
  CHECK(d_one_form(hyp.constants, {}).max_abs() == 0.0);
}

TEST_CASE("d_one_form rejects invalid structure constants", "[invariant_forms]") {
  StructureConstants bad;
  bad.set_raw(B::H1, B::H2, unit_vector(B::H1));
  CHECK_THROWS_AS(d_one_form(bad, {1.0, 0.0}), std::invalid_argument);
}

TEST_CASE("one_one_part", "[invariant_forms]") {
  InvariantTwoForm pure;
  pure[S::Z12] = {2.0, 1.0};
  CHECK(one_one_part(pure).max_abs() == 0.0);

  InvariantTwoForm mixed;
  mixed[S::Z11b] = {0.0, 1.0};
  mixed[S::Z12b] = {0.3, -0.2};
  mixed[S::Z21b] = {-0.3, -0.2};
  mixed[S::Z22b] = {0.0, -4.0};
  const auto once = one_one_part(mixed);
  CHECK((once - mixed).max_abs() == 0.0);
  CHECK((one_one_part(once) - once).max_abs() == 0.0);
}

TEST_CASE("exterior derivative is complex linear on the full coframe", "[invariant_forms][property]") {
  std::mt19937_64 rng(7);
  for (GeometryId id : kAllGeometries) {
    const auto spec = build_geometry(id);
    for (int trial = 0; trial < 50; ++trial) {
      FrameVector u{}, v{};
      for (auto& c : u) c = random_complex(rng);
      for (auto& c : v) c = random_complex(rng);
      const Complex a = random_complex(rng), b = random_complex(rng);
      FrameVector w{};
      for (std::size_t k = 0; k < 4; ++k) w[k] = a * u[k] + b * v[k];
      const auto lhs = exterior_derivative_unchecked(spec.constants, w);
      const auto rhs = a * exterior_derivative_unchecked(spec.constants, u) +
                       b * exterior_derivative_unchecked(spec.constants, v);
      CHECK((lhs - rhs).max_abs() <= 1e-12 * (1.0 + rhs.max_abs()));
    }
  }
}

TEST_CASE("d of a real one-form is a real two-form", "[invariant_forms][property]") {
  std::mt19937_64 rng(11);
  for (GeometryId id : kAllGeometries) {
    const auto spec = build_geometry(id, {.alpha = 1.5, .a = 0.7, .b = -0.4, .epsilon = -1});
    for (int trial = 0; trial < 100; ++trial) {
      const InvariantOneForm eta{random_complex(rng), random_complex(rng)};
      const auto d = d_one_form(spec.constants, eta);
      CHECK(reality_residual(d) <= 1e-14 * (1.0 + d.max_abs()));
      // Componentwise identities of a real form.
      CHECK(std::abs(d[S::Z1b2b] - std::conj(d[S::Z12])) <= 1e-14);
      CHECK(std::abs(d[S::Z11b].real()) <= 1e-14);
      CHECK(std::abs(d[S::Z22b].real()) <= 1e-14);
      CHECK(std::abs(d[S::Z21b] + std::conj(d[S::Z12b])) <= 1e-14);
    }
  }
}

TEST_CASE("plus_conjugate doubles diagonal imaginary terms", "[invariant_forms]") {
  InvariantTwoForm f;
  f[S::Z11b] = {0.0, -1.0};
  const auto r = plus_conjugate(f);
  CHECK(r[S::Z11b] == Complex{0.0, -2.0});
  CHECK(is_real(r, 0.0));
}
