// Copyright 2026 The bismut-flow Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file curvature.hpp
 * @brief Left-invariant Hermitian metrics and their Bismut-Ricci form.
 *
 * A metric is encoded by x = g(Z1, conj Z1), y = g(Z2, conj Z2) and
 * z = g(Z1, conj Z2); its Kaehler form is
 *
 *     omega = i (x zeta^{1 1bar} + y zeta^{2 2bar} + z zeta^{1 2bar} + conj(z) zeta^{2 1bar}).
 *
 * bismut_ricci() evaluates rho^b = d eta with Vezzoni's formula
 *
 *     eta_i = i c_{ij}^j - i g^{jbar k} c_{k jbar}^{lbar} g_{i lbar},
 *
 * all of j, k, l running over holomorphic indices. closed_form_ricci() holds
 * the per-geometry expressions written out by hand and serves as its oracle.
 */

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "bismut_flow/geometry_catalog.hpp"
#include "bismut_flow/invariant_forms.hpp"

namespace bismut_flow {

class InadmissibleMetric : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct MetricCoefficients {
  double x = 1.0;
  double y = 1.0;
  Complex z{};

  /// D = x y - |z|^2.
  double det() const { return x * y - std::norm(z); }

  bool admissible() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z.real()) &&
           std::isfinite(z.imag()) && x > 0.0 && y > 0.0 && det() > 0.0;
  }

  /// g_{i lbar} as a 2x2 Hermitian matrix.
  std::array<std::array<Complex, 2>, 2> lower() const {
    return {{{Complex{x}, z}, {std::conj(z), Complex{y}}}};
  }

  MetricCoefficients scaled(double s) const { return {s * x, s * y, s * z}; }
};

inline void require_admissible(const MetricCoefficients& g) {
  if (!g.admissible()) {
    throw InadmissibleMetric("inadmissible metric (x=" + std::to_string(g.x) +
                             ", y=" + std::to_string(g.y) + ", z=" + std::to_string(g.z.real()) +
                             (g.z.imag() < 0 ? "" : "+") + std::to_string(g.z.imag()) +
                             "i): need x > 0, y > 0, xy - |z|^2 > 0");
  }
}

/**
 * @brief Inverse metric g^{jbar k}, defined by sum_k g^{jbar k} g_{k lbar} = delta_{jl}.
 *
 * With D = xy - |z|^2 this is g^{1bar 1} = y/D, g^{2bar 2} = x/D,
 * g^{1bar 2} = -z/D, g^{2bar 1} = -conj(z)/D.
 */
struct MetricInverse {
  /// entries[j][k] = g^{jbar k}, j and k zero-based holomorphic indices.
  std::array<std::array<Complex, 2>, 2> entries{};

  Complex operator()(int j, int k) const { return entries[j][k]; }
};

inline MetricInverse metric_inverse(const MetricCoefficients& g) {
  require_admissible(g);
  const double d = g.det();
  MetricInverse inv;
  inv.entries[0][0] = g.y / d;
  inv.entries[1][1] = g.x / d;
  inv.entries[0][1] = -g.z / d;
  inv.entries[1][0] = -std::conj(g.z) / d;
  return inv;
}

/// eta from Vezzoni's formula. The spec must already be validated.
inline InvariantOneForm compute_eta(const GeometrySpec& spec, const MetricCoefficients& g) {
  const MetricInverse inv = metric_inverse(g);
  const auto low = g.lower();
  const auto& c = spec.constants;
  constexpr std::array<BasisIndex, 2> hol{BasisIndex::H1, BasisIndex::H2};

  std::array<Complex, 2> eta{};
  for (int i = 0; i < 2; ++i) {
    Complex trace{};
    for (int j = 0; j < 2; ++j) trace += c.component(hol[i], hol[j], hol[j]);
    Complex contraction{};
    for (int j = 0; j < 2; ++j) {
      const BasisIndex jbar = conjugate_index(hol[j]);
      for (int k = 0; k < 2; ++k) {
        for (int l = 0; l < 2; ++l) {
          const BasisIndex lbar = conjugate_index(hol[l]);
          contraction += inv(j, k) * c.component(hol[k], jbar, lbar) * low[i][l];
        }
      }
    }
    eta[i] = kI * trace - kI * contraction;
  }
  return {eta[0], eta[1]};
}

/// rho^b = d eta.
inline InvariantTwoForm bismut_ricci(const GeometrySpec& spec, const MetricCoefficients& g) {
  return exterior_derivative_unchecked(spec.constants, compute_eta(spec, g).components());
}

/**
 * @brief Hand-derived Bismut-Ricci form per catalog geometry.
 *
 * Each case lists the non-conjugate terms; the conjugates are then added
 * literally, so a term X zeta^{1 1bar} contributes (X - conj X) zeta^{1 1bar}.
 * Sol_1 and Sol_1' are written by component instead.
 */
inline InvariantTwoForm closed_form_ricci(const GeometrySpec& spec, const MetricCoefficients& g) {
  using B = BasisIndex;
  require_admissible(g);
  const double x = g.x;
  const double y = g.y;
  const Complex z = g.z;
  const Complex zb = std::conj(z);
  const double z2 = std::norm(z);
  const double d = g.det();
  const Complex i = kI;

  InvariantTwoForm terms;
  switch (spec.id) {
    case GeometryId::Torus:
      return {};

    case GeometryId::Hyperelliptic: {
      const Complex eta1 = i * z * x / d;
      terms.add(B::H1, B::H2, -eta1).add(B::H1, B::A2, eta1);
      break;
    }

    case GeometryId::Hopf: {
      const double al = spec.params.alpha;
      const Complex eta1 = (al * x * x + i * (x * y - x * x - 2.0 * z2)) / d;
      const Complex mixed = (-al * x * zb + i * zb * (x + y)) / d;
      terms.add(B::H2, B::A2, (1.0 - i * al) * eta1);
      terms.add(B::H1, B::H2, mixed).add(B::H2, B::A1, mixed);
      break;
    }

    case GeometryId::ProperlyElliptic: {
      const double al = spec.params.alpha;
      const Complex mixed = (-al * y * z + i * z * (x - y)) / d;
      terms.add(B::H1, B::H2, mixed).add(B::H1, B::A2, mixed);
      terms.add(B::H1, B::A1, (al - i) * (x * y + y * y - 2.0 * z2 - i * al * y * y) / d);
      break;
    }

    case GeometryId::KodairaNil:
      terms.add(B::H1, B::A1, -i * y * y / d);
      break;

    case GeometryId::KodairaNilSemidirect: {
      const Complex mixed = (-y * z + i * x * z) / d;
      terms.add(B::H1, B::H2, -mixed).add(B::H1, B::A2, mixed);
      terms.add(B::H1, B::A1, (x * y - 2.0 * z2 - i * y * y) / d);
      break;
    }

    case GeometryId::InoueSolvable: {
      const Complex lambda = spec.params.inoue_lambda();
      const Complex lambda_b = std::conj(lambda);
      const double a = spec.params.a;
      const Complex eta1 = (2.0 * a * z * x + i * lambda_b * z * x) / d;
      terms.add(B::H1, B::H2, -lambda * eta1).add(B::H1, B::A2, lambda * eta1);
      terms.add(B::H2, B::A2,
                (2.0 * a * (lambda + lambda_b) * z2 + (-4.0 * a * a * i - 2.0 * a * lambda) * x * y) /
                    d);
      break;
    }

    case GeometryId::Sol1:
    case GeometryId::Sol1Prime: {
      const bool prime = spec.id == GeometryId::Sol1Prime;
      const Complex re2 = (z + zb) * (z + zb);
      InvariantTwoForm rho;
      if (!prime) {
        rho[TwoFormSlot::Z11b] = -i * (4.0 * x * y - re2) / d;
        rho[TwoFormSlot::Z12b] = -i * y * (zb - z) / d;
      } else {
        rho[TwoFormSlot::Z11b] = -i * (4.0 * x * y - y * (z + zb) - re2 + 2.0 * y * y) / d;
        rho[TwoFormSlot::Z12b] = -i * (y * (zb - z) - y * y) / d;
      }
      rho[TwoFormSlot::Z22b] = {};
      rho[TwoFormSlot::Z21b] = -std::conj(rho[TwoFormSlot::Z12b]);
      // (2,0) part: eta_2 times the zeta^{12} coefficient (= 1) of d zeta^2.
      rho[TwoFormSlot::Z12] = rho[TwoFormSlot::Z12b];
      rho[TwoFormSlot::Z1b2b] = std::conj(rho[TwoFormSlot::Z12]);
      return rho;
    }
  }
  return plus_conjugate(terms);
}

}  // namespace bismut_flow
