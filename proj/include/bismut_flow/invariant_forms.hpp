// Copyright 2026 The bismut-flow Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file invariant_forms.hpp
 * @brief Exact algebra of left-invariant complexified tensors on a real
 *        4-dimensional Lie algebra with an integrable complex structure.
 *
 * The complexified algebra is spanned by {Z1, Z2, conj Z1, conj Z2}; the
 * dual coframe is {zeta^1, zeta^2, conj zeta^1, conj zeta^2}. Two-forms are
 * stored on the ordered basis
 *
 *     zeta^{12}, zeta^{1 1bar}, zeta^{1 2bar}, zeta^{2 1bar}, zeta^{2 2bar},
 *     zeta^{1bar 2bar}
 *
 * i.e. every ordered pair (a, b) with a < b in the index order
 * H1 < H2 < A1 < A2. A basis 2-form evaluates to 1 on its own ordered pair
 * of vectors, so F(e_a, e_b) is exactly the stored coefficient.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bismut_flow {

using Complex = std::complex<double>;

inline constexpr Complex kI{0.0, 1.0};

/// Index into the complexified frame: H = holomorphic, A = antiholomorphic.
enum class BasisIndex : std::uint8_t { H1 = 0, H2 = 1, A1 = 2, A2 = 3 };

inline constexpr std::array<BasisIndex, 4> kAllIndices{BasisIndex::H1, BasisIndex::H2,
                                                        BasisIndex::A1, BasisIndex::A2};

constexpr std::size_t to_pos(BasisIndex a) { return static_cast<std::size_t>(a); }

constexpr BasisIndex conjugate_index(BasisIndex a) {
  switch (a) {
    case BasisIndex::H1: return BasisIndex::A1;
    case BasisIndex::H2: return BasisIndex::A2;
    case BasisIndex::A1: return BasisIndex::H1;
    case BasisIndex::A2: return BasisIndex::H2;
  }
  return a;
}

constexpr bool is_holomorphic(BasisIndex a) {
  return a == BasisIndex::H1 || a == BasisIndex::H2;
}

/// Components of a complexified vector on {Z1, Z2, conj Z1, conj Z2}.
using FrameVector = std::array<Complex, 4>;

inline FrameVector conjugate_vector(const FrameVector& v) {
  // conj(sum v_k e_k) = sum conj(v_k) e_{conj k}
  FrameVector out{};
  for (BasisIndex k : kAllIndices) {
    out[to_pos(conjugate_index(k))] = std::conj(v[to_pos(k)]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Validation reports
// ---------------------------------------------------------------------------

enum class ViolationKind { Antisymmetry, Reality, Jacobi, Integrability, Coframe };

inline const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::Antisymmetry: return "antisymmetry";
    case ViolationKind::Reality: return "reality";
    case ViolationKind::Jacobi: return "jacobi";
    case ViolationKind::Integrability: return "integrability";
    case ViolationKind::Coframe: return "coframe";
  }
  return "unknown";
}

struct Violation {
  ViolationKind kind;
  double residual;     ///< largest absolute deviation found for this invariant
  std::string detail;  ///< first offending index tuple, human readable
};

/// Empty means every checked invariant holds.
using ValidationReport = std::vector<Violation>;

inline bool has_violation(const ValidationReport& r, ViolationKind k) {
  return std::any_of(r.begin(), r.end(), [k](const Violation& v) { return v.kind == k; });
}

/// Absolute tolerance used for all exact-algebra checks.
inline constexpr double kAlgebraTolerance = 1e-14;

// ---------------------------------------------------------------------------
// Structure constants
// ---------------------------------------------------------------------------

/**
 * @brief Complexified Lie brackets [e_a, e_b] = sum_k c(a,b)_k e_k.
 *
 * Stores all 16 ordered pairs independently so that corrupted tables can be
 * represented and diagnosed by check_structure_constants().
 */
class StructureConstants {
 public:
  StructureConstants() = default;

  const FrameVector& bracket(BasisIndex a, BasisIndex b) const {
    return table_[to_pos(a)][to_pos(b)];
  }

  Complex component(BasisIndex a, BasisIndex b, BasisIndex k) const {
    return table_[to_pos(a)][to_pos(b)][to_pos(k)];
  }

  /// Sets [a,b] = v and [b,a] = -v.
  StructureConstants& set_bracket(BasisIndex a, BasisIndex b, const FrameVector& v) {
    table_[to_pos(a)][to_pos(b)] = v;
    FrameVector neg{};
    for (std::size_t k = 0; k < 4; ++k) neg[k] = -v[k];
    table_[to_pos(b)][to_pos(a)] = neg;
    return *this;
  }

  /// Sets [a,b] = v together with the bracket of the conjugate pair implied by reality.
  StructureConstants& set_real_bracket(BasisIndex a, BasisIndex b, const FrameVector& v) {
    set_bracket(a, b, v);
    const BasisIndex ca = conjugate_index(a);
    const BasisIndex cb = conjugate_index(b);
    if (!((ca == a && cb == b) || (ca == b && cb == a))) {
      set_bracket(ca, cb, conjugate_vector(v));
    }
    return *this;
  }

  /// Overwrites the single ordered entry (a,b) without touching (b,a).
  StructureConstants& set_raw(BasisIndex a, BasisIndex b, const FrameVector& v) {
    table_[to_pos(a)][to_pos(b)] = v;
    return *this;
  }

  /// [u, v] for arbitrary frame vectors, by bilinearity.
  FrameVector bracket(const FrameVector& u, const FrameVector& v) const {
    FrameVector out{};
    for (BasisIndex a : kAllIndices) {
      if (u[to_pos(a)] == Complex{}) continue;
      for (BasisIndex b : kAllIndices) {
        const Complex w = u[to_pos(a)] * v[to_pos(b)];
        if (w == Complex{}) continue;
        const auto& ab = bracket(a, b);
        for (std::size_t k = 0; k < 4; ++k) out[k] += w * ab[k];
      }
    }
    return out;
  }

 private:
  std::array<std::array<FrameVector, 4>, 4> table_{};
};

inline FrameVector unit_vector(BasisIndex a) {
  FrameVector v{};
  v[to_pos(a)] = 1.0;
  return v;
}

namespace detail {

inline std::string index_name(BasisIndex a) {
  switch (a) {
    case BasisIndex::H1: return "Z1";
    case BasisIndex::H2: return "Z2";
    case BasisIndex::A1: return "conj(Z1)";
    case BasisIndex::A2: return "conj(Z2)";
  }
  return "?";
}

inline void record(ValidationReport& report, ViolationKind kind, double residual,
                   const std::string& where) {
  for (auto& v : report) {
    if (v.kind == kind) {
      v.residual = std::max(v.residual, residual);
      return;
    }
  }
  report.push_back({kind, residual, where});
}

}  // namespace detail

/**
 * Checks antisymmetry, reality, the Jacobi identity and integrability of the
 * holomorphic subalgebra, each to @p tol absolute.
 */
inline ValidationReport check_structure_constants(const StructureConstants& c,
                                                  double tol = kAlgebraTolerance) {
  using detail::index_name;
  ValidationReport report;

  for (BasisIndex a : kAllIndices) {
    for (BasisIndex b : kAllIndices) {
      const auto& ab = c.bracket(a, b);
      const auto& ba = c.bracket(b, a);
      const auto cab = c.bracket(conjugate_index(a), conjugate_index(b));
      const auto expected_conj = conjugate_vector(ab);
      for (std::size_t k = 0; k < 4; ++k) {
        const double anti = std::abs(ab[k] + ba[k]);
        if (anti > tol) {
          detail::record(report, ViolationKind::Antisymmetry, anti,
                         "[" + index_name(a) + "," + index_name(b) + "]");
        }
        const double real = std::abs(cab[k] - expected_conj[k]);
        if (real > tol) {
          detail::record(report, ViolationKind::Reality, real,
                         "[" + index_name(a) + "," + index_name(b) + "]");
        }
      }
      if (is_holomorphic(a) && is_holomorphic(b)) {
        for (BasisIndex k : {BasisIndex::A1, BasisIndex::A2}) {
          const double leak = std::abs(ab[to_pos(k)]);
          if (leak > tol) {
            detail::record(report, ViolationKind::Integrability, leak,
                           "[" + index_name(a) + "," + index_name(b) + "]");
          }
        }
      }
    }
  }

  for (BasisIndex a : kAllIndices) {
    for (BasisIndex b : kAllIndices) {
      for (BasisIndex d : kAllIndices) {
        const auto ea = unit_vector(a);
        const auto eb = unit_vector(b);
        const auto ed = unit_vector(d);
        const auto t1 = c.bracket(c.bracket(ea, eb), ed);
        const auto t2 = c.bracket(c.bracket(eb, ed), ea);
        const auto t3 = c.bracket(c.bracket(ed, ea), eb);
        for (std::size_t k = 0; k < 4; ++k) {
          const double r = std::abs(t1[k] + t2[k] + t3[k]);
          if (r > tol) {
            detail::record(report, ViolationKind::Jacobi, r,
                           index_name(a) + "," + index_name(b) + "," + index_name(d));
          }
        }
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// One-forms and two-forms
// ---------------------------------------------------------------------------

/// Real invariant 1-form eta1 zeta^1 + eta2 zeta^2 + conjugates.
struct InvariantOneForm {
  Complex eta1{};
  Complex eta2{};

  FrameVector components() const { return {eta1, eta2, std::conj(eta1), std::conj(eta2)}; }
};

/// Slots of the ordered 2-form basis.
enum class TwoFormSlot : std::uint8_t {
  Z12 = 0,    ///< zeta^{12}
  Z11b = 1,   ///< zeta^{1 1bar}
  Z12b = 2,   ///< zeta^{1 2bar}
  Z21b = 3,   ///< zeta^{2 1bar}
  Z22b = 4,   ///< zeta^{2 2bar}
  Z1b2b = 5,  ///< zeta^{1bar 2bar}
};

inline constexpr std::array<TwoFormSlot, 6> kAllSlots{TwoFormSlot::Z12,  TwoFormSlot::Z11b,
                                                       TwoFormSlot::Z12b, TwoFormSlot::Z21b,
                                                       TwoFormSlot::Z22b, TwoFormSlot::Z1b2b};

/// Ordered index pair (a < b) of a slot.
constexpr std::pair<BasisIndex, BasisIndex> slot_pair(TwoFormSlot s) {
  switch (s) {
    case TwoFormSlot::Z12: return {BasisIndex::H1, BasisIndex::H2};
    case TwoFormSlot::Z11b: return {BasisIndex::H1, BasisIndex::A1};
    case TwoFormSlot::Z12b: return {BasisIndex::H1, BasisIndex::A2};
    case TwoFormSlot::Z21b: return {BasisIndex::H2, BasisIndex::A1};
    case TwoFormSlot::Z22b: return {BasisIndex::H2, BasisIndex::A2};
    case TwoFormSlot::Z1b2b: return {BasisIndex::A1, BasisIndex::A2};
  }
  return {BasisIndex::H1, BasisIndex::H2};
}

struct SlotAndSign {
  TwoFormSlot slot;
  int sign;  ///< zeta^{ab} = sign * basis(slot)
};

/// Locates zeta^{ab} in the ordered basis. Requires a != b.
constexpr SlotAndSign slot_of(BasisIndex a, BasisIndex b) {
  const bool swapped = to_pos(a) > to_pos(b);
  const BasisIndex lo = swapped ? b : a;
  const BasisIndex hi = swapped ? a : b;
  for (TwoFormSlot s : kAllSlots) {
    const auto [p, q] = slot_pair(s);
    if (p == lo && q == hi) return {s, swapped ? -1 : 1};
  }
  throw std::invalid_argument("slot_of: zeta^{aa} vanishes identically");
}

/**
 * @brief Left-invariant complex 2-form on the ordered basis documented above.
 */
class InvariantTwoForm {
 public:
  InvariantTwoForm() = default;
  explicit InvariantTwoForm(const std::array<Complex, 6>& c) : c_(c) {}

  Complex operator[](TwoFormSlot s) const { return c_[static_cast<std::size_t>(s)]; }
  Complex& operator[](TwoFormSlot s) { return c_[static_cast<std::size_t>(s)]; }

  const std::array<Complex, 6>& coefficients() const { return c_; }

  /// Adds coef * zeta^{ab}; a and b may be given in either order.
  InvariantTwoForm& add(BasisIndex a, BasisIndex b, Complex coef) {
    const auto [slot, sign] = slot_of(a, b);
    (*this)[slot] += static_cast<double>(sign) * coef;
    return *this;
  }

  /// F(e_a, e_b).
  Complex evaluate(BasisIndex a, BasisIndex b) const {
    if (a == b) return {};
    const auto [slot, sign] = slot_of(a, b);
    return static_cast<double>(sign) * (*this)[slot];
  }

  InvariantTwoForm& operator+=(const InvariantTwoForm& o) {
    for (std::size_t i = 0; i < 6; ++i) c_[i] += o.c_[i];
    return *this;
  }
  InvariantTwoForm& operator-=(const InvariantTwoForm& o) {
    for (std::size_t i = 0; i < 6; ++i) c_[i] -= o.c_[i];
    return *this;
  }
  InvariantTwoForm& operator*=(Complex s) {
    for (auto& v : c_) v *= s;
    return *this;
  }
  friend InvariantTwoForm operator+(InvariantTwoForm a, const InvariantTwoForm& b) { return a += b; }
  friend InvariantTwoForm operator-(InvariantTwoForm a, const InvariantTwoForm& b) { return a -= b; }
  friend InvariantTwoForm operator*(Complex s, InvariantTwoForm a) { return a *= s; }
  friend InvariantTwoForm operator-(InvariantTwoForm a) { return a *= -1.0; }

  double max_abs() const {
    double m = 0.0;
    for (const auto& v : c_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  std::array<Complex, 6> c_{};
};

/// The literal complex conjugate of a form: coef * zeta^{ab} -> conj(coef) * zeta^{conj a conj b}.
inline InvariantTwoForm conjugate(const InvariantTwoForm& f) {
  InvariantTwoForm out;
  for (TwoFormSlot s : kAllSlots) {
    const auto [a, b] = slot_pair(s);
    out.add(conjugate_index(a), conjugate_index(b), std::conj(f[s]));
  }
  return out;
}

/// f + conj(f): the meaning of "... + conjugates" in printed curvature formulas.
inline InvariantTwoForm plus_conjugate(const InvariantTwoForm& f) { return f + conjugate(f); }

/// Largest deviation from the coefficient identities of a real 2-form.
inline double reality_residual(const InvariantTwoForm& f) {
  return (f - conjugate(f)).max_abs();
}

inline bool is_real(const InvariantTwoForm& f, double tol) { return reality_residual(f) <= tol; }

/// Drops the (2,0) and (0,2) parts.
inline InvariantTwoForm one_one_part(const InvariantTwoForm& f) {
  InvariantTwoForm out = f;
  out[TwoFormSlot::Z12] = {};
  out[TwoFormSlot::Z1b2b] = {};
  return out;
}

/// d theta for an invariant 1-form with arbitrary coefficients on the full coframe.
/// Uses d theta(A, B) = -theta([A, B]); no validation of @p c.
inline InvariantTwoForm exterior_derivative_unchecked(const StructureConstants& c,
                                                      const FrameVector& theta) {
  InvariantTwoForm out;
  for (TwoFormSlot s : kAllSlots) {
    const auto [a, b] = slot_pair(s);
    const auto& ab = c.bracket(a, b);
    Complex v{};
    for (std::size_t k = 0; k < 4; ++k) v -= theta[k] * ab[k];
    out[s] = v;
  }
  return out;
}

/// d(zeta^k) for a coframe element.
inline InvariantTwoForm coframe_differential(const StructureConstants& c, BasisIndex k) {
  return exterior_derivative_unchecked(c, unit_vector(k));
}

/**
 * @brief Exterior derivative of a real invariant 1-form.
 * @throws std::invalid_argument if @p c fails check_structure_constants().
 */
inline InvariantTwoForm d_one_form(const StructureConstants& c, const InvariantOneForm& eta) {
  const auto report = check_structure_constants(c);
  if (!report.empty()) {
    throw std::invalid_argument(std::string("d_one_form: invalid structure constants (") +
                                to_string(report.front().kind) + " at " + report.front().detail +
                                ")");
  }
  return exterior_derivative_unchecked(c, eta.components());
}

}  // namespace bismut_flow
