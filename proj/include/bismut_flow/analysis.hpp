// Copyright 2026 The bismut-flow Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file analysis.hpp
 * @brief Long-time behaviour of flow trajectories: growth-class fits,
 *        rescaled Gromov-Hausdorff limit constants, blowdown limits and the
 *        expanding-soliton identity.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "bismut_flow/flow.hpp"

namespace bismut_flow {

class AnalysisError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Real frame
// ---------------------------------------------------------------------------

/**
 * @brief A left-invariant real 2-form on the coframe sigma^i dual to
 *        X1 = Re Z1, X2 = -Im Z1, X3 = Re Z2, X4 = -Im Z2.
 */
struct RealFrameForm {
  double s12 = 0.0;
  double s34 = 0.0;
  double s13 = 0.0;
  double s24 = 0.0;
  double s14 = 0.0;
  double s23 = 0.0;

  std::array<double, 6> values() const { return {s12, s34, s13, s24, s14, s23}; }
};

/// omega = 1/2 (x s12 + y s34 - Im z (s13 + s24) + Re z (s14 - s23)).
inline RealFrameForm to_real_frame(const MetricCoefficients& g) {
  const double re = g.z.real();
  const double im = g.z.imag();
  return {0.5 * g.x, 0.5 * g.y, -0.5 * im, -0.5 * im, 0.5 * re, -0.5 * re};
}

/// Rewrites a form given on the Sol_1' real coframe in the Sol_1 coframe
/// (the coframes agree except sigma'^4 = sigma^4 - sigma^2).
inline RealFrameForm sol1_prime_to_sol1_frame(const RealFrameForm& f) {
  RealFrameForm out = f;
  out.s12 = f.s12 - f.s14;  // s14' = s14 - s12
  out.s23 = f.s23 + f.s34;  // s34' = s34 + s23
  return out;
}

// ---------------------------------------------------------------------------
// Growth-class fits
// ---------------------------------------------------------------------------

enum class GrowthClass { Constant, Linear, Sqrt, LogBounded, ExpDecay };

inline const char* to_string(GrowthClass g) {
  switch (g) {
    case GrowthClass::Constant: return "constant";
    case GrowthClass::Linear: return "linear";
    case GrowthClass::Sqrt: return "sqrt";
    case GrowthClass::LogBounded: return "log_bounded";
    case GrowthClass::ExpDecay: return "exp_decay";
  }
  return "unknown";
}

inline constexpr std::array<GrowthClass, 5> kAllGrowthClasses{
    GrowthClass::Constant, GrowthClass::Linear, GrowthClass::Sqrt, GrowthClass::LogBounded,
    GrowthClass::ExpDecay};

/**
 * @brief One model fit c(t) ~ value * phi(t) + intercept.
 *
 * phi is 1, t, sqrt(t), log(t) for the first four classes; for ExpDecay the
 * model is c ~ intercept * exp(-value * t), so value is the decay rate.
 * residual is RMS(c - fit) / RMS(c).
 */
struct GrowthFit {
  GrowthClass kind = GrowthClass::Constant;
  double value = 0.0;
  double intercept = 0.0;
  double residual = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  std::size_t samples = 0;
};

namespace detail {

inline double basis(GrowthClass k, double t) {
  switch (k) {
    case GrowthClass::Linear: return t;
    case GrowthClass::Sqrt: return std::sqrt(t);
    case GrowthClass::LogBounded: return std::log(t);
    default: return 0.0;
  }
}

/// Least squares c ~ A u + B.
inline std::pair<double, double> line_fit(std::span<const double> u, std::span<const double> c) {
  const double n = static_cast<double>(u.size());
  double su = 0, sc = 0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    su += u[k];
    sc += c[k];
  }
  const double mu = su / n;
  const double mc = sc / n;
  double suu = 0, suc = 0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    suu += (u[k] - mu) * (u[k] - mu);
    suc += (u[k] - mu) * (c[k] - mc);
  }
  const double a = suu > 0 ? suc / suu : 0.0;
  return {a, mc - a * mu};
}

inline double rms(std::span<const double> v) {
  double s = 0;
  for (double e : v) s += e * e;
  return std::sqrt(s / static_cast<double>(v.size()));
}

}  // namespace detail

/// Fits a single growth class over all given points (no window selection).
inline GrowthFit fit_growth(GrowthClass kind, std::span<const double> t, std::span<const double> c) {
  if (t.size() != c.size() || t.size() < 3) {
    throw AnalysisError("fit_growth: need at least 3 paired samples");
  }
  GrowthFit fit;
  fit.kind = kind;
  fit.t_lo = t.front();
  fit.t_hi = t.back();
  fit.samples = t.size();
  std::vector<double> model(t.size());

  switch (kind) {
    case GrowthClass::Constant: {
      double s = 0;
      for (double v : c) s += v;
      fit.value = s / static_cast<double>(c.size());
      std::fill(model.begin(), model.end(), fit.value);
      break;
    }
    case GrowthClass::Linear:
    case GrowthClass::Sqrt:
    case GrowthClass::LogBounded: {
      std::vector<double> u(t.size());
      for (std::size_t k = 0; k < t.size(); ++k) u[k] = detail::basis(kind, t[k]);
      std::tie(fit.value, fit.intercept) = detail::line_fit(u, c);
      for (std::size_t k = 0; k < t.size(); ++k) model[k] = fit.value * u[k] + fit.intercept;
      break;
    }
    case GrowthClass::ExpDecay: {
      const bool positive = std::all_of(c.begin(), c.end(), [](double v) { return v > 0.0; });
      if (!positive) {
        fit.residual = std::numeric_limits<double>::infinity();
        return fit;
      }
      std::vector<double> logc(c.size());
      for (std::size_t k = 0; k < c.size(); ++k) logc[k] = std::log(c[k]);
      const auto [slope, icpt] = detail::line_fit(t, logc);
      fit.value = -slope;
      fit.intercept = std::exp(icpt);
      for (std::size_t k = 0; k < t.size(); ++k) model[k] = std::exp(icpt + slope * t[k]);
      break;
    }
  }

  const double norm = detail::rms(c);
  std::vector<double> resid(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) resid[k] = c[k] - model[k];
  const double r = detail::rms(resid);
  fit.residual = norm > 0 ? r / norm : r;
  return fit;
}

/// Per-coefficient classification of a trajectory's tail.
struct AsymptoticsReport {
  GrowthFit x;
  GrowthFit y;
  GrowthFit abs_z;
  /// Every candidate fit, in kAllGrowthClasses order, for x, y, |z|.
  std::array<std::array<GrowthFit, 5>, 3> candidates{};
};

struct AsymptoticsOptions {
  /// Window is [t_hi * 10^-decades, t_hi].
  double window_decades = 1.0;
  /// Values below max(min_floor, noise_factor * abs_tol) are integrator noise.
  double noise_factor = 1e4;
  double min_floor = 1e-250;
};

namespace detail {

struct Series {
  std::vector<double> t;
  std::vector<double> c;
};

/// Tail window of a coefficient, ending at the last time it is above the noise floor.
inline Series tail_window(const std::vector<double>& t, const std::vector<double>& c, double floor,
                          double decades) {
  std::size_t hi = t.size();
  while (hi > 0 && !(std::abs(c[hi - 1]) > floor)) --hi;
  Series s;
  if (hi == 0) {
    // Identically below the floor (e.g. exactly zero): keep the full tail.
    hi = t.size();
  }
  const double t_hi = t[hi - 1];
  const double t_lo = t_hi * std::pow(10.0, -decades);
  for (std::size_t k = 0; k < hi; ++k) {
    if (t[k] >= t_lo && t[k] > 0.0) {
      s.t.push_back(t[k]);
      s.c.push_back(c[k]);
    }
  }
  return s;
}

}  // namespace detail

/**
 * @brief Picks the best growth class for one coefficient series.
 *
 * Smallest normalized residual wins; candidates within 1e-12 of the best are
 * resolved in kAllGrowthClasses order, so exact constants stay constant.
 */
inline GrowthFit classify_growth(std::span<const double> t, std::span<const double> c,
                                 std::array<GrowthFit, 5>* all = nullptr) {
  std::array<GrowthFit, 5> fits{};
  for (std::size_t k = 0; k < kAllGrowthClasses.size(); ++k) {
    fits[k] = fit_growth(kAllGrowthClasses[k], t, c);
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& f : fits) best = std::min(best, f.residual);
  GrowthFit chosen = fits.front();
  for (const auto& f : fits) {
    if (f.residual <= best + 1e-12) {
      chosen = f;
      break;
    }
  }
  if (all != nullptr) *all = fits;
  return chosen;
}

/// Classifies x, y and |z| over the last decade of the trajectory.
inline AsymptoticsReport estimate_asymptotics(const Trajectory& traj,
                                              const AsymptoticsOptions& opts = {}) {
  const auto& s = traj.samples;
  if (s.size() < 8) throw AnalysisError("estimate_asymptotics: insufficient samples");
  const double t_first = s.size() > 1 ? s[1].t : s[0].t;
  if (!(s.back().t >= 100.0 * t_first)) {
    throw AnalysisError("estimate_asymptotics: trajectory must span at least two decades");
  }

  std::vector<double> t, x, y, az;
  for (const auto& st : s) {
    t.push_back(st.t);
    x.push_back(st.g.x);
    y.push_back(st.g.y);
    az.push_back(std::abs(st.g.z));
  }
  const double floor = std::max(opts.min_floor, opts.noise_factor * traj.abs_tol);

  AsymptoticsReport report;
  const auto run = [&](const std::vector<double>& c, std::size_t slot) {
    const auto w = detail::tail_window(t, c, floor, opts.window_decades);
    if (w.t.size() < 5) throw AnalysisError("estimate_asymptotics: fit window has < 5 samples");
    return classify_growth(w.t, w.c, &report.candidates[slot]);
  };
  report.x = run(x, 0);
  report.y = run(y, 1);
  report.abs_z = run(az, 2);
  return report;
}

/// Rate fit of log|value| against t on the samples above the trajectory's noise floor.
inline GrowthFit fit_decay_rate(const Trajectory& traj, double (*value)(const FlowState&),
                                double t_min = 0.0, const AsymptoticsOptions& opts = {}) {
  const double floor = std::max(opts.min_floor, opts.noise_factor * traj.abs_tol);
  std::vector<double> t, c;
  for (const auto& st : traj.samples) {
    const double v = std::abs(value(st));
    if (st.t >= t_min && v > floor) {
      t.push_back(st.t);
      c.push_back(v);
    }
  }
  return fit_growth(GrowthClass::ExpDecay, t, c);
}

// ---------------------------------------------------------------------------
// Gromov-Hausdorff limits of g(t)/t
// ---------------------------------------------------------------------------

enum class GhLimitKind { Point, Convergence, Circle, BaseCurve };

inline const char* to_string(GhLimitKind k) {
  switch (k) {
    case GhLimitKind::Point: return "point";
    case GhLimitKind::Convergence: return "convergence";
    case GhLimitKind::Circle: return "circle";
    case GhLimitKind::BaseCurve: return "base-curve";
  }
  return "unknown";
}

/// Inoue surfaces built on Sol_1^4: S+ uses lambda, S- uses lambda^2.
enum class InoueQuotient { SPlus, SMinus };

struct GhOptions {
  /// Positive eigenvalue (!= 1) of the gluing matrix N in SL2(Z); needed for Sol_1 / Sol_1'.
  std::optional<double> lambda_quotient;
  InoueQuotient quotient = InoueQuotient::SPlus;
};

struct GhLimit {
  GhLimitKind kind = GhLimitKind::Point;
  double value = 0.0;   ///< estimate at the final time
  double target = 0.0;  ///< predicted limit
  std::string description;
};

/**
 * @brief Rescaled limit constant at the final sample.
 *
 * Point collapse: max(x, y, |z|)/t -> 0. Hopf: y -> (1+alpha^2) x0.
 * Inoue S_A: circle of length sqrt(y/(2t)) -> sqrt(6)|a|. Sol_1, Sol_1':
 * sqrt(x/(2t)) |log lambda| -> sqrt(2)|log lambda| (S+) or 2 sqrt(2)|log lambda| (S-).
 * Properly elliptic: x/t -> 2, the base-curve coefficient.
 */
inline GhLimit gh_limit(const Trajectory& traj, const GhOptions& opts = {}) {
  if (traj.samples.size() < 2 || !(traj.last().t > 0.0)) {
    throw AnalysisError("gh_limit: trajectory has no positive-time sample");
  }
  const auto& spec = traj.geometry;
  const FlowState& fin = traj.last();
  const double t = fin.t;
  const auto& g = fin.g;
  GhLimit out;

  switch (spec.id) {
    case GeometryId::Torus:
    case GeometryId::Hyperelliptic:
    case GeometryId::KodairaNil:
    case GeometryId::KodairaNilSemidirect:
      out.kind = GhLimitKind::Point;
      out.value = std::max({g.x, g.y, std::abs(g.z)}) / t;
      out.target = 0.0;
      out.description = "diameter proxy max(x,y,|z|)/t";
      break;
    case GeometryId::Hopf: {
      const double al = spec.params.alpha;
      out.kind = GhLimitKind::Convergence;
      out.value = g.y;
      out.target = (1.0 + al * al) * traj.initial().g.x;
      out.description = "y -> (1+alpha^2) x0";
      break;
    }
    case GeometryId::ProperlyElliptic:
      out.kind = GhLimitKind::BaseCurve;
      out.value = g.x / t;
      out.target = 2.0;
      out.description = "x/t, base-curve coefficient";
      break;
    case GeometryId::InoueSolvable:
      out.kind = GhLimitKind::Circle;
      out.value = std::sqrt(g.y / (2.0 * t));
      out.target = std::sqrt(6.0) * std::abs(spec.params.a);
      out.description = "circle length sqrt(y/(2t))";
      break;
    case GeometryId::Sol1:
    case GeometryId::Sol1Prime: {
      if (!opts.lambda_quotient) {
        throw AnalysisError("gh_limit: Sol_1 circle length needs the quotient parameter lambda");
      }
      const double lam = *opts.lambda_quotient;
      if (!(lam > 0.0) || lam == 1.0 || !std::isfinite(lam)) {
        throw AnalysisError("gh_limit: lambda must be positive and different from 1");
      }
      const double factor = opts.quotient == InoueQuotient::SMinus ? 2.0 : 1.0;
      const double log_lam = factor * std::abs(std::log(lam));
      out.kind = GhLimitKind::Circle;
      out.value = std::sqrt(g.x / (2.0 * t)) * log_lam;
      out.target = std::sqrt(2.0) * log_lam;
      out.description = opts.quotient == InoueQuotient::SMinus
                            ? "circle length sqrt(x/(2t)) |log lambda^2|"
                            : "circle length sqrt(x/(2t)) |log lambda|";
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Blowdown limits
// ---------------------------------------------------------------------------

/// A sigma^{ij} coefficient rescales by s^{w_i + w_j - 1}.
struct BlowdownWeights {
  std::array<double, 4> w{};

  double exponent(int i, int j) const { return w[i - 1] + w[j - 1] - 1.0; }
};

/// @throws AnalysisError for Hopf, whose flow converges instead.
inline BlowdownWeights blowdown_weights(GeometryId id) {
  switch (id) {
    case GeometryId::Torus:
    case GeometryId::Hyperelliptic:
      return {{0.5, 0.5, 0.5, 0.5}};
    case GeometryId::ProperlyElliptic:
    case GeometryId::Sol1:
    case GeometryId::Sol1Prime:
      return {{0.0, 0.0, 0.5, 0.5}};
    case GeometryId::KodairaNil:
    case GeometryId::KodairaNilSemidirect:
      return {{0.25, 0.25, 0.5, 0.5}};
    case GeometryId::InoueSolvable:
      return {{0.5, 0.5, 0.0, 0.0}};
    case GeometryId::Hopf:
      break;
  }
  throw AnalysisError("blowdown_weights: Hopf solutions converge; no blowdown");
}

inline RealFrameForm rescale(const RealFrameForm& f, const BlowdownWeights& w, double s) {
  const auto p = [&](int i, int j) { return std::pow(s, w.exponent(i, j)); };
  return {f.s12 * p(1, 2), f.s34 * p(3, 4), f.s13 * p(1, 3),
          f.s24 * p(2, 4), f.s14 * p(1, 4), f.s23 * p(2, 3)};
}

/// The real-frame form of the metric as used for blowdowns (Sol_1' in the Sol_1 coframe).
inline RealFrameForm blowdown_frame(GeometryId id, const MetricCoefficients& g) {
  const RealFrameForm f = to_real_frame(g);
  return id == GeometryId::Sol1Prime ? sol1_prime_to_sol1_frame(f) : f;
}

/// Limiting form omega_inf(t) predicted for each geometry.
inline RealFrameForm blowdown_target(const GeometrySpec& spec, const MetricCoefficients& g0,
                                     double t) {
  const double x0 = g0.x;
  const double y0 = g0.y;
  switch (spec.id) {
    case GeometryId::Torus:
      return to_real_frame(g0);
    case GeometryId::Hyperelliptic:
      return {0.5 * x0, 0.5 * y0};
    case GeometryId::ProperlyElliptic:
      return {0.5 * 2.0 * t, 0.5 * y0};
    case GeometryId::KodairaNil:
    case GeometryId::KodairaNilSemidirect:
      return {0.5 * 2.0 * std::sqrt(y0 * t), 0.5 * y0};
    case GeometryId::InoueSolvable: {
      const double a = spec.params.a;
      return {0.5 * x0, 0.5 * 12.0 * a * a * t};
    }
    case GeometryId::Sol1:
    case GeometryId::Sol1Prime:
      return {0.5 * 4.0 * t, 0.5 * y0};
    case GeometryId::Hopf:
      break;
  }
  throw AnalysisError("blowdown_target: Hopf solutions converge; no blowdown");
}

struct BlowdownSlice {
  double s = 0.0;
  std::vector<double> t;
  std::vector<RealFrameForm> rescaled;
  std::vector<RealFrameForm> target;
  /// sup over t of max relative deviation of the s12 and s34 coefficients.
  double diagonal_error = 0.0;
  /// sup over t of max |rescaled - target| over s13, s24, s14, s23.
  double off_diagonal = 0.0;
};

struct BlowdownResult {
  GeometryId id = GeometryId::Torus;
  BlowdownWeights weights{};
  std::vector<BlowdownSlice> slices;  ///< ascending in s

  const BlowdownSlice& limit() const { return slices.back(); }
  const BlowdownSlice& at(double s) const {
    for (const auto& sl : slices) {
      if (std::abs(sl.s - s) <= 1e-12 * s) return sl;
    }
    throw AnalysisError("BlowdownResult: no slice at s=" + std::to_string(s));
  }
  /// Off-diagonal parts shrink as s grows; values below @p floor count as zero.
  bool off_diagonal_decays(double floor = 1e-9) const {
    for (std::size_t k = 1; k < slices.size(); ++k) {
      if (slices[k].off_diagonal > floor &&
          slices[k].off_diagonal > slices[k - 1].off_diagonal * (1.0 + 1e-9)) {
        return false;
      }
    }
    return true;
  }
};

/// All times s*t needed by blowdown_limit(), sorted.
inline std::vector<double> blowdown_sample_times(std::span<const double> s_values,
                                                 std::span<const double> t_grid) {
  std::vector<double> out;
  for (double s : s_values) {
    for (double t : t_grid) out.push_back(s * t);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace detail {

inline const FlowState& sample_at(const Trajectory& traj, double t) {
  if (t > traj.last().t * (1.0 + 1e-12)) {
    throw AnalysisError("blowdown_limit: trajectory too short (needs t=" + std::to_string(t) + ")");
  }
  const auto it = std::lower_bound(
      traj.samples.begin(), traj.samples.end(), t * (1.0 - 1e-12),
      [](const FlowState& st, double v) { return st.t < v; });
  if (it == traj.samples.end() || std::abs(it->t - t) > 1e-12 * t) {
    throw AnalysisError("blowdown_limit: trajectory lacks a sample at t=" + std::to_string(t));
  }
  return *it;
}

}  // namespace detail

/**
 * @brief Rescaled real-frame coefficients s^{w_i+w_j-1} c_{ij}(s t) for each s and t.
 *
 * The trajectory must contain samples at every s*t (see blowdown_sample_times()).
 */
inline BlowdownResult blowdown_limit(const Trajectory& traj, std::span<const double> s_values,
                                     std::span<const double> t_grid) {
  if (s_values.empty() || t_grid.empty()) {
    throw AnalysisError("blowdown_limit: empty s or t grid");
  }
  const auto& spec = traj.geometry;
  BlowdownResult result;
  result.id = spec.id;
  result.weights = blowdown_weights(spec.id);

  std::vector<double> s_sorted(s_values.begin(), s_values.end());
  std::sort(s_sorted.begin(), s_sorted.end());
  const MetricCoefficients g0 = traj.initial().g;

  for (double s : s_sorted) {
    if (!(s > 0.0)) throw AnalysisError("blowdown_limit: s must be positive");
    BlowdownSlice slice;
    slice.s = s;
    for (double t : t_grid) {
      const FlowState& st = detail::sample_at(traj, s * t);
      const RealFrameForm r = rescale(blowdown_frame(spec.id, st.g), result.weights, s);
      const RealFrameForm target = blowdown_target(spec, g0, t);
      slice.t.push_back(t);
      slice.rescaled.push_back(r);
      slice.target.push_back(target);
      const double e12 = std::abs(r.s12 - target.s12) / std::abs(target.s12);
      const double e34 = std::abs(r.s34 - target.s34) / std::abs(target.s34);
      slice.diagonal_error = std::max({slice.diagonal_error, e12, e34});
      slice.off_diagonal =
          std::max({slice.off_diagonal, std::abs(r.s13 - target.s13), std::abs(r.s24 - target.s24),
                    std::abs(r.s14 - target.s14), std::abs(r.s23 - target.s23)});
    }
    result.slices.push_back(std::move(slice));
  }
  return result;
}

/**
 * @brief Expanding-soliton residual of the largest-s slice under t -> a t.
 *
 * A limit coefficient of weight w = w_i + w_j satisfies c(a t) = a^{1-w} c(t):
 * linear coefficients scale with a, weight-absorbed constants stay fixed and
 * the Kodaira sqrt(t) term scales with sqrt(a). Checked on the s12 and s34
 * coefficients for every t with a t also on the grid; returns the sup of the
 * relative deviation.
 */
inline double soliton_check(const BlowdownResult& result, double a) {
  if (result.slices.empty()) throw AnalysisError("soliton_check: empty blowdown result");
  if (!(a > 0.0)) throw AnalysisError("soliton_check: scale must be positive");
  const auto& sl = result.limit();
  const auto& w = result.weights;
  double residual = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < sl.t.size(); ++i) {
    for (std::size_t j = 0; j < sl.t.size(); ++j) {
      if (std::abs(sl.t[j] - a * sl.t[i]) > 1e-12 * sl.t[j]) continue;
      ++pairs;
      const double p12 = std::pow(a, 1.0 - (w.w[0] + w.w[1]));
      const double p34 = std::pow(a, 1.0 - (w.w[2] + w.w[3]));
      const double r12 = std::abs(sl.rescaled[j].s12 - p12 * sl.rescaled[i].s12) /
                         std::abs(p12 * sl.rescaled[i].s12);
      const double r34 = std::abs(sl.rescaled[j].s34 - p34 * sl.rescaled[i].s34) /
                         std::abs(p34 * sl.rescaled[i].s34);
      residual = std::max({residual, r12, r34});
    }
  }
  if (pairs == 0) {
    throw AnalysisError("soliton_check: t grid has no pair (t, a t) for a=" + std::to_string(a));
  }
  return residual;
}

}  // namespace bismut_flow
