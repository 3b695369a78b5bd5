// Copyright 2026 The bismut-flow Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bismut_flow/bismut_flow.hpp"

using namespace bismut_flow;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream note;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      note << " [failed: " << what << "]";
    }
  }
};

Trajectory run(GeometryId id, GeometryParams p, const MetricCoefficients& g0, double t_end,
               double abs_tol = 1e-12, std::vector<double> times = {}) {
  IntegratorOptions o;
  o.t_end = t_end;
  o.abs_tol = abs_tol;
  o.sample_times = times.empty() ? log_spaced(1e-3, t_end, 400) : std::move(times);
  return integrate(build_geometry(id, p), g0, o);
}

std::vector<MetricCoefficients> initial_data(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::vector<MetricCoefficients> out{{1.0, 1.0, {0.5, 0.3}}};
  while (static_cast<int>(out.size()) < count) out.push_back(random_admissible_metric(rng));
  return out;
}

// 1 ------------------------------------------------------------------------
void oracle_equivalence(Outcome& o) {
  std::mt19937_64 rng(101);
  double worst = 0.0;
  std::size_t entries = 0;
  for (const auto& spec : parameter_grid()) {
    ++entries;
    for (int k = 0; k < 1000; ++k) {
      const auto g = random_admissible_metric(rng);
      worst = std::max(worst, relative_difference(rhs_generic(spec, g), rhs_closed_form(spec, g)));
      worst = std::max(worst, relative_difference(bismut_ricci(spec, g), closed_form_ricci(spec, g)));
    }
  }
  o.note << entries << " catalog entries x 1000 metrics, max relative difference " << worst;
  o.require(worst <= 1e-11, "relative difference <= 1e-11");
}

// 2 ------------------------------------------------------------------------
void hyperelliptic(Outcome& o) {
  double worst_bound = 0.0, worst_xy = 0.0;
  for (const auto& g0 : initial_data(202, 5)) {
    const auto tr = run(GeometryId::Hyperelliptic, {}, g0, 40.0 * g0.y, 1e-300);
    for (const auto& s : tr.samples) {
      const double bound = std::abs(g0.z) * std::exp(-s.t / g0.y);
      if (bound > 0.0) worst_bound = std::max(worst_bound, std::abs(s.g.z) / bound - 1.0);
      worst_xy = std::max({worst_xy, std::abs(s.g.x - g0.x) / g0.x, std::abs(s.g.y - g0.y) / g0.y});
    }
  }
  o.note << "max(|z|/bound - 1) = " << worst_bound << ", max x,y drift = " << worst_xy;
  o.require(worst_bound <= 1e-6, "|z| <= |z0| exp(-t/y0) (1 + 1e-6)");
  o.require(worst_xy <= 1e-10, "x, y constant to 1e-10");
}

// 3 ------------------------------------------------------------------------
void hopf(Outcome& o) {
  double worst_y = 0.0, worst_bound = 0.0;
  for (double alpha : {0.0, 1.0, 2.0}) {
    for (auto g0 : initial_data(303, 5)) {
      g0 = g0.scaled(1.0 / g0.x);  // homothety normalization x0 = 1
      const auto tr = run(GeometryId::Hopf, {.alpha = alpha}, g0, 100.0, 1e-300);
      const double target = (1.0 + alpha * alpha) * g0.x;
      worst_y = std::max(worst_y, std::abs(tr.last().g.y - target));
      for (const auto& s : tr.samples) {
        const double bound = std::norm(g0.z) * std::exp(-2.0 * s.t / g0.x);
        if (bound > 0.0) worst_bound = std::max(worst_bound, std::norm(s.g.z) / bound - 1.0);
      }
    }
  }
  o.note << "max |y(100) - (1+a^2)x0| = " << worst_y << ", max(|z|^2/bound - 1) = " << worst_bound;
  o.require(worst_y <= 1e-6, "y(100) within 1e-6");
  o.require(worst_bound <= 1e-6, "|z|^2 <= |z0|^2 exp(-2t/x0) (1 + 1e-6)");
}

// 4 ------------------------------------------------------------------------
void properly_elliptic(Outcome& o) {
  double worst_slope = 0.0;
  bool increasing = true;
  for (double alpha : {0.0, 1.0, 2.0}) {
    for (const auto& g0 : initial_data(404, 3)) {
      const auto tr = run(GeometryId::ProperlyElliptic, {.alpha = alpha}, g0, 1e4);
      std::vector<double> t, x;
      for (const auto& s : tr.samples) {
        if (s.t >= 1e3) {
          t.push_back(s.t);
          x.push_back(s.g.x);
        }
      }
      const auto fit = fit_growth(GrowthClass::Linear, t, x);
      worst_slope = std::max(worst_slope, std::abs(fit.value / 2.0 - 1.0));
      for (std::size_t k = 1; k < tr.samples.size(); ++k) {
        increasing = increasing && tr.samples[k].g.det() > tr.samples[k - 1].g.det();
      }
    }
  }
  o.note << "max |slope/2 - 1| = " << worst_slope << ", D strictly increasing: " << increasing;
  o.require(worst_slope <= 0.01, "slope 2 +- 1%");
  o.require(increasing, "D strictly increasing");
}

// 5 ------------------------------------------------------------------------
void kodaira(Outcome& o) {
  double worst = 0.0;
  for (const auto& g0 : initial_data(505, 5)) {
    const auto tr = run(GeometryId::KodairaNil, {}, g0, 1e4);
    const double y0 = g0.y, z0 = std::norm(g0.z), x0 = g0.x;
    for (const auto& s : tr.samples) {
      const double x = s.g.x;
      const double r = 0.5 * x * x * y0 - x * z0 - 2.0 * y0 * y0 * s.t - 0.5 * x0 * x0 * y0 + x0 * z0;
      worst = std::max(worst, std::abs(r) / (1.0 + s.t));
    }
  }
  const auto unit = run(GeometryId::KodairaNil, {}, {1.0, 1.0, {}}, 1.0);
  const double err = std::abs(unit.last().g.x - std::sqrt(5.0));
  o.note << "max first-integral residual/(1+t) = " << worst << ", |x(1) - sqrt(5)| = " << err;
  o.require(worst <= 1e-7, "first integral <= 1e-7 (1+t)");
  o.require(err <= 1e-8, "x(1) = sqrt(5) to 1e-8");
}

// 6 ------------------------------------------------------------------------
void kodaira_semidirect(Outcome& o) {
  double worst_ratio = 0.0, worst_rate = std::numeric_limits<double>::infinity();
  for (int eps : {1, -1}) {
    for (const auto& g0 : initial_data(606, 4)) {
      const auto tr = run(GeometryId::KodairaNilSemidirect, {.epsilon = eps}, g0, 1e4);
      const double ratio = tr.last().g.x / std::sqrt(tr.last().t);
      worst_ratio = std::max(worst_ratio, std::abs(ratio / (2.0 * std::sqrt(g0.y)) - 1.0));

      const auto dec = run(GeometryId::KodairaNilSemidirect, {.epsilon = eps}, g0, 60.0 * g0.y, 1e-300,
                           log_spaced(1e-2, 60.0 * g0.y, 200));
      const auto fit = fit_decay_rate(dec, [](const FlowState& s) { return std::abs(s.g.z); },
                                      5.0 * g0.y, {.noise_factor = 1.0});
      worst_rate = std::min(worst_rate, fit.value * 2.0 * g0.y);
    }
  }
  o.note << "max |x/sqrt(t) / (2 sqrt(y0)) - 1| = " << worst_ratio
         << ", min fitted rate * 2 y0 = " << worst_rate;
  o.require(worst_ratio <= 0.01, "x/sqrt(t) -> 2 sqrt(y0) within 1%");
  o.require(worst_rate >= 1.0, "|z| decay rate >= 1/(2 y0)");
}

// 7 ------------------------------------------------------------------------
void inoue(Outcome& o) {
  double worst_slope = 0.0, worst_gh = 0.0;
  for (auto [a, b] : {std::pair{1.0, 0.0}, std::pair{0.5, 1.0}}) {
    for (const auto& g0 : initial_data(707, 3)) {
      const auto tr = run(GeometryId::InoueSolvable, {.a = a, .b = b}, g0, 1e4);
      const double slope = tr.last().g.y / tr.last().t;
      worst_slope = std::max(worst_slope, std::abs(slope / (12.0 * a * a) - 1.0));
      const auto gh = gh_limit(tr);
      worst_gh = std::max(worst_gh, std::abs(gh.value / gh.target - 1.0));
    }
  }
  o.note << "max |y/t / 12a^2 - 1| = " << worst_slope << ", max |circle/sqrt(6)|a| - 1| = " << worst_gh;
  o.require(worst_slope <= 0.01, "y/t -> 12 a^2 within 1%");
  o.require(worst_gh <= 0.01, "sqrt(y/2t) -> sqrt(6)|a| within 1%");
}

// 8 ------------------------------------------------------------------------
void sol1(Outcome& o) {
  double worst_slope = 0.0, worst_re = 0.0;
  bool nonincreasing = true;
  for (const auto& g0 : initial_data(808, 5)) {
    const auto tr = run(GeometryId::Sol1, {}, g0, 1e4);
    worst_slope = std::max(worst_slope, std::abs(tr.last().g.x / tr.last().t / 4.0 - 1.0));
    for (std::size_t k = 0; k < tr.samples.size(); ++k) {
      const auto& g = tr.samples[k].g;
      worst_re = std::max(worst_re, std::abs(g.z.real() - g0.z.real()));
      if (k > 0) nonincreasing = nonincreasing && std::norm(g.z) <= std::norm(tr.samples[k - 1].g.z);
    }
  }
  o.note << "max |x/4t - 1| = " << worst_slope << ", max |Re z - Re z0| = " << worst_re
         << ", |z|^2 nonincreasing: " << nonincreasing;
  o.require(worst_slope <= 0.01, "x/t -> 4 within 1%");
  o.require(worst_re <= 1e-10, "Re z conserved to 1e-10");
  o.require(nonincreasing, "|z|^2 nonincreasing");
}

// 9 ------------------------------------------------------------------------
void sol1_prime(Outcome& o) {
  double worst_slope = 0.0, max_b = 0.0, worst_fit = 0.0, max_a = 0.0;
  for (const auto& g0 : initial_data(909, 5)) {
    const auto tr = run(GeometryId::Sol1Prime, {}, g0, 1e4);
    worst_slope = std::max(worst_slope, std::abs(tr.last().g.x / tr.last().t / 4.0 - 1.0));
    std::vector<double> u, c;
    for (const auto& s : tr.samples) {
      if (s.t >= 10.0) {
        u.push_back(std::log1p(s.t));
        c.push_back(std::abs(s.g.z));
      }
    }
    const auto [b, a0] = detail::line_fit(u, c);
    double a = a0, resid = 0.0, norm = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
      a = std::max(a, c[k] - b * u[k]);
      resid += std::pow(c[k] - (b * u[k] + a0), 2);
      norm += c[k] * c[k];
    }
    max_b = std::max(max_b, std::abs(b));
    max_a = std::max(max_a, std::abs(a));
    worst_fit = std::max(worst_fit, std::sqrt(resid / norm));
  }
  o.note << "max |x/4t - 1| = " << worst_slope << ", |z| <= A + B log(1+t) with max B = " << max_b
         << ", max A = " << max_a << ", worst normalized fit residual = " << worst_fit;
  o.require(worst_slope <= 0.01, "x/t -> 4 within 1%");
  o.require(std::isfinite(max_b) && std::isfinite(max_a), "finite A, B");
  o.require(worst_fit <= 0.05, "log model fits |z| on [10, 1e4]");
}

// 10 -----------------------------------------------------------------------
void blowdown(Outcome& o) {
  const std::vector<double> s_values{1e1, 1e2, 1e3, 1e4, 1e5, 1e6};
  const std::vector<double> t_grid{0.5, 1.0, 2.0};
  const auto times = blowdown_sample_times(s_values, t_grid);
  const MetricCoefficients g0{1.5, 1.0, {0.3, 0.2}};
  const std::vector<std::pair<GeometryId, GeometryParams>> cases{
      {GeometryId::Hyperelliptic, {}},
      {GeometryId::ProperlyElliptic, {.alpha = 0.0}},
      {GeometryId::KodairaNil, {}},
      {GeometryId::KodairaNilSemidirect, {}},
      {GeometryId::InoueSolvable, {.a = 1.0, .b = 0.5}},
      {GeometryId::Sol1, {}},
      {GeometryId::Sol1Prime, {}}};
  double worst_diag = 0.0, worst_soliton = 0.0;
  bool decays = true;
  for (const auto& [id, p] : cases) {
    const auto tr = run(id, p, g0, times.back(), 1e-12, times);
    const auto result = blowdown_limit(tr, s_values, t_grid);
    const auto& at = result.at(1e3);
    const double sol = soliton_check(result, 2.0);
    worst_diag = std::max(worst_diag, at.diagonal_error);
    worst_soliton = std::max(worst_soliton, sol);
    decays = decays && result.off_diagonal_decays();
    o.note << "\n      " << geometry_name(id) << ": diagonal error at s=1e3 " << at.diagonal_error
           << ", off-diagonal at s=1e3 " << at.off_diagonal << " -> s=1e6 "
           << result.limit().off_diagonal << ", soliton residual " << sol;
  }
  o.require(worst_diag <= 0.01, "diagonal coefficients within 1% at s=1e3");
  o.require(decays, "off-diagonal coefficients decrease in s");
  o.require(worst_soliton <= 1e-3, "soliton residual <= 1e-3");
}

// 11 -----------------------------------------------------------------------
void catalog_integrity(Outcome& o) {
  double worst = 0.0;
  std::size_t entries = 0, failures = 0;
  for (const auto& spec : parameter_grid()) {
    ++entries;
    const auto report = validate_geometry(spec, 1e-14);
    if (!report.empty()) ++failures;
    for (const auto& v : report) worst = std::max(worst, v.residual);
  }
  o.note << entries << " entries, " << failures << " with violations, worst residual " << worst;
  o.require(failures == 0, "all checks <= 1e-14");
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria{
      {"oracle equivalence", oracle_equivalence},
      {"hyperelliptic decay", hyperelliptic},
      {"hopf convergence", hopf},
      {"properly elliptic growth", properly_elliptic},
      {"kodaira first integral", kodaira},
      {"kodaira semidirect", kodaira_semidirect},
      {"inoue solvable", inoue},
      {"sol1", sol1},
      {"sol1-prime", sol1_prime},
      {"blowdown limits", blowdown},
      {"catalog integrity", catalog_integrity},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[k].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.note << " [exception: " << e.what() << "]";
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failed;
    std::printf("%s %2zu %-26s (%.2fs) %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first,
                secs, o.note.str().c_str());
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
