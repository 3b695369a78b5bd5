// Copyright 2026 The bismut-flow Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file io.hpp
 * @brief Trajectory CSV files and JSON report encoding.
 *
 * CSV columns are t,x,y,re_z,im_z,D with a mandatory header row. Numbers are
 * written with 17 significant digits through std::to_chars, so the output is
 * locale independent and parses back to the identical doubles.
 */

#pragma once

#include <array>
#include <charconv>
#include <istream>
#include <span>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "json.hpp"

#include "bismut_flow/analysis.hpp"
#include "bismut_flow/flow.hpp"

namespace bismut_flow {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr std::string_view kCsvHeader = "t,x,y,re_z,im_z,D";

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                 std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

inline double parse_double(std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw FormatError("not a number: '" + std::string(s) + "'");
  }
  return v;
}

inline void write_csv(std::ostream& os, std::span<const FlowState> samples) {
  os << kCsvHeader << '\n';
  for (const auto& st : samples) {
    os << format_double(st.t) << ',' << format_double(st.g.x) << ',' << format_double(st.g.y)
       << ',' << format_double(st.g.z.real()) << ',' << format_double(st.g.z.imag()) << ','
       << format_double(st.g.det()) << '\n';
  }
}

inline std::vector<FlowState> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw FormatError("empty trajectory file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw FormatError("unexpected header: '" + line + "'");

  std::vector<FlowState> out;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::array<double, 6> f{};
    std::size_t start = 0;
    for (std::size_t k = 0; k < 6; ++k) {
      const std::size_t comma = line.find(',', start);
      const bool last = k == 5;
      if (last != (comma == std::string::npos)) {
        throw FormatError("line " + std::to_string(lineno) + ": expected 6 fields");
      }
      const std::string_view field(line.data() + start,
                                   (last ? line.size() : comma) - start);
      f[k] = parse_double(field);
      start = comma + 1;
    }
    out.push_back({f[0], {f[1], f[2], Complex{f[3], f[4]}}});
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

using Json = nlohmann::json;

inline Json to_json(const GeometrySpec& spec) {
  Json j{{"name", std::string(spec.name())}};
  switch (spec.id) {
    case GeometryId::Hopf:
    case GeometryId::ProperlyElliptic:
      j["alpha"] = spec.params.alpha;
      break;
    case GeometryId::InoueSolvable:
      j["a"] = spec.params.a;
      j["b"] = spec.params.b;
      break;
    case GeometryId::KodairaNilSemidirect:
      j["epsilon"] = spec.params.epsilon;
      break;
    default:
      break;
  }
  return j;
}

inline Json to_json(const MetricCoefficients& g) {
  return {{"x", g.x}, {"y", g.y}, {"re_z", g.z.real()}, {"im_z", g.z.imag()}, {"D", g.det()}};
}

inline Json to_json(const TrajectoryStats& s) {
  return {{"steps_accepted", s.steps_accepted},
          {"steps_rejected", s.steps_rejected},
          {"guard_rejections", s.guard_rejections},
          {"rhs_evaluations", s.rhs_evaluations},
          {"min_D", s.min_det}};
}

inline Json to_json(const GrowthFit& f) {
  return {{"class", to_string(f.kind)}, {"value", f.value},   {"intercept", f.intercept},
          {"residual", f.residual},     {"t_lo", f.t_lo},     {"t_hi", f.t_hi},
          {"samples", f.samples}};
}

inline Json to_json(const AsymptoticsReport& r) {
  return {{"x", to_json(r.x)}, {"y", to_json(r.y)}, {"abs_z", to_json(r.abs_z)}};
}

inline Json to_json(const GhLimit& g) {
  return {{"kind", to_string(g.kind)},
          {"value", g.value},
          {"target", g.target},
          {"description", g.description}};
}

inline Json to_json(const RealFrameForm& f) {
  return {{"s12", f.s12}, {"s34", f.s34}, {"s13", f.s13},
          {"s24", f.s24}, {"s14", f.s14}, {"s23", f.s23}};
}

inline Json to_json(const BlowdownResult& r) {
  Json slices = Json::array();
  for (const auto& sl : r.slices) {
    Json pts = Json::array();
    for (std::size_t k = 0; k < sl.t.size(); ++k) {
      pts.push_back({{"t", sl.t[k]},
                     {"rescaled", to_json(sl.rescaled[k])},
                     {"target", to_json(sl.target[k])}});
    }
    slices.push_back({{"s", sl.s},
                      {"diagonal_error", sl.diagonal_error},
                      {"off_diagonal", sl.off_diagonal},
                      {"points", std::move(pts)}});
  }
  return {{"geometry", std::string(geometry_name(r.id))},
          {"weights", r.weights.w},
          {"limit_s", r.limit().s},
          {"limit_diagonal_error", r.limit().diagonal_error},
          {"off_diagonal_decays", r.off_diagonal_decays()},
          {"slices", std::move(slices)}};
}

}  // namespace bismut_flow
