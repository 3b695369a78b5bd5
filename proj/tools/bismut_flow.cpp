// Copyright 2026 The bismut-flow Authors
// SPDX-License-Identifier: Apache-2.0

// bismut-flow: simulate the pluriclosed flow on the four-dimensional model
// geometries and analyse the resulting trajectories.
//
//   bismut-flow simulate    --geometry NAME [params] [initial] [integrator] [--output F]
//   bismut-flow validate    [--report F]
//   bismut-flow asymptotics --geometry NAME ... [--report F]
//   bismut-flow blowdown    --geometry NAME ... [--s-values ...] [--t-grid ...]
//   bismut-flow sweep       --geometry NAME --param P --values v1,v2,... --out-dir D
//
// Exit codes: 0 success, 1 usage or configuration error, 2 numerical failure.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bismut_flow/bismut_flow.hpp"

namespace bf = bismut_flow;
namespace fs = std::filesystem;
using bf::Json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string geometry;
  bf::GeometryParams params;
  std::optional<double> lambda_quotient;
  bf::InoueQuotient quotient = bf::InoueQuotient::SPlus;
  double x0 = 1.0, y0 = 1.0, re_z0 = 0.0, im_z0 = 0.0;
  std::optional<double> t_end;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  std::size_t max_steps = 10'000'000;
  std::optional<std::size_t> samples;
  std::string output;
  std::string report;
};

/// Command-line values; unset optionals leave the config-file value in place.
struct Flags {
  std::string config_path;
  std::optional<std::string> geometry, quotient, output, report;
  std::optional<double> alpha, a, b, lambda_quotient, x0, y0, re_z0, im_z0, t_end, rel_tol, abs_tol;
  std::optional<int> epsilon;
  std::optional<std::size_t> max_steps, samples;
};

bf::InoueQuotient parse_quotient(const std::string& s) {
  if (s == "s-plus") return bf::InoueQuotient::SPlus;
  if (s == "s-minus") return bf::InoueQuotient::SMinus;
  throw ConfigError("unknown quotient '" + s + "' (expected s-plus or s-minus)");
}

void apply_json(RunConfig& cfg, const Json& j) {
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
  for (const auto& [key, v] : j.items()) {
    if (key == "geometry") cfg.geometry = v.get<std::string>();
    else if (key == "alpha") cfg.params.alpha = v.get<double>();
    else if (key == "a") cfg.params.a = v.get<double>();
    else if (key == "b") cfg.params.b = v.get<double>();
    else if (key == "epsilon") cfg.params.epsilon = v.get<int>();
    else if (key == "lambda_quotient") cfg.lambda_quotient = v.get<double>();
    else if (key == "quotient") cfg.quotient = parse_quotient(v.get<std::string>());
    else if (key == "x0") cfg.x0 = v.get<double>();
    else if (key == "y0") cfg.y0 = v.get<double>();
    else if (key == "re_z0") cfg.re_z0 = v.get<double>();
    else if (key == "im_z0") cfg.im_z0 = v.get<double>();
    else if (key == "t_end") cfg.t_end = v.get<double>();
    else if (key == "rel_tol") cfg.rel_tol = v.get<double>();
    else if (key == "abs_tol") cfg.abs_tol = v.get<double>();
    else if (key == "max_steps") cfg.max_steps = v.get<std::size_t>();
    else if (key == "samples") cfg.samples = v.get<std::size_t>();
    else if (key == "output") cfg.output = v.get<std::string>();
    else if (key == "report") cfg.report = v.get<std::string>();
    else throw ConfigError("unknown config key '" + key + "'");
  }
}

RunConfig resolve(const Flags& f) {
  RunConfig cfg;
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw ConfigError("cannot open config file " + f.config_path);
    try {
      apply_json(cfg, Json::parse(in));
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("config file " + f.config_path + ": " + e.what());
    }
  }
  if (f.geometry) cfg.geometry = *f.geometry;
  if (f.alpha) cfg.params.alpha = *f.alpha;
  if (f.a) cfg.params.a = *f.a;
  if (f.b) cfg.params.b = *f.b;
  if (f.epsilon) cfg.params.epsilon = *f.epsilon;
  if (f.lambda_quotient) cfg.lambda_quotient = *f.lambda_quotient;
  if (f.quotient) cfg.quotient = parse_quotient(*f.quotient);
  if (f.x0) cfg.x0 = *f.x0;
  if (f.y0) cfg.y0 = *f.y0;
  if (f.re_z0) cfg.re_z0 = *f.re_z0;
  if (f.im_z0) cfg.im_z0 = *f.im_z0;
  if (f.t_end) cfg.t_end = *f.t_end;
  if (f.rel_tol) cfg.rel_tol = *f.rel_tol;
  if (f.abs_tol) cfg.abs_tol = *f.abs_tol;
  if (f.max_steps) cfg.max_steps = *f.max_steps;
  if (f.samples) cfg.samples = *f.samples;
  if (f.output) cfg.output = *f.output;
  if (f.report) cfg.report = *f.report;
  if (cfg.geometry.empty()) throw ConfigError("--geometry is required");
  return cfg;
}

bf::GeometrySpec geometry_of(const RunConfig& cfg) {
  const auto id = bf::parse_geometry_name(cfg.geometry);
  if (!id) throw ConfigError("unknown geometry '" + cfg.geometry + "'");
  return bf::build_geometry(*id, cfg.params);
}

bf::MetricCoefficients initial_of(const RunConfig& cfg) {
  const bf::MetricCoefficients g{cfg.x0, cfg.y0, bf::Complex{cfg.re_z0, cfg.im_z0}};
  bf::require_admissible(g);
  return g;
}

bf::IntegratorOptions integrator_of(const RunConfig& cfg, double default_t_end) {
  bf::IntegratorOptions o;
  o.t_end = cfg.t_end.value_or(default_t_end);
  o.rel_tol = cfg.rel_tol;
  o.abs_tol = cfg.abs_tol;
  o.max_steps = cfg.max_steps;
  if (!(o.t_end > 0.0)) throw ConfigError("t_end must be positive");
  if (cfg.samples) {
    if (*cfg.samples < 2) throw ConfigError("samples must be at least 2");
    o.sample_times = bf::log_spaced(1e-6 * o.t_end, o.t_end, *cfg.samples);
  }
  return o;
}

Json config_json(const RunConfig& cfg, const bf::GeometrySpec& spec,
                 const bf::MetricCoefficients& g0, const bf::IntegratorOptions& o) {
  Json j{{"geometry", bf::to_json(spec)},
         {"initial", bf::to_json(g0)},
         {"t_end", o.t_end},
         {"rel_tol", o.rel_tol},
         {"abs_tol", o.abs_tol},
         {"max_steps", o.max_steps}};
  if (cfg.lambda_quotient) j["lambda_quotient"] = *cfg.lambda_quotient;
  return j;
}

void emit_json(const Json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << j.dump(2) << '\n';
}

void write_trajectory(const std::vector<bf::FlowState>& samples, const std::string& path) {
  if (path.empty() || path == "-") {
    bf::write_csv(std::cout, samples);
    return;
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  bf::write_csv(out, samples);
}

/// Partial samples of a failed run, closed with the last accepted state.
std::vector<bf::FlowState> partial_samples(const bf::IntegrationError& e) {
  std::vector<bf::FlowState> s = e.partial().samples;
  if (s.empty() || e.last_good().t > s.back().t) s.push_back(e.last_good());
  return s;
}

// ---------------------------------------------------------------------------

int cmd_simulate(const Flags& flags) {
  const RunConfig cfg = resolve(flags);
  const auto spec = geometry_of(cfg);
  const auto g0 = initial_of(cfg);
  const auto opts = integrator_of(cfg, 1.0);
  Json report{{"schema_version", bf::kReportSchemaVersion},
              {"command", "simulate"},
              {"config", config_json(cfg, spec, g0, opts)}};
  try {
    const auto traj = bf::integrate(spec, g0, opts);
    write_trajectory(traj.samples, cfg.output);
    report["truncated"] = false;
    report["final"] = bf::to_json(traj.last().g);
    report["t_final"] = traj.last().t;
    report["stats"] = bf::to_json(traj.stats);
    if (!cfg.report.empty()) emit_json(report, cfg.report);
    return kExitOk;
  } catch (const bf::IntegrationError& e) {
    const auto samples = partial_samples(e);
    write_trajectory(samples, cfg.output);
    report["truncated"] = true;
    report["failure"] = bf::to_string(e.reason());
    report["t_final"] = e.last_good().t;
    report["final"] = bf::to_json(e.last_good().g);
    report["stats"] = bf::to_json(e.partial().stats);
    if (!cfg.report.empty()) emit_json(report, cfg.report);
    std::cerr << "bismut-flow: " << e.what() << '\n';
    return kExitNumerical;
  }
}

int cmd_validate(const std::string& report_path, std::size_t samples) {
  bf::ValidationOptions vo;
  vo.samples_per_geometry = samples;
  const auto checks = bf::run_validation(vo);
  Json list = Json::array();
  for (const auto& c : checks) {
    list.push_back({{"name", c.name},
                    {"passed", c.passed},
                    {"residual", c.residual},
                    {"tolerance", c.tolerance},
                    {"detail", c.detail}});
  }
  const bool ok = bf::all_passed(checks);
  const Json report{{"schema_version", bf::kReportSchemaVersion},
                    {"command", "validate"},
                    {"passed", ok},
                    {"checks", std::move(list)}};
  emit_json(report, report_path);
  if (!ok) {
    for (const auto& c : checks) {
      if (!c.passed) std::cerr << "FAILED " << c.name << " residual=" << c.residual << '\n';
    }
  }
  return ok ? kExitOk : kExitNumerical;
}

int cmd_asymptotics(const Flags& flags) {
  const RunConfig cfg = resolve(flags);
  const auto spec = geometry_of(cfg);
  const auto g0 = initial_of(cfg);
  auto opts = integrator_of(cfg, 1e4);
  if (!cfg.samples) opts.sample_times = bf::log_spaced(1e-6 * opts.t_end, opts.t_end, 400);
  const auto traj = bf::integrate(spec, g0, opts);
  if (!cfg.output.empty()) write_trajectory(traj.samples, cfg.output);

  Json report{{"schema_version", bf::kReportSchemaVersion},
              {"command", "asymptotics"},
              {"config", config_json(cfg, spec, g0, opts)},
              {"final", bf::to_json(traj.last().g)},
              {"stats", bf::to_json(traj.stats)},
              {"asymptotics", bf::to_json(bf::estimate_asymptotics(traj))}};
  bf::GhOptions gh;
  gh.lambda_quotient = cfg.lambda_quotient;
  gh.quotient = cfg.quotient;
  const bool needs_lambda =
      spec.id == bf::GeometryId::Sol1 || spec.id == bf::GeometryId::Sol1Prime;
  if (needs_lambda && !cfg.lambda_quotient) {
    report["gh_limit"] = nullptr;
    report["gh_note"] = "circle length requires --lambda-quotient";
  } else {
    report["gh_limit"] = bf::to_json(bf::gh_limit(traj, gh));
  }
  emit_json(report, cfg.report);
  return kExitOk;
}

int cmd_blowdown(const Flags& flags, const std::vector<double>& s_values,
                 const std::vector<double>& t_grid, double scale) {
  const RunConfig cfg = resolve(flags);
  const auto spec = geometry_of(cfg);
  const auto g0 = initial_of(cfg);
  if (spec.id == bf::GeometryId::Hopf) {
    throw ConfigError("hopf: the flow converges, there is no blowdown limit");
  }
  auto times = bf::blowdown_sample_times(s_values, t_grid);
  auto opts = integrator_of(cfg, times.empty() ? 1.0 : times.back());
  if (!times.empty() && times.back() > opts.t_end) {
    throw ConfigError("t_end is shorter than max(s) * max(t)");
  }
  opts.sample_times = times;
  const auto traj = bf::integrate(spec, g0, opts);
  const auto result = bf::blowdown_limit(traj, s_values, t_grid);

  Json report{{"schema_version", bf::kReportSchemaVersion},
              {"command", "blowdown"},
              {"config", config_json(cfg, spec, g0, opts)},
              {"blowdown", bf::to_json(result)}};
  try {
    report["soliton_scale"] = scale;
    report["soliton_residual"] = bf::soliton_check(result, scale);
  } catch (const bf::AnalysisError& e) {
    report["soliton_residual"] = nullptr;
    report["soliton_note"] = e.what();
  }
  emit_json(report, cfg.report);
  return kExitOk;
}

std::size_t sweep_threads(std::size_t runs) {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("BISMUT_FLOW_THREADS")) {
    try {
      const long cap = std::stol(env);
      if (cap >= 1) n = std::min<std::size_t>(n, static_cast<std::size_t>(cap));
    } catch (const std::exception&) {
      std::cerr << "bismut-flow: ignoring invalid BISMUT_FLOW_THREADS='" << env << "'\n";
    }
  }
  return std::max<std::size_t>(1, std::min(n, runs));
}

void set_param(RunConfig& cfg, const std::string& name, double v) {
  if (name == "alpha") cfg.params.alpha = v;
  else if (name == "a") cfg.params.a = v;
  else if (name == "b") cfg.params.b = v;
  else if (name == "epsilon") cfg.params.epsilon = static_cast<int>(v);
  else if (name == "x0") cfg.x0 = v;
  else if (name == "y0") cfg.y0 = v;
  else if (name == "re_z0") cfg.re_z0 = v;
  else if (name == "im_z0") cfg.im_z0 = v;
  else if (name == "t_end") cfg.t_end = v;
  else throw ConfigError("unknown sweep parameter '" + name + "'");
}

int cmd_sweep(const Flags& flags, const std::string& param, const std::vector<double>& values,
              const std::string& out_dir) {
  const RunConfig base = resolve(flags);
  if (values.empty()) throw ConfigError("--values must list at least one value");
  if (out_dir.empty()) throw ConfigError("--out-dir is required");

  struct Run {
    RunConfig cfg;
    bf::GeometrySpec spec;
    bf::MetricCoefficients g0;
    bf::IntegratorOptions opts;
    std::string file;
    Json entry;
    bool failed = false;
  };
  std::vector<Run> runs;
  for (std::size_t k = 0; k < values.size(); ++k) {
    Run r;
    r.cfg = base;
    set_param(r.cfg, param, values[k]);
    r.spec = geometry_of(r.cfg);
    r.g0 = initial_of(r.cfg);
    r.opts = integrator_of(r.cfg, 1.0);
    r.file = "run_" + std::to_string(k) + ".csv";
    runs.push_back(std::move(r));
  }
  fs::create_directories(out_dir);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < runs.size(); k = next++) {
      Run& r = runs[k];
      r.entry = {{"index", k},
                 {"param", param},
                 {"value", values[k]},
                 {"file", r.file},
                 {"config", config_json(r.cfg, r.spec, r.g0, r.opts)}};
      std::ofstream out(fs::path(out_dir) / r.file);
      try {
        const auto traj = bf::integrate(r.spec, r.g0, r.opts);
        bf::write_csv(out, traj.samples);
        r.entry["truncated"] = false;
        r.entry["t_final"] = traj.last().t;
        r.entry["final"] = bf::to_json(traj.last().g);
        r.entry["stats"] = bf::to_json(traj.stats);
      } catch (const bf::IntegrationError& e) {
        bf::write_csv(out, partial_samples(e));
        r.entry["truncated"] = true;
        r.entry["failure"] = bf::to_string(e.reason());
        r.entry["t_final"] = e.last_good().t;
        r.entry["final"] = bf::to_json(e.last_good().g);
        r.failed = true;
      }
    }
  };
  const std::size_t n_threads = sweep_threads(runs.size());
  std::vector<std::thread> pool;
  for (std::size_t k = 0; k < n_threads; ++k) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  Json list = Json::array();
  bool any_failed = false;
  for (const auto& r : runs) {
    list.push_back(r.entry);
    any_failed = any_failed || r.failed;
  }
  const Json manifest{{"schema_version", bf::kReportSchemaVersion},
                      {"command", "sweep"},
                      {"threads", n_threads},
                      {"runs", std::move(list)}};
  emit_json(manifest, (fs::path(out_dir) / "manifest.json").string());
  return any_failed ? kExitNumerical : kExitOk;
}

void add_run_options(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config_path, "JSON config file; flags override its values");
  sub->add_option("--geometry", f.geometry,
                  "torus, hyperelliptic, hopf, properly-elliptic, kodaira-nil, "
                  "kodaira-semidirect, inoue, sol1, sol1-prime");
  sub->add_option("--alpha", f.alpha, "Hopf / properly elliptic parameter");
  sub->add_option("--a", f.a, "Inoue parameter a (nonzero)");
  sub->add_option("--b", f.b, "Inoue parameter b");
  sub->add_option("--epsilon", f.epsilon, "Kodaira semidirect sign (+1 or -1)");
  sub->add_option("--lambda-quotient", f.lambda_quotient, "Sol_1 quotient eigenvalue");
  sub->add_option("--quotient", f.quotient, "s-plus or s-minus");
  sub->add_option("--x0", f.x0);
  sub->add_option("--y0", f.y0);
  sub->add_option("--re-z0", f.re_z0);
  sub->add_option("--im-z0", f.im_z0);
  sub->add_option("--t-end", f.t_end);
  sub->add_option("--rel-tol", f.rel_tol);
  sub->add_option("--abs-tol", f.abs_tol);
  sub->add_option("--max-steps", f.max_steps);
  sub->add_option("--samples", f.samples, "log-spaced output samples in [1e-6 t_end, t_end]");
  sub->add_option("--report", f.report, "JSON report path ('-' for stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pluriclosed flow on four-dimensional model geometries"};
  app.require_subcommand(1);

  Flags flags;
  auto* simulate = app.add_subcommand("simulate", "Integrate the flow and write a CSV trajectory");
  add_run_options(simulate, flags);
  simulate->add_option("--output", flags.output, "CSV path (default stdout)");

  std::string validate_report;
  std::size_t validate_samples = 1000;
  auto* validate = app.add_subcommand("validate", "Run the property suite");
  validate->add_option("--report", validate_report, "JSON report path (default stdout)");
  validate->add_option("--samples", validate_samples, "random metrics per geometry");

  auto* asymptotics = app.add_subcommand("asymptotics", "Growth classes and GH limit constants");
  add_run_options(asymptotics, flags);
  asymptotics->add_option("--output", flags.output, "optional CSV trajectory path");

  std::vector<double> s_values{1e1, 1e2, 1e3};
  std::vector<double> t_grid{0.5, 1.0, 2.0};
  double soliton_scale = 2.0;
  auto* blowdown = app.add_subcommand("blowdown", "Rescaled limits s^-1 g(s t)");
  add_run_options(blowdown, flags);
  blowdown->add_option("--s-values", s_values)->delimiter(',');
  blowdown->add_option("--t-grid", t_grid)->delimiter(',');
  blowdown->add_option("--soliton-scale", soliton_scale);

  std::string sweep_param, out_dir;
  std::vector<double> sweep_values;
  auto* sweep = app.add_subcommand("sweep", "Batch of simulations over one parameter");
  add_run_options(sweep, flags);
  sweep->add_option("--param", sweep_param,
                    "alpha, a, b, epsilon, x0, y0, re_z0, im_z0 or t_end")->required();
  sweep->add_option("--values", sweep_values)->delimiter(',')->required();
  sweep->add_option("--out-dir", out_dir)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*simulate) return cmd_simulate(flags);
    if (*validate) return cmd_validate(validate_report, validate_samples);
    if (*asymptotics) return cmd_asymptotics(flags);
    if (*blowdown) return cmd_blowdown(flags, s_values, t_grid, soliton_scale);
    if (*sweep) return cmd_sweep(flags, sweep_param, sweep_values, out_dir);
  } catch (const bf::IntegrationError& e) {
    std::cerr << "bismut-flow: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const bf::AnalysisError& e) {
    std::cerr << "bismut-flow: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "bismut-flow: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
