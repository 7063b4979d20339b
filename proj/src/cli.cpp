#include "hfv/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>

#include "CLI11.hpp"
#include "hfv/characteristics.hpp"
#include "hfv/entropy.hpp"
#include "hfv/errors.hpp"
#include "hfv/harness.hpp"
#include "hfv/scheme.hpp"
#include "json.hpp"

namespace hfv {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

constexpr std::size_t kMaxReportedFailures = 100;

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Non-finite numbers become null, which JSON can represent.
json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

class Output {
 public:
  explicit Output(const RunConfig& c) : dir_(c.output_dir) { fs::create_directories(dir_); }

  void text(const std::string& name, const std::string& body) const {
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out) throw Error("cannot write " + (dir_ / name).string());
    out << body;
  }
  void write_json(const std::string& name, const json& j) const { text(name, j.dump(2) + "\n"); }

 private:
  fs::path dir_;
};

struct Failures {
  std::vector<json> items;
  std::size_t total = 0;

  void add(json item) {
    ++total;
    if (items.size() < kMaxReportedFailures) items.push_back(std::move(item));
  }
  bool any() const { return total > 0; }
};

void write_failure(const Output& out, const RunConfig& c, const std::string& subcommand, const std::string& reason,
                   const Failures* failures = nullptr) {
  json j;
  j["subcommand"] = subcommand;
  j["reason"] = reason;
  if (failures) {
    j["violation_count"] = failures->total;
    j["violations"] = failures->items;
  }
  j["config"] = format_config(c);
  out.write_json("failure.json", j);
}

Discretization config_discretization(const RunConfig& c, const FluxModel& m) {
  return make_discretization(build_uniform_mesh({c.mass}, c.r_max, c.cells), m, parse_flux_kind(c.flux),
                             parse_boundary_policy(c.outer_boundary));
}

json convergence_json(const ConvergenceResult& r, double threshold, bool pass, const std::string& note) {
  json j;
  j["preset"] = r.preset;
  j["kind"] = r.kind;
  j["observed_order"] = num(r.observed_order);
  j["order_threshold"] = threshold;
  j["threshold_origin"] = note;
  j["pass"] = pass;
  json levels = json::array();
  for (const auto& l : r.levels) levels.push_back({{"cells", l.cells}, {"dr", l.dr}, {"tau", l.tau}, {"l1", l.l1}});
  j["levels"] = levels;
  return j;
}

std::string convergence_csv(const ConvergenceResult& r) {
  std::string s = "cells,dr,tau,l1\n";
  for (const auto& l : r.levels) s += std::to_string(l.cells) + "," + g17(l.dr) + "," + g17(l.tau) + "," + g17(l.l1) + "\n";
  return s;
}

bool all_zero_levels(const ConvergenceResult& r, double tol) {
  return std::all_of(r.levels.begin(), r.levels.end(), [tol](const ConvergenceLevel& l) { return l.l1 <= tol; });
}

constexpr const char* kPropertyNote =
    "property-based expectation for a first-order monotone scheme, frozen as a regression value";

int cmd_run(const RunConfig& c, const Output& out, std::ostream& log) {
  const FluxModel m = config_model(c);
  const StructureReport structure = check_structure(m, c.structure_samples);
  if (!structure.all_ok()) {
    write_failure(out, c, "run", "model fails the structure checks; see check-model");
    log << "model fails the structure checks\n";
    return kExitViolation;
  }
  const Discretization d = config_discretization(c, m);
  ScalarFn v0 = make_initial(c.initial, m, c.mass);

  RunOptions opts;
  opts.t_end = c.t_end;
  opts.cfl_fraction = c.cfl_fraction;
  opts.tau_scale = c.tau_scale;
  opts.snapshot_every = c.snapshot_every;

  Failures failures;
  std::string entropy_rows = "step,k,worst_residual,balance_gap,dissipation_sum\n";
  const EntropyPair quadratic = quadratic_pair(m);
  double worst_residual = -std::numeric_limits<double>::infinity();
  double worst_gap = -std::numeric_limits<double>::infinity();
  double worst_decomposition = 0.0;

  auto observer = [&](const StateVector& before, const StateVector& after, const StepReport& rep) {
    const long n = after.step_index;
    for (std::size_t i = 0; i < after.values.size(); ++i) {
      if (std::abs(after.values[i]) > 1.0) {
        failures.add({{"step", n}, {"check", "maximum_principle"}, {"cell", i}, {"value", after.values[i]}});
      }
    }
    if (!c.entropy_diagnostics) return;
    const FaceDecomposition faces = decompose_step(d, before, rep);
    const BalanceResult b = entropy_balance(d, before, after, rep, &quadratic);
    const double decomposition = convex_decomposition_check(d, before, after, rep);
    worst_decomposition = std::max(worst_decomposition, decomposition);
    worst_gap = std::max(worst_gap, b.gap);
    if (decomposition > kDecompositionTolerance) {
      failures.add({{"step", n}, {"check", "convex_decomposition"}, {"value", decomposition}});
    }
    if (b.gap > kBalanceTolerance) failures.add({{"step", n}, {"check", "entropy_balance"}, {"value", b.gap}});
    for (double k : c.kruzhkov_levels) {
      const EntropyLedger led = kruzhkov_residuals(d, before, rep, faces, k);
      worst_residual = std::max(worst_residual, led.worst_residual);
      if (led.worst_residual > kEntropyTolerance) {
        failures.add({{"step", n}, {"check", "entropy_residual"}, {"k", k}, {"value", led.worst_residual}});
      }
      entropy_rows += std::to_string(n) + "," + g17(k) + "," + g17(led.worst_residual) + "," + g17(b.gap) + "," +
                      g17(b.dissipation_sum) + "\n";
    }
  };

  Trajectory traj;
  try {
    traj = run(d, v0, opts, observer);
  } catch (const RangeError& e) {
    throw ConfigError("initial", 0, e.what());
  }

  std::string snaps = "t,r,v\n";
  for (const StateVector& s : traj.snapshots) {
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      snaps += g17(s.time) + "," + g17(d.mesh.centers[i]) + "," + g17(s.values[i]) + "\n";
    }
  }
  out.text("snapshots.csv", snaps);
  if (c.entropy_diagnostics) out.text("entropy.csv", entropy_rows);

  const StateVector& last = traj.snapshots.back();
  json j;
  j["subcommand"] = "run";
  j["model"] = m.name;
  j["flux"] = std::string(flux_name(d.flux.kind()));
  j["cells"] = c.cells;
  j["mass"] = c.mass;
  j["r_max"] = c.r_max;
  j["t_end"] = last.time;
  j["steps"] = traj.steps;
  j["tau"] = traj.tau;
  j["tau_max"] = d.tau_max;
  j["clamp_events"] = traj.clamp_events;
  j["final_min"] = *std::min_element(last.values.begin(), last.values.end());
  j["final_max"] = *std::max_element(last.values.begin(), last.values.end());
  if (c.entropy_diagnostics) {
    j["entropy"] = {{"levels", c.kruzhkov_levels},
                    {"worst_residual", num(worst_residual)},
                    {"worst_balance_gap", num(worst_gap)},
                    {"worst_decomposition", worst_decomposition}};
  }
  j["violations"] = failures.total;
  out.write_json("run_summary.json", j);
  if (failures.any()) {
    write_failure(out, c, "run", "invariant violation", &failures);
    log << failures.total << " invariant violations; see failure.json\n";
    return kExitViolation;
  }
  log << "run finished: " << traj.steps << " steps to t = " << g17(last.time) << "\n";
  return kExitOk;
}

int cmd_converge(const RunConfig& c, const Output& out, std::ostream& log) {
  const Preset p = make_preset(c.preset);
  const ConvergenceResult r = self_convergence(p, c.levels, c.base_cells);
  double threshold = p.name == "riemann" ? 0.5 : 0.8;
  bool pass = p.name == "flat" ? all_zero_levels(r, 0.0) : r.observed_order >= threshold;
  if (p.name == "flat") threshold = 0.0;
  json j = convergence_json(r, threshold, pass, kPropertyNote);
  j["t_end"] = p.t_end;
  out.write_json("convergence.json", j);
  out.text("convergence.csv", convergence_csv(r));
  log << "observed order " << g17(r.observed_order) << (pass ? " (pass)\n" : " (FAIL)\n");
  if (!pass) write_failure(out, c, "converge", "observed order below threshold");
  return pass ? kExitOk : kExitViolation;
}

int cmd_oracle(const RunConfig& c, const Output& out, std::ostream& log) {
  const Preset p = make_preset(c.preset);
  const int base = c.base_cells > 0 ? c.base_cells : p.base_cells;
  std::vector<int> cells;
  for (int l = 0; l <= c.levels; ++l) cells.push_back(base << l);
  const ConvergenceResult r = oracle_convergence(p, cells);
  const bool exact_case = p.name == "flat";
  const bool pass = exact_case ? all_zero_levels(r, 1e-13) : r.observed_order >= 0.8;
  json j = convergence_json(r, exact_case ? 0.0 : 0.8, pass, kPropertyNote);
  j["t_end"] = p.t_end;
  j["crossing_time"] = num(p.crossing_time);
  out.write_json("oracle.json", j);
  out.text("oracle.csv", convergence_csv(r));
  log << "oracle order " << g17(r.observed_order) << (pass ? " (pass)\n" : " (FAIL)\n");
  if (!pass) write_failure(out, c, "oracle", "observed order below threshold");
  return pass ? kExitOk : kExitViolation;
}

int cmd_steady_drift(const RunConfig& c, const Output& out, std::ostream& log) {
  SteadyDriftCase sc;
  sc.model = config_model(c);
  sc.mass = c.mass;
  sc.r0 = c.steady_r0;
  sc.u0 = c.steady_u0;
  sc.r_max = c.r_max;
  sc.t_end = c.t_end;
  sc.flux = parse_flux_kind(c.flux);
  sc.cfl_fraction = c.cfl_fraction;
  std::vector<int> cells;
  for (int l = 0; l < c.levels; ++l) cells.push_back(c.cells << l);
  const ConvergenceResult r = steady_drift_convergence(sc, cells);
  const bool zero = all_zero_levels(r, 0.0);
  const bool pass = zero || r.observed_order >= 0.8;
  out.write_json("drift.json", convergence_json(r, 0.8, pass, kPropertyNote));
  out.text("drift.csv", convergence_csv(r));
  log << "drift slope " << g17(r.observed_order) << (pass ? " (pass)\n" : " (FAIL)\n");
  if (!pass) write_failure(out, c, "steady-drift", "drift slope below threshold");
  return pass ? kExitOk : kExitViolation;
}

int cmd_characteristics(const RunConfig& c, const Output& out, std::ostream& log) {
  const bool interior = c.char_coordinates == "interior";
  const FluxModel m = config_model(c);
  const CharState start{0.0, 0.0, c.char_r0, c.char_u0};
  CharPath path;
  std::unique_ptr<FhatTable> table;
  if (interior) {
    path = trace_interior(c.mass, c.char_shift, start, c.char_ds, c.char_s_max, c.char_r_stop);
  } else {
    table = std::make_unique<FhatTable>(m);
    path = trace_exterior(m, c.mass, start, c.char_ds, c.char_s_max, c.char_r_stop);
  }

  auto invariant = [&](const CharState& st) {
    if (interior) return interior_invariant(c.mass, st.r, st.u);
    if (std::abs(st.u) > 1.0 - table->epsilon()) return std::numeric_limits<double>::quiet_NaN();
    return exterior_invariant(*table, c.mass, st.r, st.u);
  };
  std::string csv = "s,t,r,u,invariant\n";
  const double i0 = invariant(path.samples.front());
  double drift = 0.0;
  for (const CharState& st : path.samples) {
    const double inv = invariant(st);
    csv += g17(st.s) + "," + g17(st.t) + "," + g17(st.r) + "," + g17(st.u) + "," + g17(inv) + "\n";
    if (std::isfinite(inv) && std::isfinite(i0)) drift = std::max(drift, std::abs(inv - i0) / std::max(1.0, std::abs(i0)));
  }
  out.text("characteristics.csv", csv);

  json j;
  j["coordinates"] = c.char_coordinates;
  j["model"] = m.name;
  j["samples"] = path.samples.size();
  j["stop"] = stop_name(path.stop);
  j["step_halvings"] = path.step_halvings;
  j["invariant_start"] = num(i0);
  j["invariant_relative_drift"] = drift;
  const CharState& end = path.samples.back();
  j["end"] = {{"s", end.s}, {"t", end.t}, {"r", end.r}, {"u", end.u}};
  if (!interior && std::abs(c.char_u0) < 1.0) {
    const Fate fate = classify_fate(*table, c.mass, c.char_r0, c.char_u0);
    j["escape_velocity"] = escape_velocity(*table, c.mass, c.char_r0);
    j["fate"] = {{"kind", fate_name(fate.kind)}, {"u_limit", fate.u_limit}, {"r_limit_finite", fate.r_limit_finite}};
  }
  out.write_json("characteristics.json", j);
  log << "traced " << path.samples.size() << " samples, stop: " << stop_name(path.stop) << "\n";
  return kExitOk;
}

int cmd_steady(const RunConfig& c, const Output& out, std::ostream& log) {
  const FluxModel m = config_model(c);
  const FhatTable table(m);
  const RadialMesh mesh = build_uniform_mesh({c.mass}, c.r_max, c.cells);
  const RadiusInterval range = steady_range(table, c.mass, c.steady_r0, c.steady_u0);
  json j;
  j["r0"] = c.steady_r0;
  j["u0"] = c.steady_u0;
  j["admissible_r"] = {num(range.lo), num(range.hi)};
  std::vector<double> u;
  try {
    u = steady_profile(table, c.mass, c.steady_r0, c.steady_u0, mesh.centers);
  } catch (const RangeError& e) {
    j["error"] = e.what();
    out.write_json("steady.json", j);
    write_failure(out, c, "steady", e.what());
    log << e.what() << "\n";
    return kExitViolation;
  }
  std::string csv = "r,u\n";
  for (std::size_t i = 0; i < u.size(); ++i) csv += g17(mesh.centers[i]) + "," + g17(u[i]) + "\n";
  out.text("steady.csv", csv);
  bool monotone = true;
  for (std::size_t i = 1; i < u.size(); ++i) {
    monotone = monotone && (c.steady_u0 > 0.0 ? u[i] <= u[i - 1] : u[i] >= u[i - 1]);
  }
  j["direction"] = c.steady_u0 > 0.0 ? "decreasing" : "increasing";
  j["monotone"] = monotone;
  out.write_json("steady.json", j);
  if (!monotone) {
    write_failure(out, c, "steady", "profile is not monotone in the expected direction");
    return kExitViolation;
  }
  log << "steady profile on " << u.size() << " radii\n";
  return kExitOk;
}

json fuzz_json(const FuzzReport& r) {
  json j;
  j["trials"] = r.options.trials;
  j["seed"] = r.options.seed;
  j["cells"] = r.options.cells;
  j["max_steps"] = r.options.max_steps;
  j["levels"] = r.options.levels;
  j["tau_scale"] = r.options.tau_scale;
  j["total_steps"] = r.total_steps;
  j["worst"] = {{"bound_excess", num(r.worst_bound_excess)},
                {"entropy_residual", num(r.worst_entropy_residual)},
                {"entropy_residual_with_source", num(r.worst_source_residual)},
                {"convex_decomposition", num(r.worst_decomposition)},
                {"balance_gap", num(r.worst_balance_gap)},
                {"min_convex_coefficient", num(r.min_convex_coefficient)}};
  j["tolerances"] = {{"entropy_residual", kEntropyTolerance},
                     {"convex_decomposition", kDecompositionTolerance},
                     {"balance_gap", kBalanceTolerance},
                     {"bound_excess", 0.0}};
  json trials = json::array();
  for (const FuzzTrial& t : r.trials) {
    trials.push_back({{"index", t.index},
                      {"seed", t.seed},
                      {"model", t.model},
                      {"mass", t.mass},
                      {"r_max", t.r_max},
                      {"flux", std::string(flux_name(t.flux))},
                      {"cfl_fraction", t.cfl_fraction},
                      {"breaks", t.breaks},
                      {"values", t.values},
                      {"steps", t.steps}});
  }
  j["trial_configs"] = trials;
  json viol = json::array();
  for (std::size_t i = 0; i < r.violations.size() && i < kMaxReportedFailures; ++i) {
    const FuzzViolation& v = r.violations[i];
    viol.push_back({{"trial", v.trial}, {"step", v.step}, {"check", v.check}, {"value", num(v.value)}});
  }
  j["violation_count"] = r.violations.size();
  j["violations"] = viol;
  j["pass"] = r.ok();
  return j;
}

int cmd_fuzz(const RunConfig& c, const Output& out, std::ostream& log) {
  FuzzOptions o;
  o.trials = c.trials;
  o.seed = c.seed;
  o.cells = c.cells;
  o.max_steps = c.max_steps;
  o.levels = c.kruzhkov_levels;
  o.tau_scale = c.tau_scale;
  const FuzzReport r = fuzz_invariants(o);
  out.write_json("fuzz.json", fuzz_json(r));
  log << r.trials.size() << " trials, " << r.total_steps << " steps, " << r.violations.size() << " violations\n";
  if (!r.ok()) {
    Failures f;
    for (const FuzzViolation& v : r.violations) {
      f.add({{"trial", v.trial}, {"step", v.step}, {"check", v.check}, {"value", num(v.value)}});
    }
    write_failure(out, c, "fuzz", "invariant violation; trial_configs in fuzz.json replay each trial", &f);
    return kExitViolation;
  }
  return kExitOk;
}

int cmd_check_model(const RunConfig& c, const Output& out, std::ostream& log) {
  const FluxModel m = config_model(c);
  const StructureReport s = check_structure(m, c.structure_samples);
  const double mismatch = derivative_mismatch(m);
  const ModelBounds b = model_bounds(m, c.structure_samples);
  json j;
  j["model"] = m.name;
  j["samples"] = s.samples;
  j["boundary_roots_ok"] = s.boundary_roots_ok;
  j["boundary_nondegenerate_ok"] = s.boundary_nondegenerate_ok;
  j["interior_negative_ok"] = s.interior_negative_ok;
  j["flux_monotone_shape_ok"] = s.flux_monotone_shape_ok;
  j["worst_violation"] = num(s.worst_violation);
  j["derivative_mismatch"] = mismatch;
  j["derivatives_ok"] = mismatch <= 1e-6;
  j["max_abs_df"] = b.flux_slope;
  j["max_abs_df_plus_dh"] = b.source_slope;
  j["all_ok"] = s.all_ok() && mismatch <= 1e-6;
  out.write_json("model_check.json", j);
  log << "model '" << m.name << "': " << (s.all_ok() ? "passes" : "fails") << " the structure checks\n";
  return s.all_ok() && mismatch <= 1e-6 ? kExitOk : kExitViolation;
}

}  // namespace

std::vector<std::string> subcommand_names() {
  return {"run", "converge", "oracle", "steady-drift", "characteristics", "steady", "fuzz", "check-model"};
}

int dispatch(const std::string& subcommand, const RunConfig& config, std::ostream& log) {
  const auto names = subcommand_names();
  if (std::find(names.begin(), names.end(), subcommand) == names.end()) {
    log << "unknown subcommand '" << subcommand << "'\n";
    return kExitConfig;
  }
  const Output out(config);
  out.text("resolved_config.toml", format_config(config));
  try {
    if (subcommand == "run") return cmd_run(config, out, log);
    if (subcommand == "converge") return cmd_converge(config, out, log);
    if (subcommand == "oracle") return cmd_oracle(config, out, log);
    if (subcommand == "steady-drift") return cmd_steady_drift(config, out, log);
    if (subcommand == "characteristics") return cmd_characteristics(config, out, log);
    if (subcommand == "steady") return cmd_steady(config, out, log);
    if (subcommand == "fuzz") return cmd_fuzz(config, out, log);
    return cmd_check_model(config, out, log);
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    write_failure(out, config, subcommand, e.what());
    log << "error: " << e.what() << "\n";
    return kExitViolation;
  }
}

int cli_main(int argc, char** argv) {
  CLI::App app{"Finite volume solver for scalar balance laws on a Schwarzschild background"};
  app.require_subcommand(1);
  std::string config_path;
  for (const std::string& name : subcommand_names()) {
    app.add_subcommand(name)->add_option("config", config_path, "config file")->required();
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  const std::string subcommand = app.get_subcommands().front()->get_name();
  RunConfig config;
  try {
    config = parse_config_file(config_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  try {
    return dispatch(subcommand, config, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitViolation;
  }
}

}  // namespace hfv
