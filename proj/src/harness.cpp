#include "hfv/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "hfv/characteristics.hpp"
#include "hfv/entropy.hpp"
#include "hfv/errors.hpp"

namespace hfv {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Carrier {
  double r;
  double u;
};

// Characteristic ODE in coordinate time: dr/dt = a f'(u), du/dt = 2M/r^2 (f + h)(u).
Carrier rates_in_t(const FluxModel& m, double mass, const Carrier& c) {
  if (mass == 0.0) return {m.df(c.u), 0.0};
  const double a = 1.0 - 2.0 * mass / c.r;
  return {a * m.df(c.u), 2.0 * mass / (c.r * c.r) * m.source_combo(c.u)};
}

Carrier rk4_in_t(const FluxModel& m, double mass, const Carrier& c, double dt) {
  const Carrier k1 = rates_in_t(m, mass, c);
  const Carrier k2 = rates_in_t(m, mass, {c.r + 0.5 * dt * k1.r, c.u + 0.5 * dt * k1.u});
  const Carrier k3 = rates_in_t(m, mass, {c.r + 0.5 * dt * k2.r, c.u + 0.5 * dt * k2.u});
  const Carrier k4 = rates_in_t(m, mass, {c.r + dt * k3.r, c.u + dt * k3.u});
  return {c.r + dt / 6.0 * (k1.r + 2.0 * k2.r + 2.0 * k3.r + k4.r),
          c.u + dt / 6.0 * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u)};
}

constexpr double kShootingDt = 1e-3;

Carrier shoot(const FluxModel& m, double mass, const ScalarFn& v0, double r0, double t) {
  Carrier c{r0, std::clamp(v0(r0), -1.0, 1.0)};
  const int steps = std::max(1, static_cast<int>(std::ceil(t / kShootingDt)));
  const double dt = t / steps;
  for (int i = 0; i < steps; ++i) c = rk4_in_t(m, mass, c, dt);
  return c;
}

// Launch radii covering every point that can reach (2M, r_max] by time t.
std::pair<double, double> launch_range(const FluxModel& m, double mass, double r_max, double t) {
  const double reach = model_bounds(m).flux_slope * t + 1.0;
  const double lo = mass > 0.0 ? 2.0 * mass * (1.0 + 1e-10) : -reach;
  return {lo, r_max + reach};
}

}  // namespace

double shock_formation_time(const FluxModel& m, double mass, double r_max, const ScalarFn& v0, double t_horizon,
                            int samples) {
  const double lo = mass > 0.0 ? 2.0 * mass * (1.0 + 1e-6) : 0.0;
  std::vector<Carrier> cs(samples);
  for (int i = 0; i < samples; ++i) {
    const double r0 = lo + (r_max - lo) * (i + 0.5) / samples;
    cs[i] = {r0, std::clamp(v0(r0), -1.0, 1.0)};
  }
  const int steps = static_cast<int>(std::ceil(t_horizon / kShootingDt));
  const double dt = t_horizon / steps;
  for (int n = 1; n <= steps; ++n) {
    for (Carrier& c : cs) c = rk4_in_t(m, mass, c, dt);
    for (int i = 1; i < samples; ++i) {
      if (!(cs[i].r > cs[i - 1].r)) return n * dt;
    }
  }
  return kInf;
}

std::vector<double> exact_by_characteristics(const FluxModel& m, double mass, double r_max, const ScalarFn& v0,
                                             double t, const std::vector<double>& radii) {
  constexpr int kLaunches = 2000;
  const auto [lo, hi] = launch_range(m, mass, r_max, t);
  std::vector<double> starts(kLaunches + 1);
  std::vector<double> arrivals(kLaunches + 1);
  for (int j = 0; j <= kLaunches; ++j) {
    starts[j] = lo + (hi - lo) * j / kLaunches;
    arrivals[j] = shoot(m, mass, v0, starts[j], t).r;
    if (j > 0 && !(arrivals[j] > arrivals[j - 1])) {
      throw PresetInvalid("characteristics cross before t = " + std::to_string(t) + " near r = " +
                          std::to_string(arrivals[j]));
    }
  }

  std::vector<double> out;
  out.reserve(radii.size());
  for (double target : radii) {
    if (target < arrivals.front() || target > arrivals.back()) {
      throw PresetInvalid("radius " + std::to_string(target) + " is not reached by any launched characteristic");
    }
    const auto it = std::upper_bound(arrivals.begin(), arrivals.end(), target);
    const std::size_t j = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - arrivals.begin(), 1), kLaunches);
    double a = starts[j - 1];
    double b = starts[j];
    for (int it_count = 0; it_count < 200 && b - a > 1e-14 * std::max(1.0, std::abs(a)); ++it_count) {
      const double mid = 0.5 * (a + b);
      if (shoot(m, mass, v0, mid, t).r <= target) {
        a = mid;
      } else {
        b = mid;
      }
    }
    out.push_back(shoot(m, mass, v0, 0.5 * (a + b), t).u);
  }
  return out;
}

std::vector<std::string> preset_names() { return {"smooth", "riemann", "flat"}; }

Preset make_preset(const std::string& name) {
  Preset p;
  p.name = name;
  p.model = burgers_model();
  p.flux = FluxKind::godunov;
  p.cfl_fraction = 0.9;
  p.outer = BoundaryPolicy::copy();
  if (name == "smooth") {
    p.mass = 1.0;
    p.r_max = 12.0;
    p.v0 = [](double r) { return 0.5 * std::exp(-(r - 6.0) * (r - 6.0)); };
    p.initial = "gaussian:0.5:6:1";
    p.crossing_time = shock_formation_time(p.model, p.mass, p.r_max, p.v0, 5.0);
    p.t_end = std::min(1.0, 0.9 * p.crossing_time);
    p.base_cells = 100;
  } else if (name == "riemann") {
    p.mass = 1.0;
    p.r_max = 12.0;
    p.v0 = [](double r) { return r < 6.0 ? 0.8 : -0.8; };
    p.initial = "riemann:6:0.8:-0.8";
    p.crossing_time = 0.0;
    p.t_end = 1.0;
    p.base_cells = 100;
  } else if (name == "flat") {
    p.mass = 0.0;
    p.r_max = 10.0;
    p.v0 = [](double) { return 0.3; };
    p.initial = "constant:0.3";
    p.crossing_time = kInf;
    p.t_end = 1.0;
    p.base_cells = 100;
  } else {
    throw DomainError("unknown preset '" + name + "' (expected smooth, riemann or flat)");
  }
  return p;
}

std::vector<double> restrict_pairs(const RadialMesh& fine, const std::vector<double>& values) {
  if (values.size() != fine.cells() || fine.cells() % 2 != 0) {
    throw ContractError("restriction needs an even fine mesh matching the data");
  }
  std::vector<double> out(values.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double w0 = fine.widths[2 * i];
    const double w1 = fine.widths[2 * i + 1];
    // Written as an increment so equal children restrict to exactly their value.
    out[i] = values[2 * i] + w1 / (w0 + w1) * (values[2 * i + 1] - values[2 * i]);
  }
  return out;
}

double l1_distance(const RadialMesh& mesh, const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != mesh.cells() || b.size() != mesh.cells()) throw ContractError("L1 distance size mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += mesh.widths[i] * std::abs(a[i] - b[i]);
  return sum;
}

double fit_order(const std::vector<double>& dr, const std::vector<double>& err) {
  if (dr.size() != err.size() || dr.size() < 2) throw ContractError("order fit needs matching samples");
  const bool all_zero = std::all_of(err.begin(), err.end(), [](double e) { return e == 0.0; });
  if (all_zero) return kInf;
  if (std::any_of(err.begin(), err.end(), [](double e) { return !(e > 0.0); })) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < dr.size(); ++i) {
    mx += std::log(dr[i]);
    my += std::log(err[i]);
  }
  mx /= static_cast<double>(dr.size());
  my /= static_cast<double>(dr.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < dr.size(); ++i) {
    const double x = std::log(dr[i]) - mx;
    sxy += x * (std::log(err[i]) - my);
    sxx += x * x;
  }
  return sxy / sxx;
}

StateVector run_preset(const Preset& p, int cells, double* tau_out) {
  const Discretization d = make_discretization(build_uniform_mesh({p.mass}, p.r_max, cells), p.model, p.flux, p.outer);
  RunOptions opts;
  opts.t_end = p.t_end;
  opts.cfl_fraction = p.cfl_fraction;
  const Trajectory traj = run(d, p.v0, opts);
  if (tau_out) *tau_out = traj.tau;
  return traj.snapshots.back();
}

ConvergenceResult self_convergence(const Preset& p, int levels, int base_cells) {
  if (levels < 3) throw DomainError("self convergence needs at least 3 levels");
  const int n0 = base_cells > 0 ? base_cells : p.base_cells;
  ConvergenceResult res;
  res.preset = p.name;
  res.kind = "self";
  double tau = 0.0;
  StateVector coarse = run_preset(p, n0, &tau);
  std::vector<double> drs, errs;
  for (int l = 0; l < levels; ++l) {
    const int n = n0 << l;
    const RadialMesh coarse_mesh = build_uniform_mesh({p.mass}, p.r_max, n);
    const RadialMesh fine_mesh = build_uniform_mesh({p.mass}, p.r_max, 2 * n);
    double fine_tau = 0.0;
    StateVector fine = run_preset(p, 2 * n, &fine_tau);
    ConvergenceLevel lev;
    lev.cells = n;
    lev.dr = coarse_mesh.widths[0];
    lev.tau = tau;
    lev.l1 = l1_distance(coarse_mesh, coarse.values, restrict_pairs(fine_mesh, fine.values));
    res.levels.push_back(lev);
    drs.push_back(lev.dr);
    errs.push_back(lev.l1);
    coarse = std::move(fine);
    tau = fine_tau;
  }
  res.observed_order = fit_order(drs, errs);
  return res;
}

double oracle_compare(const Preset& p, int cells) {
  const RadialMesh mesh = build_uniform_mesh({p.mass}, p.r_max, cells);
  const StateVector fv = run_preset(p, cells);
  const std::vector<double> exact = exact_by_characteristics(p.model, p.mass, p.r_max, p.v0, p.t_end, mesh.centers);
  return l1_distance(mesh, fv.values, exact);
}

ConvergenceResult oracle_convergence(const Preset& p, const std::vector<int>& cells) {
  if (cells.size() < 3) throw DomainError("oracle convergence needs at least 3 levels");
  ConvergenceResult res;
  res.preset = p.name;
  res.kind = "oracle";
  std::vector<double> drs, errs;
  for (int n : cells) {
    const RadialMesh mesh = build_uniform_mesh({p.mass}, p.r_max, n);
    double tau = 0.0;
    const StateVector fv = run_preset(p, n, &tau);
    const auto exact = exact_by_characteristics(p.model, p.mass, p.r_max, p.v0, p.t_end, mesh.centers);
    ConvergenceLevel lev{n, mesh.widths[0], tau, l1_distance(mesh, fv.values, exact)};
    res.levels.push_back(lev);
    drs.push_back(lev.dr);
    errs.push_back(lev.l1);
  }
  res.observed_order = fit_order(drs, errs);
  return res;
}

namespace {

struct DriftRun {
  double drift;
  double tau;
  double dr;
};

DriftRun drift_run(const SteadyDriftCase& c, int cells) {
  const RadialMesh mesh = build_uniform_mesh({c.mass}, c.r_max, cells);
  const FhatTable table(c.model);
  const double ghost_r = c.r_max + 0.5 * mesh.widths.back();
  std::vector<double> radii = mesh.centers;
  radii.push_back(ghost_r);
  std::vector<double> profile = steady_profile(table, c.mass, c.r0, c.u0, radii);
  const double ghost = profile.back();
  profile.pop_back();

  const Discretization d = make_discretization(mesh, c.model, c.flux, BoundaryPolicy::fixed(ghost));
  StateVector start;
  start.values = profile;
  RunOptions opts;
  opts.t_end = c.t_end;
  opts.cfl_fraction = c.cfl_fraction;
  const Trajectory traj = run_from(d, start, opts);
  return {l1_distance(mesh, traj.snapshots.back().values, profile), traj.tau, mesh.widths[0]};
}

}  // namespace

double steady_drift(const SteadyDriftCase& c, int cells) { return drift_run(c, cells).drift; }

ConvergenceResult steady_drift_convergence(const SteadyDriftCase& c, const std::vector<int>& cells) {
  if (cells.size() < 3) throw DomainError("steady drift study needs at least 3 levels");
  ConvergenceResult res;
  res.preset = "steady";
  res.kind = "steady_drift";
  std::vector<double> drs, errs;
  for (int n : cells) {
    const DriftRun r = drift_run(c, n);
    res.levels.push_back({n, r.dr, r.tau, r.drift});
    drs.push_back(r.dr);
    errs.push_back(r.drift);
  }
  res.observed_order = fit_order(drs, errs);
  return res;
}

std::vector<std::string> fuzz_model_names() { return {"burgers", "quartic", "tilted", "steep"}; }

FluxModel fuzz_model(const std::string& name) {
  // Dyadic coefficients keep f(+-1) + h(+-1) exactly zero in floating point.
  if (name == "burgers") return burgers_model();
  if (name == "quartic") return polynomial_model("quartic", {-0.5, 0.0, 0.25, 0.0, 0.25}, {0.0});
  if (name == "tilted") return polynomial_model("tilted", {-0.5, 0.0, 0.5}, {0.0, -0.25, 0.0, 0.25});
  if (name == "steep") return polynomial_model("steep", {-1.0, 0.0, 1.0}, {0.0});
  throw DomainError("unknown fuzz model '" + name + "'");
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

FuzzTrial draw_trial(int index, std::uint64_t seed, const FuzzOptions& opts) {
  FuzzTrial t;
  t.index = index;
  t.seed = splitmix64(seed + static_cast<std::uint64_t>(index));
  std::mt19937_64 rng(t.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto names = fuzz_model_names();
  t.model = names[rng() % names.size()];
  t.mass = 2.0 * unit(rng);
  t.r_max = 2.0 * t.mass + 4.0 + 16.0 * unit(rng);
  t.flux = static_cast<FluxKind>(rng() % 3);
  t.cfl_fraction = 1.0 - unit(rng);  // (0, 1]
  const int pieces = 1 + static_cast<int>(rng() % 8);
  const double lo = 2.0 * t.mass;
  for (int i = 0; i + 1 < pieces; ++i) t.breaks.push_back(lo + (t.r_max - lo) * unit(rng));
  std::sort(t.breaks.begin(), t.breaks.end());
  for (int i = 0; i < pieces; ++i) {
    const double pick = unit(rng);
    // Some pieces sit exactly on the bounds, where the maximum principle is tight.
    t.values.push_back(pick < 0.1 ? 1.0 : (pick < 0.2 ? -1.0 : 2.0 * unit(rng) - 1.0));
  }
  t.steps = 1 + static_cast<long>(rng() % static_cast<std::uint64_t>(opts.max_steps));
  return t;
}

}  // namespace

FuzzReport fuzz_invariants(const FuzzOptions& opts) {
  if (opts.trials < 1) throw DomainError("fuzz needs trials >= 1");
  if (opts.cells < 2) throw DomainError("fuzz needs cells >= 2");
  if (opts.max_steps < 1) throw DomainError("fuzz needs max_steps >= 1");
  FuzzReport rep;
  rep.options = opts;
  rep.min_convex_coefficient = kInf;
  rep.worst_entropy_residual = -kInf;
  rep.worst_source_residual = -kInf;
  rep.worst_balance_gap = -kInf;

  for (int trial = 0; trial < opts.trials; ++trial) {
    const FuzzTrial t = draw_trial(trial, opts.seed, opts);
    rep.trials.push_back(t);
    const FluxModel model = fuzz_model(t.model);
    const Discretization d = make_discretization(build_uniform_mesh({t.mass}, t.r_max, opts.cells), model, t.flux);
    const EntropyPair quadratic = quadratic_pair(model);
    const double tau = opts.force_tau > 0.0 ? opts.force_tau * d.tau_max : t.cfl_fraction * opts.tau_scale * d.tau_max;

    StateVector s;
    for (double c : d.mesh.centers) {
      const auto piece = std::upper_bound(t.breaks.begin(), t.breaks.end(), c) - t.breaks.begin();
      s.values.push_back(t.values[static_cast<std::size_t>(piece)]);
    }

    auto flag = [&](long step, const char* check, double value) {
      rep.violations.push_back({trial, step, check, value});
    };
    for (long n = 1; n <= t.steps; ++n) {
      const StepResult r = step(s, d, tau);
      ++rep.total_steps;
      double excess = -kInf;
      for (double v : r.state.values) excess = std::max(excess, std::abs(v) - 1.0);
      rep.worst_bound_excess = std::max(rep.worst_bound_excess, excess);
      if (excess > 0.0) flag(n, "maximum_principle", excess);

      rep.min_convex_coefficient = std::min(rep.min_convex_coefficient, r.report.convex_coeffs_min);
      if (r.report.convex_coeffs_min < 0.0) flag(n, "convex_coefficients", r.report.convex_coeffs_min);

      const FaceDecomposition faces = decompose_step(d, s, r.report);
      double decomposition = 0.0;
      for (std::size_t i = 0; i < s.values.size(); ++i) {
        decomposition =
            std::max(decomposition, std::abs(r.state.values[i] - 0.5 * (faces.face_left[i] + faces.face_right[i])));
      }
      rep.worst_decomposition = std::max(rep.worst_decomposition, decomposition);
      if (decomposition > kDecompositionTolerance) flag(n, "convex_decomposition", decomposition);

      for (double k : opts.levels) {
        const EntropyLedger led = kruzhkov_residuals(d, s, r.report, faces, k);
        rep.worst_entropy_residual = std::max(rep.worst_entropy_residual, led.worst_residual);
        rep.worst_source_residual = std::max(rep.worst_source_residual, led.source_worst_residual);
        if (led.worst_residual > kEntropyTolerance) flag(n, "entropy_residual", led.worst_residual);
        if (led.source_worst_residual > kEntropyTolerance) flag(n, "entropy_residual_with_source", led.source_worst_residual);
      }
      const BalanceResult b = entropy_balance(d, s, r.state, r.report, &quadratic);
      rep.worst_balance_gap = std::max(rep.worst_balance_gap, b.gap);
      if (b.gap > kBalanceTolerance) flag(n, "entropy_balance", b.gap);
      s = r.state;
    }
  }
  return rep;
}

}  // namespace hfv
