#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hfv/model.hpp"
#include "hfv/scheme.hpp"

namespace hfv {

// A bundled experiment: model, background, mesh extent, flux and data.
struct Preset {
  std::string name;
  FluxModel model;
  double mass = 0.0;
  double r_max = 0.0;
  FluxKind flux = FluxKind::godunov;
  double cfl_fraction = 0.9;
  BoundaryPolicy outer = BoundaryPolicy::copy();
  ScalarFn v0;
  std::string initial;  // textual form of v0, as accepted by the config
  double t_end = 1.0;
  double crossing_time = 0.0;  // first characteristic crossing; inf if none was found
  int base_cells = 100;
};

// "smooth": burgers, M = 1, r in (2, 12], v0 = 0.5 exp(-(r - 6)^2), stopped at
//           90% of the first characteristic crossing time (capped at 1).
// "riemann": burgers, M = 1, 0.8 | -0.8 at r = 6, t_end = 1.
// "flat": burgers, M = 0, v0 = 0.3, t_end = 1.
Preset make_preset(const std::string& name);
std::vector<std::string> preset_names();

// First time at which two of `samples` characteristics launched from (2M, r_max]
// cross, searched up to t_horizon; infinity if none do.
double shock_formation_time(const FluxModel& m, double mass, double r_max, const ScalarFn& v0, double t_horizon,
                            int samples = 2000);

// Exact smooth solution at time t on the given radii by shooting
// characteristics in t (RK4) and bisecting on the starting radius. Throws
// PresetInvalid when the arrival map is not monotone (characteristics crossed).
std::vector<double> exact_by_characteristics(const FluxModel& m, double mass, double r_max, const ScalarFn& v0,
                                             double t, const std::vector<double>& radii);

// Conservative restriction of a solution on 2N cells onto the N-cell mesh
// (width-weighted average of each pair of children).
std::vector<double> restrict_pairs(const RadialMesh& fine, const std::vector<double>& values);

// sum_i |K_i| |a_i - b_i|.
double l1_distance(const RadialMesh& mesh, const std::vector<double>& a, const std::vector<double>& b);

// Least-squares slope of log(err) against log(dr). Zero errors everywhere give
// +inf; any mix of zero and nonzero errors gives NaN.
double fit_order(const std::vector<double>& dr, const std::vector<double>& err);

struct ConvergenceLevel {
  int cells = 0;
  double dr = 0.0;
  double tau = 0.0;
  double l1 = 0.0;  // difference to the next finer level, or error to the exact solution
};

struct ConvergenceResult {
  std::string preset;
  std::string kind;  // "self", "oracle" or "steady_drift"
  std::vector<ConvergenceLevel> levels;
  double observed_order = 0.0;
};

// Runs N, 2N, ..., 2^levels N; level i records the restricted L1 difference
// between runs i and i + 1. Needs levels >= 3.
ConvergenceResult self_convergence(const Preset& p, int levels, int base_cells = 0);

// Final FV state of the preset on `cells` cells.
StateVector run_preset(const Preset& p, int cells, double* tau_out = nullptr);

// L1 error of the FV solution against the characteristic solution.
double oracle_compare(const Preset& p, int cells);
ConvergenceResult oracle_convergence(const Preset& p, const std::vector<int>& cells);

struct SteadyDriftCase {
  FluxModel model = burgers_model();
  double mass = 1.0;
  double r0 = 4.0;
  double u0 = 0.9;
  double r_max = 12.0;
  double t_end = 1.0;
  FluxKind flux = FluxKind::godunov;
  double cfl_fraction = 0.9;
};

// L1 distance between the state at t_end and the initial steady profile
// (sampled at cell centers, outer ghost fixed to the profile).
double steady_drift(const SteadyDriftCase& c, int cells);
ConvergenceResult steady_drift_convergence(const SteadyDriftCase& c, const std::vector<int>& cells);

struct FuzzOptions {
  int trials = 100;
  std::uint64_t seed = 42;
  int cells = 200;
  int max_steps = 2000;
  std::vector<double> levels{-0.75, -0.25, 0.0, 0.25, 0.75};
  double tau_scale = 1.0;     // multiplies the random cfl fraction
  double force_tau = 0.0;     // if > 0: tau = force_tau * tau_max, for guard tests
};

// Everything needed to replay one trial.
struct FuzzTrial {
  int index = 0;
  std::uint64_t seed = 0;
  std::string model;
  double mass = 0.0;
  double r_max = 0.0;
  FluxKind flux = FluxKind::godunov;
  double cfl_fraction = 1.0;
  std::vector<double> breaks;  // piece boundaries of v0
  std::vector<double> values;  // piece values, breaks.size() + 1 of them
  long steps = 0;
};

struct FuzzViolation {
  int trial = 0;
  long step = 0;
  std::string check;
  double value = 0.0;
};

struct FuzzReport {
  FuzzOptions options;
  std::vector<FuzzTrial> trials;
  std::vector<FuzzViolation> violations;
  long total_steps = 0;
  double worst_bound_excess = -1.0;      // max(|v|) - 1 over every step
  double worst_entropy_residual = 0.0;   // over cells, faces, levels and steps
  double worst_source_residual = 0.0;
  double worst_decomposition = 0.0;
  double worst_balance_gap = 0.0;
  double min_convex_coefficient = 0.0;

  bool ok() const { return violations.empty(); }
};

inline constexpr double kEntropyTolerance = 1e-13;
inline constexpr double kDecompositionTolerance = 1e-13;
inline constexpr double kBalanceTolerance = 1e-12;

FuzzReport fuzz_invariants(const FuzzOptions& opts);

// Models the fuzzer draws from, by name.
FluxModel fuzz_model(const std::string& name);
std::vector<std::string> fuzz_model_names();

}  // namespace hfv
