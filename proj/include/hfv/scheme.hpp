#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "hfv/geometry.hpp"
#include "hfv/model.hpp"

namespace hfv {

enum class FluxKind { godunov, engquist_osher, rusanov };

std::string_view flux_name(FluxKind kind);  // "godunov" | "eo" | "rusanov"
FluxKind parse_flux_kind(std::string_view name);

// Two-point fluxes in left/right orientation: u is the value left of the
// face, v the value right of it. Godunov and Engquist-Osher assume the
// unimodal shape (f decreasing then increasing, minimum at 0) and throw
// UnsupportedModel when the model's sampled shape check fails.
double flux_godunov(const FluxModel& m, double u, double v);
double flux_engquist_osher(const FluxModel& m, double u, double v);
// Rusanov with global speed max|f'| over [-1, 1].
double flux_rusanov(const FluxModel& m, double u, double v);

// A monotone, consistent two-point flux bound to one model. The Lipschitz
// bound is the supremum of the difference quotient over [-1,1]^2, which is
// max|f'| for all three kinds.
class NumericalFlux {
 public:
  NumericalFlux(FluxKind kind, const FluxModel& m, const ModelBounds& bounds);
  NumericalFlux(FluxKind kind, const FluxModel& m);

  FluxKind kind() const { return kind_; }
  double lipschitz_bound() const { return lipschitz_; }

  // u_inside is the value of the cell left of a right-hand face.
  double evaluate(const FluxModel& m, double u_inside, double u_outside) const;

 private:
  FluxKind kind_;
  double lipschitz_;
  double speed_;  // Rusanov dissipation speed
};

// Ghost-cell policy for a mesh end. Copy repeats the adjacent cell value.
struct BoundaryPolicy {
  enum class Kind { copy, fixed };
  Kind kind = Kind::copy;
  double value = 0.0;

  static BoundaryPolicy copy() { return {}; }
  static BoundaryPolicy fixed(double v) { return {Kind::fixed, v}; }
  double ghost(double adjacent) const { return kind == Kind::copy ? adjacent : value; }
};

// "copy" or "fixed:<value>" with value in [-1, 1].
BoundaryPolicy parse_boundary_policy(std::string_view text);
std::string format_boundary_policy(const BoundaryPolicy& p);

// Everything a time step needs, with the admissible step cached.
struct Discretization {
  RadialMesh mesh;
  FluxModel model;
  ModelBounds bounds;
  NumericalFlux flux;
  BoundaryPolicy outer;
  // Only read when the innermost face weight is nonzero (flat space).
  BoundaryPolicy inner;
  double tau_max = 0.0;
};

Discretization make_discretization(RadialMesh mesh, FluxModel model, FluxKind kind,
                                   BoundaryPolicy outer = BoundaryPolicy::copy(),
                                   BoundaryPolicy inner = BoundaryPolicy::copy());

struct StateVector {
  std::vector<double> values;
  double time = 0.0;
  long step_index = 0;
};

// Coefficients of the update written as A_K v_K + sum_e A_{K,e} v_{K_e} + B_K (f + h)(v_K).
struct StepReport {
  double convex_coeffs_min = 0.0;     // smallest A_K or A_{K,e}
  double convex_sum_error = 0.0;      // max |A_K + sum_e A_{K,e} - 1|
  double source_coeff = 0.0;          // max B_K = tau theta_K
  std::vector<double> fluxes;         // one value per face, N + 1
  double ghost_inner = 0.0;
  double ghost_outer = 0.0;
  bool inner_face_read = false;       // false when the inner face weight is exactly 0
  double tau_used = 0.0;
};

struct StepResult {
  StateVector state;
  StepReport report;
};

// One explicit update
//   v_i' = v_i - tau/|K_i| [a_R (F_R - f(v_i)) - a_L (F_L - f(v_i))] + tau theta_i (f + h)(v_i).
// PreconditionError if tau exceeds the cached bound, NumericFault on NaN/inf.
StepResult step(const StateVector& state, const Discretization& disc, double tau);

// Cell averages of v0 by 3-point Gauss quadrature, clamped into [-1, 1].
StateVector project_initial(const RadialMesh& mesh, const ScalarFn& v0, int* clamp_events = nullptr);

struct RunOptions {
  double t_end = 1.0;
  double cfl_fraction = 0.9;
  // Multiplies the step after cfl_fraction; values above 1/cfl_fraction break
  // the CFL bound and make step() throw. Used to exercise that guard.
  double tau_scale = 1.0;
  int snapshot_every = 0;  // 0: initial and final snapshots only
};

struct Trajectory {
  std::vector<StateVector> snapshots;
  int clamp_events = 0;
  long steps = 0;
  double tau = 0.0;
};

using StepObserver =
    std::function<void(const StateVector& before, const StateVector& after, const StepReport& report)>;

Trajectory run(const Discretization& disc, const ScalarFn& v0, const RunOptions& opts,
               const StepObserver& observer = {});

// Same, starting from already projected cell averages.
Trajectory run_from(const Discretization& disc, StateVector initial, const RunOptions& opts,
                    const StepObserver& observer = {});

}  // namespace hfv
