#include "hfv/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "hfv/errors.hpp"

namespace hfv {
namespace {

double godunov_kernel(const FluxModel& m, double u, double v) {
  if (u <= v) {
    if (u >= 0.0) return m.f(u);
    if (v <= 0.0) return m.f(v);
    return m.f(0.0);
  }
  return std::max(m.f(u), m.f(v));
}

// Case split keeps f(v, v) = f(v) exact in floating point.
double engquist_osher_kernel(const FluxModel& m, double u, double v) {
  if (u >= 0.0 && v >= 0.0) return m.f(u);
  if (u <= 0.0 && v <= 0.0) return m.f(v);
  if (u > 0.0) return m.f(u) + m.f(v) - m.f(0.0);
  return m.f(0.0);
}

double rusanov_kernel(const FluxModel& m, double speed, double u, double v) {
  return 0.5 * (m.f(u) + m.f(v)) - 0.5 * speed * (v - u);
}

void require_unimodal(const FluxModel& m) {
  if (!check_structure(m).flux_monotone_shape_ok) {
    throw UnsupportedModel("flux '" + m.name + "' is not unimodal with its minimum at 0");
  }
}

}  // namespace

std::string_view flux_name(FluxKind kind) {
  switch (kind) {
    case FluxKind::godunov: return "godunov";
    case FluxKind::engquist_osher: return "eo";
    case FluxKind::rusanov: return "rusanov";
  }
  return "?";
}

FluxKind parse_flux_kind(std::string_view name) {
  if (name == "godunov") return FluxKind::godunov;
  if (name == "eo" || name == "engquist_osher") return FluxKind::engquist_osher;
  if (name == "rusanov") return FluxKind::rusanov;
  throw DomainError("unknown flux '" + std::string(name) + "'");
}

double flux_godunov(const FluxModel& m, double u, double v) {
  require_unimodal(m);
  return godunov_kernel(m, u, v);
}

double flux_engquist_osher(const FluxModel& m, double u, double v) {
  require_unimodal(m);
  return engquist_osher_kernel(m, u, v);
}

double flux_rusanov(const FluxModel& m, double u, double v) {
  return rusanov_kernel(m, model_bounds(m).flux_slope, u, v);
}

NumericalFlux::NumericalFlux(FluxKind kind, const FluxModel& m, const ModelBounds& bounds)
    : kind_(kind), lipschitz_(bounds.flux_slope), speed_(bounds.flux_slope) {
  if (kind != FluxKind::rusanov) require_unimodal(m);
  if (!(lipschitz_ > 0.0)) throw UnsupportedModel("flux '" + m.name + "' has max|f'| = 0");
}

NumericalFlux::NumericalFlux(FluxKind kind, const FluxModel& m)
    : NumericalFlux(kind, m, model_bounds(m)) {}

double NumericalFlux::evaluate(const FluxModel& m, double u_inside, double u_outside) const {
  switch (kind_) {
    case FluxKind::godunov: return godunov_kernel(m, u_inside, u_outside);
    case FluxKind::engquist_osher: return engquist_osher_kernel(m, u_inside, u_outside);
    case FluxKind::rusanov: return rusanov_kernel(m, speed_, u_inside, u_outside);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

BoundaryPolicy parse_boundary_policy(std::string_view text) {
  if (text == "copy") return BoundaryPolicy::copy();
  constexpr std::string_view prefix = "fixed:";
  if (text.substr(0, prefix.size()) == prefix) {
    const std::string num(text.substr(prefix.size()));
    char* end = nullptr;
    const double v = std::strtod(num.c_str(), &end);
    if (num.empty() || end != num.c_str() + num.size()) {
      throw DomainError("boundary value '" + num + "' is not a number");
    }
    if (!(v >= -1.0 && v <= 1.0)) throw DomainError("fixed boundary value must lie in [-1, 1]");
    return BoundaryPolicy::fixed(v);
  }
  throw DomainError("boundary policy must be \"copy\" or \"fixed:<value>\"");
}

std::string format_boundary_policy(const BoundaryPolicy& p) {
  if (p.kind == BoundaryPolicy::Kind::copy) return "copy";
  char buf[64];
  std::snprintf(buf, sizeof buf, "fixed:%.17g", p.value);
  return buf;
}

Discretization make_discretization(RadialMesh mesh, FluxModel model, FluxKind kind, BoundaryPolicy outer,
                                   BoundaryPolicy inner) {
  const ModelBounds bounds = model_bounds(model);
  NumericalFlux flux(kind, model, bounds);
  const double tau_max = max_timestep(mesh, bounds, flux.lipschitz_bound());
  return Discretization{std::move(mesh), std::move(model), bounds, flux, outer, inner, tau_max};
}

StepResult step(const StateVector& state, const Discretization& disc, double tau) {
  const RadialMesh& mesh = disc.mesh;
  const FluxModel& m = disc.model;
  const std::size_t n = mesh.cells();
  if (state.values.size() != n) throw ContractError("state length does not match the mesh");
  if (!(tau > 0.0)) throw PreconditionError("time step must be positive");
  if (tau > disc.tau_max) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "time step %.17g exceeds the stability bound %.17g", tau, disc.tau_max);
    throw PreconditionError(buf);
  }

  const std::vector<double>& v = state.values;
  const std::vector<double>& a = mesh.face_weights;

  StepResult out;
  StepReport& rep = out.report;
  rep.tau_used = tau;
  rep.fluxes.resize(n + 1);
  rep.ghost_inner = disc.inner.ghost(v.front());
  rep.ghost_outer = disc.outer.ghost(v.back());
  rep.inner_face_read = a.front() != 0.0;

  // One evaluation per face; both neighbours read the same value.
  rep.fluxes[0] = rep.inner_face_read ? disc.flux.evaluate(m, rep.ghost_inner, v[0]) : m.f(v[0]);
  for (std::size_t i = 1; i < n; ++i) rep.fluxes[i] = disc.flux.evaluate(m, v[i - 1], v[i]);
  rep.fluxes[n] = disc.flux.evaluate(m, v[n - 1], rep.ghost_outer);

  out.state.values.resize(n);
  out.state.time = state.time + tau;
  out.state.step_index = state.step_index + 1;

  double coeff_min = std::numeric_limits<double>::infinity();
  double sum_err = 0.0;
  double source_max = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double vi = v[i];
    const double fv = m.f(vi);
    const double a_left = a[i];
    const double a_right = a[i + 1];
    const double flux_left = rep.fluxes[i];
    const double flux_right = rep.fluxes[i + 1];
    const double ratio = tau / mesh.widths[i];
    const double source = tau * mesh.cell_thetas[i];

    // Equals a_R (F_R - f) - a_L (F_L - f); this grouping is exactly F_R - F_L
    // when a_L = a_R = 1 and exactly 0 when both face fluxes equal f(v_i).
    const double divergence = a_left * (flux_right - flux_left) + (a_right - a_left) * (flux_right - fv);
    const double updated = vi - ratio * divergence + source * m.source_combo(vi);
    if (!std::isfinite(updated)) throw NumericFault("non-finite value produced at cell " + std::to_string(i));
    out.state.values[i] = updated;

    const double right_nb = i + 1 < n ? v[i + 1] : rep.ghost_outer;
    const double left_nb = i > 0 ? v[i - 1] : rep.ghost_inner;
    const double coeff_right = right_nb != vi ? -ratio * a_right * (flux_right - fv) / (right_nb - vi) : 0.0;
    const double coeff_left =
        (a_left != 0.0 && left_nb != vi) ? ratio * a_left * (flux_left - fv) / (left_nb - vi) : 0.0;
    const double coeff_self = 1.0 - coeff_right - coeff_left;
    coeff_min = std::min({coeff_min, coeff_self, coeff_right, coeff_left});
    sum_err = std::max(sum_err, std::abs(coeff_self + coeff_right + coeff_left - 1.0));
    source_max = std::max(source_max, source);
  }
  rep.convex_coeffs_min = coeff_min;
  rep.convex_sum_error = sum_err;
  rep.source_coeff = source_max;
  return out;
}

StateVector project_initial(const RadialMesh& mesh, const ScalarFn& v0, int* clamp_events) {
  static const double kNode = std::sqrt(3.0 / 5.0);
  constexpr double kOuter = 5.0 / 18.0;
  constexpr double kMiddle = 8.0 / 18.0;
  StateVector s;
  s.values.resize(mesh.cells());
  int clamps = 0;
  for (std::size_t i = 0; i < mesh.cells(); ++i) {
    const double c = mesh.centers[i];
    const double half = 0.5 * mesh.widths[i];
    const double avg = kOuter * v0(c - kNode * half) + kMiddle * v0(c) + kOuter * v0(c + kNode * half);
    if (!std::isfinite(avg)) throw NumericFault("initial data is not finite at r = " + std::to_string(c));
    const double clamped = std::clamp(avg, -1.0, 1.0);
    if (clamped != avg) ++clamps;
    s.values[i] = clamped;
  }
  if (clamp_events) *clamp_events = clamps;
  return s;
}

Trajectory run_from(const Discretization& disc, StateVector initial, const RunOptions& opts,
                    const StepObserver& observer) {
  if (!(opts.t_end > 0.0)) throw PreconditionError("t_end must be positive");
  if (!(opts.cfl_fraction > 0.0 && opts.cfl_fraction <= 1.0)) {
    throw PreconditionError("cfl_fraction must lie in (0, 1]");
  }
  Trajectory traj;
  traj.tau = opts.cfl_fraction * disc.tau_max * opts.tau_scale;
  traj.snapshots.push_back(initial);

  StateVector current = std::move(initial);
  while (current.time < opts.t_end) {
    const double remaining = opts.t_end - current.time;
    const bool last = remaining <= traj.tau * (1.0 + 1e-12);
    const double tau = last ? remaining : traj.tau;
    StepResult next = step(current, disc, tau);
    if (last) next.state.time = opts.t_end;
    if (observer) observer(current, next.state, next.report);
    current = std::move(next.state);
    ++traj.steps;
    const bool cadence = opts.snapshot_every > 0 && traj.steps % opts.snapshot_every == 0;
    if (cadence && !last) traj.snapshots.push_back(current);
    if (last) break;
  }
  traj.snapshots.push_back(current);
  return traj;
}

Trajectory run(const Discretization& disc, const ScalarFn& v0, const RunOptions& opts,
               const StepObserver& observer) {
  int clamps = 0;
  StateVector initial = project_initial(disc.mesh, v0, &clamps);
  Trajectory traj = run_from(disc, std::move(initial), opts, observer);
  traj.clamp_events = clamps;
  return traj;
}

}  // namespace hfv
