#include "hfv/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hfv/errors.hpp"
#include "hfv/quadrature.hpp"

namespace hfv {

double numerical_entropy_flux(const NumericalFlux& nf, const FluxModel& m, double k, double u, double v) {
  return nf.evaluate(m, std::max(u, k), std::max(v, k)) - nf.evaluate(m, std::min(u, k), std::min(v, k));
}

double quadratic_numerical_entropy_flux(const NumericalFlux& nf, const FluxModel& m, double u, double v) {
  constexpr double kTol = 1e-14;
  const double f0 = m.f(0.0);
  const auto shift = quad::adaptive_simpson_split(
      [&](double k) { return k < 0.0 ? f0 - m.f(k) : (k > 0.0 ? m.f(k) - f0 : 0.0); }, -1.0, 1.0, {0.0}, kTol);
  const auto total = quad::adaptive_simpson_split(
      [&](double k) { return numerical_entropy_flux(nf, m, k, u, v); }, -1.0, 1.0, {u, v, 0.0}, kTol);
  return 0.5 * (total - shift);
}

FaceDecomposition decompose_step(const Discretization& disc, const StateVector& before, const StepReport& report) {
  const RadialMesh& mesh = disc.mesh;
  const FluxModel& m = disc.model;
  const std::size_t n = mesh.cells();
  if (before.values.size() != n || report.fluxes.size() != n + 1) {
    throw ContractError("state, report and mesh dimensions disagree");
  }
  constexpr double kFaces = 2.0;  // p_K, with |e| = 1
  const double tau = report.tau_used;
  FaceDecomposition d;
  for (auto* vec : {&d.tilde_left, &d.tilde_right, &d.face_left, &d.face_right, &d.lambda_left, &d.lambda_right}) {
    vec->resize(n);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double v = before.values[i];
    const double fv = m.f(v);
    const double a_left = mesh.face_weights[i];
    const double a_right = mesh.face_weights[i + 1];
    const double width = mesh.widths[i];
    // Outward normals: omega = +a at the right face, -a at the left face.
    const double lam_right = tau * kFaces * a_right / width;
    const double lam_left = -tau * kFaces * a_left / width;
    d.lambda_right[i] = lam_right;
    d.lambda_left[i] = lam_left;
    d.tilde_right[i] = v - lam_right * (report.fluxes[i + 1] - fv);
    d.tilde_left[i] = a_left != 0.0 ? v - lam_left * (report.fluxes[i] - fv) : v;

    const double redistribution = -tau / width * (a_right - a_left) * fv;
    const double source = tau * mesh.cell_thetas[i] * m.source_combo(v);
    d.face_right[i] = d.tilde_right[i] + redistribution + lam_right * fv + source;
    d.face_left[i] = d.tilde_left[i] + redistribution + lam_left * fv + source;
  }
  return d;
}

double convex_decomposition_check(const Discretization& disc, const StateVector& before,
                                  const StateVector& after, const StepReport& report) {
  const FaceDecomposition d = decompose_step(disc, before, report);
  if (after.values.size() != before.values.size()) throw ContractError("state sizes differ");
  double worst = 0.0;
  for (std::size_t i = 0; i < after.values.size(); ++i) {
    worst = std::max(worst, std::abs(after.values[i] - 0.5 * (d.face_left[i] + d.face_right[i])));
  }
  return worst;
}

namespace {

BalanceResult balance_from_faces(const Discretization& disc, const StateVector& before, const StateVector& after,
                                 const StepReport& report, const FaceDecomposition& d, const EntropyPair& quad) {
  const RadialMesh& mesh = disc.mesh;
  const FluxModel& m = disc.model;
  const std::size_t n = mesh.cells();
  if (after.values.size() != n) throw ContractError("state sizes differ");
  const double tau = report.tau_used;

  BalanceResult b;
  b.alpha = 1.0;
  double scale = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double dissipation = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = mesh.widths[i];
    const double v_new = after.values[i];
    const double v_old = before.values[i];
    const double u_new = w * quad.U(v_new);
    const double u_old = w * quad.U(v_old);
    const double jumps = 0.5 * w *
                         ((d.face_left[i] - v_new) * (d.face_left[i] - v_new) +
                          (d.face_right[i] - v_new) * (d.face_right[i] - v_new));
    const double flux_term = tau * (mesh.face_weights[i + 1] - mesh.face_weights[i]) * quad.F(v_old);
    const double r_terms = 0.5 * w *
                           ((quad.U(d.face_left[i]) - quad.U(d.tilde_left[i])) +
                            (quad.U(d.face_right[i]) - quad.U(d.tilde_right[i])));
    lhs += u_new;
    dissipation += 0.5 * b.alpha * jumps;
    rhs += u_old + flux_term + r_terms;
    scale += std::abs(u_new) + std::abs(u_old) + std::abs(flux_term) + std::abs(r_terms) + 0.5 * b.alpha * jumps;
  }

  auto boundary_flux = [&](double left, double right) {
    return left == right ? quad.F(left) : quadratic_numerical_entropy_flux(disc.flux, m, left, right);
  };
  const double outflow = tau * mesh.face_weights[n] * boundary_flux(before.values[n - 1], report.ghost_outer);
  rhs -= outflow;
  scale += std::abs(outflow);
  if (report.inner_face_read) {
    const double inflow = tau * mesh.face_weights[0] * boundary_flux(report.ghost_inner, before.values[0]);
    rhs += inflow;
    scale += std::abs(inflow);
  }

  b.dissipation_sum = dissipation;
  b.lhs = lhs + dissipation;
  b.rhs = rhs;
  b.gap = (b.lhs - b.rhs) / std::max(scale, std::numeric_limits<double>::min());
  return b;
}

}  // namespace

BalanceResult entropy_balance(const Discretization& disc, const StateVector& before, const StateVector& after,
                              const StepReport& report, const EntropyPair* quadratic) {
  const FaceDecomposition d = decompose_step(disc, before, report);
  if (quadratic) return balance_from_faces(disc, before, after, report, d, *quadratic);
  return balance_from_faces(disc, before, after, report, d, quadratic_pair(disc.model));
}

EntropyLedger kruzhkov_residuals(const Discretization& disc, const StateVector& before, const StepReport& report,
                                 const FaceDecomposition& d, double k) {
  const FluxModel& m = disc.model;
  const RadialMesh& mesh = disc.mesh;
  const EntropyPair pair = kruzhkov_pair(m, k);
  const std::size_t n = mesh.cells();

  EntropyLedger led;
  led.level = k;
  led.per_cell_residuals.resize(n);
  led.worst_residual = -std::numeric_limits<double>::infinity();
  led.source_worst_residual = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double v = before.values[i];
    const double u_old = pair.U(v);
    const double self_flux = numerical_entropy_flux(disc.flux, m, k, v, v);
    const double source = report.tau_used * mesh.cell_thetas[i] * m.source_combo(v);

    auto face = [&](double tilde, double lam, double entropy_flux) {
      const double flux_part = lam * (entropy_flux - self_flux);
      const double res = pair.U(tilde) - u_old + flux_part;
      const double with_source = tilde + source;
      const double res_src = pair.U(with_source) - u_old + flux_part - source * pair.dU(with_source);
      led.source_worst_residual = std::max(led.source_worst_residual, res_src);
      return res;
    };

    const double right_nb = i + 1 < n ? before.values[i + 1] : report.ghost_outer;
    const double res_right = face(d.tilde_right[i], d.lambda_right[i],
                                  numerical_entropy_flux(disc.flux, m, k, v, right_nb));
    double res_left = 0.0;
    if (mesh.face_weights[i] != 0.0) {
      const double left_nb = i > 0 ? before.values[i - 1] : report.ghost_inner;
      res_left = face(d.tilde_left[i], d.lambda_left[i], numerical_entropy_flux(disc.flux, m, k, left_nb, v));
    } else {
      face(d.tilde_left[i], 0.0, self_flux);
    }
    led.per_cell_residuals[i] = std::max(res_left, res_right);
    led.worst_residual = std::max(led.worst_residual, led.per_cell_residuals[i]);
  }
  return led;
}

EntropyLedger cell_entropy_residuals(const Discretization& disc, const StateVector& before,
                                     const StateVector& after, const StepReport& report, double k) {
  const FaceDecomposition d = decompose_step(disc, before, report);
  EntropyLedger led = kruzhkov_residuals(disc, before, report, d, k);
  const BalanceResult b = balance_from_faces(disc, before, after, report, d, quadratic_pair(disc.model));
  led.global_balance_gap = b.gap;
  led.dissipation_sum = b.dissipation_sum;
  led.alpha = b.alpha;
  return led;
}

}  // namespace hfv
