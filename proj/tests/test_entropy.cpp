#include <cmath>
#include <random>

#include "doctest.h"
#include "hfv/entropy.hpp"
#include "hfv/errors.hpp"

using namespace hfv;

namespace {

const FluxModel& quartic() {
  static const FluxModel m = polynomial_model("quartic", {-0.5, 0.0, 0.25, 0.0, 0.25}, {0.0});
  return m;
}

StateVector filled(std::size_t n, double v) {
  StateVector s;
  s.values.assign(n, v);
  return s;
}

}  // namespace

TEST_CASE("Crandall-Majda entropy flux") {
  const FluxModel m = burgers_model();
  for (FluxKind kind : {FluxKind::godunov, FluxKind::engquist_osher, FluxKind::rusanov}) {
    const NumericalFlux nf(kind, m);
    CHECK(numerical_entropy_flux(nf, m, 0.0, 0.5, 0.5) == doctest::Approx(0.125).epsilon(1e-15));
    for (double w = -1.0; w <= 1.0; w += 0.25) {
      for (double k : {-0.75, 0.0, 0.5}) {
        CHECK(numerical_entropy_flux(nf, m, k, w, w) == kruzhkov_pair(m, k).F(w));
      }
    }
    for (double u : {-0.8, 0.1, 0.9}) {
      for (double v : {-0.3, 0.6}) {
        CHECK(numerical_entropy_flux(nf, m, -1.0, u, v) == nf.evaluate(m, u, v) - m.f(-1.0));
        CHECK(numerical_entropy_flux(nf, m, 1.0, u, v) == m.f(1.0) - nf.evaluate(m, u, v));
      }
    }
  }
}

TEST_CASE("quadratic numerical entropy flux is consistent") {
  for (const FluxModel& m : {burgers_model(), quartic()}) {
    const NumericalFlux nf(FluxKind::godunov, m);
    const EntropyPair q = quadratic_pair(m);
    for (double v = -1.0; v <= 1.0; v += 0.2) {
      CHECK(std::abs(quadratic_numerical_entropy_flux(nf, m, v, v) - q.F(v)) <= 1e-12);
    }
  }
}

TEST_CASE("residuals vanish on constant and fixed-point states") {
  const Discretization flat = make_discretization(build_uniform_mesh({0.0}, 10.0, 40), burgers_model(), FluxKind::godunov);
  const StateVector c = filled(40, 0.3);
  const StepResult r = step(c, flat, flat.tau_max);
  for (double k : {-0.75, -0.25, 0.0, 0.25, 0.75}) {
    const EntropyLedger led = cell_entropy_residuals(flat, c, r.state, r.report, k);
    for (double res : led.per_cell_residuals) CHECK(res == 0.0);
  }
  CHECK(convex_decomposition_check(flat, c, r.state, r.report) == 0.0);

  const Discretization curved = make_discretization(build_uniform_mesh({1.0}, 12.0, 40), burgers_model(), FluxKind::godunov);
  const StateVector one = filled(40, 1.0);
  const StepResult r1 = step(one, curved, curved.tau_max);
  const EntropyLedger led = cell_entropy_residuals(curved, one, r1.state, r1.report, 0.0);
  for (double res : led.per_cell_residuals) CHECK(std::abs(res) <= 1e-14);
  CHECK(led.worst_residual == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(convex_decomposition_check(curved, one, r1.state, r1.report) == 0.0);
}

TEST_CASE("one Godunov step on Riemann data") {
  const Discretization d = make_discretization(build_uniform_mesh({1.0}, 12.0, 100), burgers_model(), FluxKind::godunov);
  StateVector s;
  for (double c : d.mesh.centers) s.values.push_back(c < 6.0 ? 0.8 : -0.8);
  const StepResult r = step(s, d, d.tau_max);
  for (double k : {-0.75, -0.25, 0.0, 0.25, 0.75}) {
    const EntropyLedger led = cell_entropy_residuals(d, s, r.state, r.report, k);
    CHECK(led.worst_residual <= 1e-14);
    CHECK(led.source_worst_residual <= 1e-14);
    CHECK(led.dissipation_sum >= 0.0);
    CHECK(led.global_balance_gap <= 1e-12);
    double mx = -1.0;
    for (double x : led.per_cell_residuals) mx = std::max(mx, x);
    CHECK(led.worst_residual == mx);
  }
  CHECK(convex_decomposition_check(d, s, r.state, r.report) <= 1e-13);
}

TEST_CASE("a source term evaluated at the old state would break the cell inequality") {
  // Constant c in (k, 1) with M > 0: fluxes cancel, the state moves by
  // tau theta (f + h)(c) < 0, and the old-state source term has the wrong sign.
  const FluxModel m = burgers_model();
  const Discretization d = make_discretization(build_uniform_mesh({1.0}, 12.0, 40), m, FluxKind::godunov);
  const double c = 0.5;
  const double k = 0.0;
  const StateVector s = filled(40, c);
  const StepResult r = step(s, d, d.tau_max);
  const EntropyLedger led = cell_entropy_residuals(d, s, r.state, r.report, k);
  const EntropyPair p = kruzhkov_pair(m, k);
  const FaceDecomposition faces = decompose_step(d, s, r.report);
  const double source = r.report.tau_used * d.mesh.cell_thetas[5] * m.source_combo(c);
  const double old_state_form = p.U(faces.tilde_right[5]) - p.U(c) - source * p.dU(c);
  CHECK(old_state_form > 0.0);
  CHECK(led.worst_residual <= 1e-14);
  CHECK(led.source_worst_residual <= 1e-14);
}

TEST_CASE("entropy diagnostics on random steps") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (FluxKind kind : {FluxKind::godunov, FluxKind::engquist_osher, FluxKind::rusanov}) {
    for (double mass : {0.0, 1.0}) {
      for (const BoundaryPolicy& outer : {BoundaryPolicy::copy(), BoundaryPolicy::fixed(-0.4)}) {
        const Discretization d =
            make_discretization(build_uniform_mesh({mass}, 12.0, 60), quartic(), kind, outer, BoundaryPolicy::fixed(0.6));
        const EntropyPair q = quadratic_pair(d.model);
        StateVector s;
        for (int i = 0; i < 60; ++i) s.values.push_back(unit(rng));
        for (int n = 0; n < 40; ++n) {
          const StepResult r = step(s, d, d.tau_max);
          CHECK(convex_decomposition_check(d, s, r.state, r.report) <= 1e-13);
          for (double k : {-0.75, -0.25, 0.0, 0.25, 0.75}) {
            const EntropyLedger led = cell_entropy_residuals(d, s, r.state, r.report, k);
            CHECK(led.worst_residual <= 1e-13);
            CHECK(led.source_worst_residual <= 1e-13);
          }
          const BalanceResult b = entropy_balance(d, s, r.state, r.report, &q);
          CHECK(b.gap <= 1e-12);
          CHECK(b.dissipation_sum >= 0.0);
          s = r.state;
        }
      }
    }
  }
}

TEST_CASE("dimension mismatch is a contract error") {
  const Discretization d = make_discretization(build_uniform_mesh({1.0}, 12.0, 10), burgers_model(), FluxKind::godunov);
  const StateVector s = filled(10, 0.2);
  const StepResult r = step(s, d, d.tau_max);
  CHECK_THROWS_AS(cell_entropy_residuals(d, filled(9, 0.2), r.state, r.report, 0.0), ContractError);
  CHECK_THROWS_AS(convex_decomposition_check(d, s, filled(9, 0.2), r.report), ContractError);
}
