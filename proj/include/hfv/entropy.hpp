#pragma once

#include <vector>

#include "hfv/model.hpp"
#include "hfv/scheme.hpp"

namespace hfv {

// Crandall-Majda numerical entropy flux for the Kruzhkov entropy at level k:
//   nf(max(u,k), max(v,k)) - nf(min(u,k), min(v,k)).
// Same left/right orientation as the numerical flux.
double numerical_entropy_flux(const NumericalFlux& nf, const FluxModel& m, double k, double u, double v);

// Numerical entropy flux of the quadratic entropy v^2/2, built as the
// superposition (1/2) int_{-1}^{1} of the Kruzhkov fluxes over k and shifted
// to be consistent with quadratic_pair(m).F.
double quadratic_numerical_entropy_flux(const NumericalFlux& nf, const FluxModel& m, double u, double v);

// Per-face intermediate states of one step. In 1D each cell has a left (L)
// and right (R) face; "tilde" states carry only the face flux increment, the
// "face" states add the source and the redistribution of f(v) so that the
// new cell value is their average.
struct FaceDecomposition {
  std::vector<double> tilde_left, tilde_right;
  std::vector<double> face_left, face_right;
  std::vector<double> lambda_left, lambda_right;  // tau p_K omega_{K,e} / |K|
};

FaceDecomposition decompose_step(const Discretization& disc, const StateVector& before, const StepReport& report);

// max_K |v_K^{n+1} - (v_{K,L} + v_{K,R}) / 2|.
double convex_decomposition_check(const Discretization& disc, const StateVector& before,
                                  const StateVector& after, const StepReport& report);

struct BalanceResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;  // (lhs - rhs) / (sum of |terms|); <= 0 up to round-off
  double dissipation_sum = 0.0;
  double alpha = 1.0;
};

// Global entropy balance for U = v^2/2 (alpha = inf U'' = 1), with the outer
// boundary flux included and the source accounted for through the face states.
// Pass a prebuilt quadratic_pair(disc.model) to skip rebuilding its flux table.
BalanceResult entropy_balance(const Discretization& disc, const StateVector& before, const StateVector& after,
                              const StepReport& report, const EntropyPair* quadratic = nullptr);

struct EntropyLedger {
  double level = 0.0;
  // Per cell, the larger of its two face residuals
  //   U(vt_{K,e}) - U(v_K) + lambda_e (F_{K,e}(v_K, v_{K_e}) - F_{K,e}(v_K, v_K)),
  // which is <= 0 for a monotone flux under the CFL bound.
  std::vector<double> per_cell_residuals;
  double worst_residual = 0.0;
  // Same with the source added to the face state and bounded by
  // tau theta (f + h)(v_K) U'(face state); also <= 0.
  double source_worst_residual = 0.0;
  double global_balance_gap = 0.0;
  double dissipation_sum = 0.0;
  double alpha = 1.0;
};

EntropyLedger cell_entropy_residuals(const Discretization& disc, const StateVector& before,
                                     const StateVector& after, const StepReport& report, double k);

// Kruzhkov-only part of the ledger (balance fields left at zero); used by
// callers that evaluate several levels against one shared balance.
EntropyLedger kruzhkov_residuals(const Discretization& disc, const StateVector& before, const StepReport& report,
                                 const FaceDecomposition& faces, double k);

}  // namespace hfv
