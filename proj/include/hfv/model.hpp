#pragma once

#include <functional>
#include <string>
#include <vector>

namespace hfv {

using ScalarFn = std::function<double(double)>;

// One balance-law instance: flux f and source profile h on [-1, 1], with
// their derivatives supplied explicitly (not differenced) so CFL constants
// stay sharp.
struct FluxModel {
  std::string name;
  ScalarFn f;
  ScalarFn df;
  ScalarFn h;
  ScalarFn dh;
  // Optional f + h in a form that keeps relative accuracy near the roots +-1.
  ScalarFn factored_combo;

  // f + h, the combination driving the solution along characteristics.
  double source_combo(double s) const { return f(s) + h(s); }
  // Same quantity, preferring factored_combo; for integrands that divide by it.
  double source_combo_near_roots(double s) const { return factored_combo ? factored_combo(s) : source_combo(s); }
};

// Dense polynomial with ascending coefficients c0 + c1 s + ... .
struct Polynomial {
  std::vector<double> coeffs;

  double operator()(double s) const;
  Polynomial derivative() const;
  std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
};

inline constexpr std::size_t kMaxPolynomialDegree = 8;
inline constexpr int kDefaultStructureSamples = 1001;

// f(s) = s^2/2 - 1/2, h = 0.
FluxModel burgers_model();

// Polynomial f and h of degree <= 8. Throws DomainError on empty or oversized input.
FluxModel polynomial_model(std::string name, std::vector<double> f_coeffs, std::vector<double> h_coeffs);

struct StructureReport {
  bool boundary_roots_ok = false;         // f(+-1) + h(+-1) = 0 within 1e-12
  bool boundary_nondegenerate_ok = false; // |f'(+-1) + h'(+-1)| > 1e-12
  bool interior_negative_ok = false;      // f + h < 0 on the sample grid
  bool flux_monotone_shape_ok = false;    // f' < 0 left of 0, f' > 0 right of 0
  // Largest sampled value of the quantities required to be negative; <= 0
  // exactly when both interior flags hold.
  double worst_violation = 0.0;
  int samples = 0;

  bool all_ok() const {
    return boundary_roots_ok && boundary_nondegenerate_ok && interior_negative_ok &&
           flux_monotone_shape_ok;
  }
};

// Equispaced interior grid s_i = -1 + 2 (i + 1) / (samples + 1). Requires samples >= 3.
std::vector<double> structure_grid(int samples);

StructureReport check_structure(const FluxModel& m, int samples = kDefaultStructureSamples);

// Max |relative| mismatch between df, dh and centered differences of f, h on
// 1001 points over [-0.999, 0.999]; the model invariant asks for <= 1e-6.
double derivative_mismatch(const FluxModel& m);

// Sup norms over [-1, 1] from the structure grid plus both endpoints, polished
// by a local golden-section search around the best sample.
struct ModelBounds {
  double flux_slope = 0.0;    // max |f'|
  double source_slope = 0.0;  // max |f' + h'|
};
ModelBounds model_bounds(const FluxModel& m, int samples = kDefaultStructureSamples);

enum class EntropyKind { kruzhkov, quadratic };

// Convex entropy U with flux F, F' = f' U'. Normalized so U(0) = 0.
struct EntropyPair {
  EntropyKind kind = EntropyKind::quadratic;
  double level = 0.0;  // Kruzhkov level k; unused for quadratic
  ScalarFn U;
  ScalarFn dU;
  ScalarFn F;
};

// U(v) = |v - k| - |k|, F(v) = sign(v - k) (f(v) - f(k)). DomainError unless k in [-1, 1].
EntropyPair kruzhkov_pair(const FluxModel& m, double k);

// U(v) = v^2 / 2, F(v) = int_0^v w f'(w) dw by cached composite Simpson (2048 panels).
EntropyPair quadratic_pair(const FluxModel& m);

}  // namespace hfv
