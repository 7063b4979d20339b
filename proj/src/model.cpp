#include "hfv/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "hfv/errors.hpp"
#include "hfv/quadrature.hpp"

namespace hfv {

double Polynomial::operator()(double s) const {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * s + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  Polynomial d;
  for (std::size_t i = 1; i < coeffs.size(); ++i) d.coeffs.push_back(coeffs[i] * static_cast<double>(i));
  if (d.coeffs.empty()) d.coeffs.push_back(0.0);
  return d;
}

FluxModel burgers_model() {
  return FluxModel{
      "burgers",
      [](double s) { return 0.5 * s * s - 0.5; },
      [](double s) { return s; },
      [](double) { return 0.0; },
      [](double) { return 0.0; },
      [](double s) { return -0.5 * ((1.0 - s) * (1.0 + s)); },
  };
}

FluxModel polynomial_model(std::string name, std::vector<double> f_coeffs, std::vector<double> h_coeffs) {
  for (const auto* c : {&f_coeffs, &h_coeffs}) {
    if (c->empty()) throw DomainError("polynomial model needs at least one coefficient");
    if (c->size() > kMaxPolynomialDegree + 1) throw DomainError("polynomial degree exceeds 8");
    for (double x : *c) {
      if (!std::isfinite(x)) throw DomainError("polynomial coefficient is not finite");
    }
  }
  Polynomial f{std::move(f_coeffs)};
  Polynomial h{std::move(h_coeffs)};
  Polynomial df = f.derivative();
  Polynomial dh = h.derivative();

  // f + h = (s^2 - 1) q(s) + r1 s + r0; the remainder is zero when both roots are exact.
  std::vector<double> c(std::max(f.coeffs.size(), h.coeffs.size()), 0.0);
  for (std::size_t i = 0; i < f.coeffs.size(); ++i) c[i] += f.coeffs[i];
  for (std::size_t i = 0; i < h.coeffs.size(); ++i) c[i] += h.coeffs[i];
  Polynomial q{std::vector<double>(c.size() > 2 ? c.size() - 2 : 1, 0.0)};
  for (std::size_t k = c.size() - 1; k >= 2; --k) {
    q.coeffs[k - 2] = c[k];
    c[k - 2] += c[k];
  }
  const double r0 = c[0];
  const double r1 = c.size() > 1 ? c[1] : 0.0;
  auto factored = [q, r0, r1](double s) { return -((1.0 - s) * (1.0 + s)) * q(s) + (r1 * s + r0); };
  return FluxModel{std::move(name), f, df, h, dh, factored};
}

std::vector<double> structure_grid(int samples) {
  if (samples < 3) throw DomainError("structure check needs at least 3 samples");
  std::vector<double> grid(samples);
  for (int i = 0; i < samples; ++i) grid[i] = -1.0 + 2.0 * (i + 1) / (samples + 1.0);
  return grid;
}

StructureReport check_structure(const FluxModel& m, int samples) {
  StructureReport rep;
  rep.samples = samples;
  const auto grid = structure_grid(samples);

  constexpr double kTol = 1e-12;
  rep.boundary_roots_ok =
      std::abs(m.source_combo(1.0)) <= kTol && std::abs(m.source_combo(-1.0)) <= kTol;
  rep.boundary_nondegenerate_ok =
      std::abs(m.df(1.0) + m.dh(1.0)) > kTol && std::abs(m.df(-1.0) + m.dh(-1.0)) > kTol;

  double worst = -std::numeric_limits<double>::infinity();
  bool negative = true;
  bool shape = true;
  for (double s : grid) {
    const double combo = m.source_combo(s);
    if (!(combo < 0.0)) negative = false;
    worst = std::max(worst, combo);
    if (s == 0.0) continue;
    // f' must be negative left of zero and positive right of it.
    const double signed_slope = s < 0.0 ? m.df(s) : -m.df(s);
    if (!(signed_slope < 0.0)) shape = false;
    worst = std::max(worst, signed_slope);
  }
  if (std::isnan(worst)) worst = std::numeric_limits<double>::infinity();
  if (worst >= 0.0) worst = std::max(worst, std::numeric_limits<double>::denorm_min());
  rep.interior_negative_ok = negative;
  rep.flux_monotone_shape_ok = shape;
  rep.worst_violation = worst;
  return rep;
}

double derivative_mismatch(const FluxModel& m) {
  constexpr int kPoints = 1001;
  constexpr double kStep = 1e-5;
  double worst = 0.0;
  for (int i = 0; i < kPoints; ++i) {
    const double s = -0.999 + 1.998 * i / (kPoints - 1.0);
    const double fd_f = (m.f(s + kStep) - m.f(s - kStep)) / (2.0 * kStep);
    const double fd_h = (m.h(s + kStep) - m.h(s - kStep)) / (2.0 * kStep);
    const double df = m.df(s);
    const double dh = m.dh(s);
    worst = std::max(worst, std::abs(df - fd_f) / (1.0 + std::abs(df)));
    worst = std::max(worst, std::abs(dh - fd_h) / (1.0 + std::abs(dh)));
  }
  return worst;
}

namespace {

double sup_abs(const ScalarFn& g, const std::vector<double>& grid) {
  std::vector<double> pts;
  pts.reserve(grid.size() + 2);
  pts.push_back(-1.0);
  pts.insert(pts.end(), grid.begin(), grid.end());
  pts.push_back(1.0);

  std::size_t best = 0;
  double best_val = -1.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double v = std::abs(g(pts[i]));
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  // Golden-section maximization of |g| on the bracket around the best sample.
  double a = pts[best == 0 ? 0 : best - 1];
  double b = pts[std::min(best + 1, pts.size() - 1)];
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - ratio * (b - a);
  double d = a + ratio * (b - a);
  double gc = std::abs(g(c));
  double gd = std::abs(g(d));
  for (int it = 0; it < 80 && b - a > 1e-15; ++it) {
    if (gc > gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - ratio * (b - a);
      gc = std::abs(g(c));
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + ratio * (b - a);
      gd = std::abs(g(d));
    }
  }
  return std::max({best_val, gc, gd});
}

}  // namespace

ModelBounds model_bounds(const FluxModel& m, int samples) {
  const auto grid = structure_grid(samples);
  ModelBounds b;
  b.flux_slope = sup_abs(m.df, grid);
  b.source_slope = sup_abs([&m](double s) { return m.df(s) + m.dh(s); }, grid);
  return b;
}

EntropyPair kruzhkov_pair(const FluxModel& m, double k) {
  if (!(k >= -1.0 && k <= 1.0)) throw DomainError("Kruzhkov level must lie in [-1, 1]");
  auto sgn = [k](double v) { return v > k ? 1.0 : (v < k ? -1.0 : 0.0); };
  const double fk = m.f(k);
  auto f = m.f;
  EntropyPair p;
  p.kind = EntropyKind::kruzhkov;
  p.level = k;
  p.U = [k](double v) { return std::abs(v - k) - std::abs(k); };
  p.dU = sgn;
  p.F = [f, fk, sgn](double v) { return sgn(v) * (f(v) - fk); };
  return p;
}

EntropyPair quadratic_pair(const FluxModel& m) {
  auto df = m.df;
  auto table = std::make_shared<const quad::SimpsonTable>(
      [df](double w) { return w * df(w); }, -1.0, 1.0, 0.0, 2048);
  EntropyPair p;
  p.kind = EntropyKind::quadratic;
  p.U = [](double v) { return 0.5 * v * v; };
  p.dU = [](double v) { return v; };
  p.F = [table](double v) { return (*table)(v); };
  return p;
}

}  // namespace hfv
