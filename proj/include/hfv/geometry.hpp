#pragma once

#include <vector>

#include "hfv/model.hpp"

namespace hfv {

// Schwarzschild background of mass M >= 0 in geometric units (light speed 1).
struct Background {
  double mass = 0.0;

  double horizon() const { return 2.0 * mass; }
};

// 1 - 2M/r. DomainError for r <= 0.
double lapse(const Background& bg, double r);

// Uniform radial mesh of (2M, r_max]. When M > 0 the innermost face sits on
// the horizon, so its weight is exactly zero and no inner boundary data is
// ever needed.
struct RadialMesh {
  Background background;
  std::vector<double> faces;         // N + 1 increasing radii
  std::vector<double> centers;       // cell midpoints
  std::vector<double> widths;        // |K|
  std::vector<double> face_weights;  // a(r_e) = 1 - 2M/r_e
  std::vector<double> cell_thetas;   // 2M / r_K^2

  std::size_t cells() const { return centers.size(); }
};

RadialMesh build_uniform_mesh(const Background& bg, double r_max, int cells);

inline constexpr double kSourceStabilityMargin = 1e-6;

// Largest time step allowed by the flux CFL condition (two faces per cell)
// and the source stability condition, the latter shrunk by 1e-6 to keep its
// inequality strict.
double max_timestep(const RadialMesh& mesh, const ModelBounds& bounds, double nf_lipschitz);
double max_timestep(const RadialMesh& mesh, const FluxModel& m, double nf_lipschitz);

}  // namespace hfv
