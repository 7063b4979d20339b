#include "hfv/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hfv/errors.hpp"

namespace hfv {

double lapse(const Background& bg, double r) {
  if (!(r > 0.0)) throw DomainError("lapse requires r > 0");
  return 1.0 - 2.0 * bg.mass / r;
}

RadialMesh build_uniform_mesh(const Background& bg, double r_max, int cells) {
  if (!(bg.mass >= 0.0) || !std::isfinite(bg.mass)) throw DomainError("mass must be finite and >= 0");
  if (cells < 2) throw DomainError("mesh needs cells >= 2");
  const double r_in = bg.horizon();
  if (!(r_max > r_in) || !std::isfinite(r_max)) throw DomainError("r_max must exceed the horizon radius 2M");

  RadialMesh mesh;
  mesh.background = bg;
  const auto n = static_cast<std::size_t>(cells);
  mesh.faces.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    mesh.faces[i] = r_in + (r_max - r_in) * static_cast<double>(i) / static_cast<double>(n);
  }
  mesh.faces.front() = r_in;
  mesh.faces.back() = r_max;

  mesh.face_weights.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    // Flat space has no horizon; r = 0 is then an ordinary boundary with unit weight.
    mesh.face_weights[i] = bg.mass == 0.0 ? 1.0 : lapse(bg, mesh.faces[i]);
  }
  if (bg.mass > 0.0) mesh.face_weights.front() = 0.0;

  mesh.centers.resize(n);
  mesh.widths.resize(n);
  mesh.cell_thetas.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    mesh.centers[i] = 0.5 * (mesh.faces[i] + mesh.faces[i + 1]);
    mesh.widths[i] = mesh.faces[i + 1] - mesh.faces[i];
    const double rc = mesh.centers[i];
    mesh.cell_thetas[i] = 2.0 * bg.mass / (rc * rc);
  }
  return mesh;
}

double max_timestep(const RadialMesh& mesh, const ModelBounds& bounds, double nf_lipschitz) {
  if (mesh.cells() < 2) throw DomainError("max_timestep needs a mesh with at least 2 cells");
  if (!(nf_lipschitz > 0.0)) throw DomainError("numerical flux Lipschitz bound must be positive");
  constexpr double kFacesPerCell = 2.0;
  const double max_weight = *std::max_element(mesh.face_weights.begin(), mesh.face_weights.end());
  const double min_width = *std::min_element(mesh.widths.begin(), mesh.widths.end());
  const double tau_flux = min_width / (2.0 * kFacesPerCell * nf_lipschitz * max_weight);

  const double max_theta = *std::max_element(mesh.cell_thetas.begin(), mesh.cell_thetas.end());
  double tau_source = std::numeric_limits<double>::infinity();
  if (max_theta > 0.0 && bounds.source_slope > 0.0) {
    tau_source = 1.0 / (2.0 * max_theta * bounds.source_slope) * (1.0 - kSourceStabilityMargin);
  }
  return std::min(tau_flux, tau_source);
}

double max_timestep(const RadialMesh& mesh, const FluxModel& m, double nf_lipschitz) {
  return max_timestep(mesh, model_bounds(m), nf_lipschitz);
}

}  // namespace hfv
