#include <cmath>
#include <limits>

#include "doctest.h"
#include "hfv/errors.hpp"
#include "hfv/geometry.hpp"

using namespace hfv;

TEST_CASE("lapse") {
  CHECK(lapse({1.0}, 2.0) == 0.0);
  CHECK(lapse({1.0}, 4.0) == 0.5);
  CHECK(lapse({0.0}, 7.3) == 1.0);
  CHECK_THROWS_AS(lapse({1.0}, 0.0), DomainError);
  for (double r = 2.01; r < 50.0; r *= 1.3) {
    CHECK(lapse({1.0}, r) > 0.0);
    CHECK(lapse({1.0}, r) < 1.0);
  }
}

TEST_CASE("uniform mesh") {
  const RadialMesh m = build_uniform_mesh({1.0}, 4.0, 2);
  CHECK(m.faces == std::vector<double>{2.0, 3.0, 4.0});
  CHECK(m.centers == std::vector<double>{2.5, 3.5});
  CHECK(m.face_weights[0] == 0.0);
  CHECK(m.face_weights[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(m.face_weights[2] == 0.5);

  const RadialMesh flat = build_uniform_mesh({0.0}, 1.0, 4);
  for (double w : flat.face_weights) CHECK(w == 1.0);
  for (double th : flat.cell_thetas) CHECK(th == 0.0);

  const RadialMesh fine = build_uniform_mesh({1.0}, 12.0, 100);
  for (double w : fine.widths) CHECK(w == doctest::Approx(0.1).epsilon(1e-12));
  for (std::size_t i = 0; i + 1 < fine.faces.size(); ++i) CHECK(fine.faces[i] < fine.faces[i + 1]);
  for (std::size_t i = 1; i < fine.face_weights.size(); ++i) {
    CHECK(fine.face_weights[i] > 0.0);
    CHECK(fine.face_weights[i] < 1.0);
  }

  CHECK_THROWS_AS(build_uniform_mesh({1.0}, 2.0, 10), DomainError);
  CHECK_THROWS_AS(build_uniform_mesh({1.0}, 12.0, 1), DomainError);
}

TEST_CASE("max timestep") {
  const FluxModel b = burgers_model();
  const RadialMesh flat = build_uniform_mesh({0.0}, 1.0, 10);
  CHECK(max_timestep(flat, b, 1.0) == doctest::Approx(0.025).epsilon(1e-14));

  const RadialMesh curved = build_uniform_mesh({1.0}, 12.0, 100);
  const double tau = max_timestep(curved, b, 1.0);
  CHECK(tau == doctest::Approx(0.03).epsilon(1e-12));

  CHECK_THROWS_AS(max_timestep(curved, b, 0.0), DomainError);
}

TEST_CASE("max timestep is nonincreasing in the Lipschitz bound and the mass") {
  const FluxModel b = burgers_model();
  const RadialMesh mesh = build_uniform_mesh({1.0}, 12.0, 50);
  double prev = std::numeric_limits<double>::infinity();
  for (double lip = 0.25; lip <= 4.0; lip *= 1.5) {
    const double tau = max_timestep(mesh, b, lip);
    CHECK(tau <= prev);
    prev = tau;
  }
  // Fixed outer radius: the flux bound only moves by rounding as M varies.
  prev = std::numeric_limits<double>::infinity();
  for (double mass = 0.0; mass <= 5.5; mass += 0.25) {
    const double tau = max_timestep(build_uniform_mesh({mass}, 12.0, 50), b, 1.0);
    CHECK(tau <= prev * (1.0 + 1e-13));
    prev = tau;
  }
}
