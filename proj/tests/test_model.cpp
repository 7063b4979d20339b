#include <cmath>

#include "doctest.h"
#include "hfv/errors.hpp"
#include "hfv/model.hpp"

using namespace hfv;

TEST_CASE("burgers model values") {
  const FluxModel m = burgers_model();
  CHECK(m.f(0.0) == -0.5);
  CHECK(m.source_combo(1.0) == 0.0);
  CHECK(m.source_combo(-1.0) == 0.0);
  CHECK(m.df(-0.5) == -0.5);
  CHECK(derivative_mismatch(m) <= 1e-6);
}

TEST_CASE("structure check") {
  for (int samples : {101, 3, 1001}) {
    const StructureReport rep = check_structure(burgers_model(), samples);
    CHECK(rep.all_ok());
    CHECK(rep.worst_violation <= 0.0);
  }
  CHECK(structure_grid(3) == std::vector<double>{-0.5, 0.0, 0.5});

  const FluxModel linear = polynomial_model("linear", {0.0, 1.0}, {0.0});
  const StructureReport rep = check_structure(linear, 101);
  CHECK_FALSE(rep.boundary_roots_ok);
  CHECK_FALSE(rep.all_ok());
  CHECK(rep.worst_violation > 0.0);
  CHECK_THROWS_AS(structure_grid(2), DomainError);
}

TEST_CASE("worst violation sign agrees with the interior flags") {
  // f = s^2/2 - 1/2 with h = 0.6 s^2: f + h > 0 near the ends
  const FluxModel bad = polynomial_model("bad", {-0.5, 0.0, 0.5}, {0.0, 0.0, 0.6});
  const StructureReport rep = check_structure(bad, 101);
  CHECK_FALSE(rep.interior_negative_ok);
  CHECK(rep.worst_violation > 0.0);

  const FluxModel quartic = polynomial_model("quartic", {-0.5, 0.0, 0.25, 0.0, 0.25}, {0.0});
  const StructureReport ok = check_structure(quartic, 101);
  CHECK(ok.all_ok());
  CHECK(ok.worst_violation <= 0.0);
}

TEST_CASE("polynomial model validation") {
  CHECK_THROWS_AS(polynomial_model("x", {}, {0.0}), DomainError);
  CHECK_THROWS_AS(polynomial_model("x", std::vector<double>(10, 1.0), {0.0}), DomainError);
  const FluxModel m = polynomial_model("p", {-0.5, 0.0, 0.5}, {0.0});
  CHECK(m.f(0.3) == doctest::Approx(burgers_model().f(0.3)).epsilon(1e-15));
  CHECK(m.df(0.3) == doctest::Approx(0.3));
  CHECK(m.dh(0.3) == 0.0);
}

TEST_CASE("kruzhkov pair") {
  const FluxModel m = burgers_model();
  const EntropyPair p = kruzhkov_pair(m, 0.0);
  CHECK(p.U(0.5) == 0.5);
  CHECK(p.U(0.0) == 0.0);
  CHECK(p.F(0.5) == doctest::Approx(0.125).epsilon(1e-15));
  for (double k : {-0.75, -0.25, 0.0, 0.25, 0.75}) {
    CHECK(kruzhkov_pair(m, k).F(k) == 0.0);
    CHECK(kruzhkov_pair(m, k).U(0.0) == 0.0);
  }
  CHECK(kruzhkov_pair(m, 0.25).F(-0.25) == 0.0);
  for (double v = -1.0; v <= 1.0; v += 0.05) CHECK(p.F(-v) == doctest::Approx(-p.F(v)).epsilon(1e-15));
  CHECK_THROWS_AS(kruzhkov_pair(m, 1.5), DomainError);
}

TEST_CASE("quadratic pair") {
  const FluxModel m = burgers_model();
  const EntropyPair q = quadratic_pair(m);
  CHECK(std::abs(q.F(0.6) - 0.072) <= 1e-10);
  CHECK(q.F(0.0) == 0.0);
  CHECK(q.U(-1.0) == 0.5);
  for (double v = -1.0; v <= 1.0; v += 0.125) CHECK(std::abs(q.F(v) - v * v * v / 3.0) <= 1e-13);
}

TEST_CASE("entropy flux compatibility F' = f' U'") {
  const FluxModel models[] = {burgers_model(),
                              polynomial_model("quartic", {-0.5, 0.0, 0.25, 0.0, 0.25}, {0.0}),
                              polynomial_model("tilted", {-0.5, 0.0, 0.5}, {0.0, -0.25, 0.0, 0.25})};
  constexpr double kStep = 1e-5;
  for (const FluxModel& m : models) {
    std::vector<EntropyPair> pairs{quadratic_pair(m)};
    for (double k : {-0.75, -0.25, 0.0, 0.25, 0.75}) pairs.push_back(kruzhkov_pair(m, k));
    for (const EntropyPair& p : pairs) {
      for (int i = 0; i <= 200; ++i) {
        const double v = -0.99 + 1.98 * i / 200.0;
        if (p.kind == EntropyKind::kruzhkov && std::abs(v - p.level) < 1e-3) continue;
        const double fd = (p.F(v + kStep) - p.F(v - kStep)) / (2.0 * kStep);
        CHECK(std::abs(fd - m.df(v) * p.dU(v)) <= 1e-6 * (1.0 + std::abs(m.df(v))));
      }
    }
  }
}

TEST_CASE("model bounds") {
  const ModelBounds b = model_bounds(burgers_model());
  CHECK(b.flux_slope == 1.0);
  CHECK(b.source_slope == 1.0);
  const ModelBounds q = model_bounds(polynomial_model("quartic", {-0.5, 0.0, 0.25, 0.0, 0.25}, {0.0}));
  CHECK(q.flux_slope == doctest::Approx(1.5));
}

TEST_CASE("factored f + h agrees with the plain sum") {
  const FluxModel models[] = {burgers_model(), polynomial_model("q", {-0.5, 0.0, 0.25, 0.0, 0.25}, {0.0}),
                              polynomial_model("t", {-0.5, 0.0, 0.5}, {0.0, -0.25, 0.0, 0.25}),
                              polynomial_model("lin", {0.5}, {0.25, 1.0})};
  for (const FluxModel& m : models) {
    REQUIRE(m.factored_combo);
    for (int i = -100; i <= 100; ++i) {
      const double s = i / 100.0;
      CHECK(m.source_combo_near_roots(s) == doctest::Approx(m.source_combo(s)).epsilon(1e-14).scale(1.0));
    }
  }
  // Close to a root the factored form keeps its relative accuracy.
  const FluxModel& q = models[1];
  const double x = std::ldexp(1.0, -30);
  CHECK(q.source_combo_near_roots(1.0 - x) / x == doctest::Approx(-1.5).epsilon(1e-8));
  CHECK(q.source_combo_near_roots(1.0) == 0.0);
  CHECK(q.source_combo_near_roots(-1.0) == 0.0);
}
