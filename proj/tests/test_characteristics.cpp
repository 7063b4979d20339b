#include <cmath>

#include "doctest.h"
#include "hfv/characteristics.hpp"
#include "hfv/errors.hpp"

using namespace hfv;

namespace {

const FhatTable& burgers_table() {
  static const FhatTable t(burgers_model());
  return t;
}

double rel_drift(const std::vector<double>& values) {
  double worst = 0.0;
  for (double v : values) worst = std::max(worst, std::abs(v - values.front()) / std::max(1.0, std::abs(values.front())));
  return worst;
}

}  // namespace

TEST_CASE("exterior rates") {
  const FluxModel m = burgers_model();
  const CharRates edge = rhs_exterior(m, 1.0, {0.0, 0.0, 5.0, 1.0});
  CHECK(edge.du == 0.0);
  CHECK(rhs_exterior(m, 1.0, {0.0, 0.0, 5.0, -1.0}).du == 0.0);
  const CharRates flat = rhs_exterior(m, 0.0, {0.0, 0.0, 3.0, 0.4});
  CHECK(flat.du == 0.0);
  CHECK(flat.dr == 0.4);
  CHECK(flat.dt == 1.0);
  const CharRates r = rhs_exterior(m, 1.0, {0.0, 0.0, 4.0, 0.5});
  CHECK(r.du == doctest::Approx(-0.1875).epsilon(1e-15));
  CHECK(r.dr == 1.0);
  CHECK(r.dt == 4.0);
  CHECK_THROWS_AS(rhs_exterior(m, 1.0, {0.0, 0.0, 2.0, 0.5}), DomainError);
}

TEST_CASE("F^ for burgers") {
  const FhatTable& t = burgers_table();
  CHECK(fhat(t, 0.0) == 0.0);
  CHECK(fhat(t, 0.6) == doctest::Approx(std::log(0.64)).epsilon(1e-12));
  CHECK(std::abs(fhat(t, -0.6) - std::log(0.64)) <= 1e-10);
  for (int i = -999; i <= 999; i += 7) {
    const double u = i / 1000.0;
    CHECK(std::abs(fhat(t, u) - std::log1p(-u * u)) <= 1e-10);
  }
  CHECK(std::abs(fhat(t, 1.0 - 1e-8) - std::log1p(-(1.0 - 1e-8) * (1.0 - 1e-8))) <= 1e-9);
  CHECK_THROWS_AS(fhat(t, 1.0), DomainError);
  CHECK(t.plus_floor() < -20.0);
}

TEST_CASE("F^ branches are monotone for another model") {
  const FhatTable t(polynomial_model("tilted", {-0.5, 0.0, 0.5}, {0.0, -0.25, 0.0, 0.25}));
  double prev = 0.0;
  for (double u = 0.01; u < 0.999; u += 0.01) {
    const double y = fhat(t, u);
    CHECK(y < prev);
    prev = y;
  }
  prev = 0.0;
  for (double u = -0.01; u > -0.999; u -= 0.01) {
    const double y = fhat(t, u);
    CHECK(y < prev);
    prev = y;
  }
}

TEST_CASE("F^ inverse") {
  const FhatTable& t = burgers_table();
  CHECK(fhat_inverse(t, Branch::plus, std::log(0.75)) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(fhat_inverse(t, Branch::minus, std::log(0.75)) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(fhat_inverse(t, Branch::plus, 0.0) == 0.0);
  CHECK(fhat_inverse(t, Branch::minus, 0.0) == 0.0);
  CHECK_THROWS_AS(fhat_inverse(t, Branch::plus, 0.1), RangeError);
  CHECK_THROWS_AS(fhat_inverse(t, Branch::plus, -100.0), RangeError);
}

TEST_CASE("escape velocity and fate") {
  const FhatTable& t = burgers_table();
  CHECK(std::abs(escape_velocity(t, 1.0, 8.0) - 0.5) <= 1e-10);
  CHECK(std::abs(escape_velocity(t, 1.0, 4.0) - std::sqrt(0.5)) <= 1e-10);
  CHECK(escape_velocity(t, 0.0, 3.0) == 0.0);

  const Fate esc = classify_fate(t, 1.0, 8.0, 0.6);
  CHECK(esc.kind == Fate::Kind::escapes);
  CHECK_FALSE(esc.r_limit_finite);
  CHECK(esc.u_limit == doctest::Approx(std::sqrt(0.11 / 0.75)).epsilon(1e-10));
  const Fate slow = classify_fate(t, 1.0, 8.0, 0.3);
  CHECK(slow.kind == Fate::Kind::falls_in);
  CHECK(slow.u_limit == -1.0);
  CHECK(slow.r_limit_finite);
  CHECK(classify_fate(t, 1.0, 8.0, -0.4).kind == Fate::Kind::falls_in);
  CHECK(classify_fate(t, 1.0, 8.0, escape_velocity(t, 1.0, 8.0)).kind == Fate::Kind::marginal);
}

TEST_CASE("steady profiles") {
  const FhatTable& t = burgers_table();
  CHECK(steady_profile(t, 1.0, 4.0, 0.9, {4.0})[0] == 0.9);
  const double at8 = steady_profile(t, 1.0, 4.0, 0.9, {8.0})[0];
  CHECK(at8 == doctest::Approx(std::sqrt(0.715)).epsilon(1e-11));

  std::vector<double> grid;
  for (double r = 2.05; r < 40.0; r += 0.5) grid.push_back(r);
  const auto up = steady_profile(t, 1.0, 4.0, 0.9, grid);
  for (std::size_t i = 1; i < up.size(); ++i) CHECK(up[i] < up[i - 1]);

  const RadiusInterval range = steady_range(t, 1.0, 4.0, -0.5);
  CHECK(range.hi == doctest::Approx(6.0).epsilon(1e-10));
  std::vector<double> inner;
  for (double r = 2.05; r < 2.72; r += 0.05) inner.push_back(r);
  const auto down = steady_profile(t, 1.0, 2.5, -0.5, inner);
  for (std::size_t i = 1; i < down.size(); ++i) CHECK(down[i] > down[i - 1]);
  CHECK_THROWS_AS(steady_profile(t, 1.0, 4.0, -0.5, {3.0, 100.0}), RangeError);
  try {
    steady_profile(t, 1.0, 4.0, -0.5, {100.0});
  } catch (const RangeError& e) {
    CHECK(std::string(e.what()).find(", 6") != std::string::npos);
  }
  CHECK_THROWS_AS(steady_profile(t, 1.0, 4.0, 0.0, {5.0}), DomainError);
}

TEST_CASE("exterior traces") {
  const FluxModel m = burgers_model();
  const FhatTable& t = burgers_table();

  const CharPath out = trace_exterior(m, 1.0, {0.0, 0.0, 8.0, 0.6}, 1e-3, 20.0);
  std::vector<double> closed, table;
  for (const CharState& st : out.samples) {
    closed.push_back((1.0 - st.u * st.u) / (1.0 - 2.0 / st.r));
    table.push_back(exterior_invariant(t, 1.0, st.r, st.u));
  }
  CHECK(rel_drift(closed) <= 1e-8);
  CHECK(rel_drift(table) <= 1e-7);

  const CharPath flat = trace_exterior(m, 0.0, {0.0, 0.0, 5.0, 0.3}, 1e-3, 2.0);
  for (const CharState& st : flat.samples) {
    CHECK(std::abs(st.r - (5.0 + 0.3 * st.s)) <= 1e-12);
    CHECK(st.u == 0.3);
  }

  const CharPath in = trace_exterior(m, 1.0, {0.0, 0.0, 8.0, -0.1}, 1e-3, 1000.0);
  CHECK(in.stop == CharPath::Stop::horizon);
  CHECK(in.samples.back().u <= -0.99);
  CHECK(in.samples.back().r < 2.0 * (1.0 + 1e-6));
  for (const CharState& st : in.samples) CHECK(std::abs(st.u) <= 1.0);

  const CharPath far = trace_exterior(m, 1.0, {0.0, 0.0, 8.0, 0.6}, 1e-2, 1e4, 30.0);
  CHECK(far.stop == CharPath::Stop::r_stop);
}

TEST_CASE("interior coordinates") {
  const double radicand = 2.0 / 5.0;
  CHECK(h_prime_interior(1.0, 0.0, 5.0) == doctest::Approx(std::sqrt(radicand) / 0.6).epsilon(1e-14));
  CHECK(h_prime_interior(1.0, 0.5, 4.0) == doctest::Approx(1.17803).epsilon(1e-5));
  CHECK_THROWS_AS(h_prime_interior(0.25, 0.5, 10.0), DomainError);
  CHECK_THROWS_AS(h_prime_interior(1.0, 0.5, 2.0), DomainError);

  const CharPath fixed = trace_interior(1.0, 0.5, {0.0, 0.0, 4.0, 1.0}, 1e-3, 1.0);
  for (const CharState& st : fixed.samples) CHECK(st.u == 1.0);

  for (double u0 : {0.6, -0.2, 0.3}) {
    const CharPath p = trace_interior(1.0, 0.5, {0.0, 0.0, 8.0, u0}, 1e-3, 30.0);
    std::vector<double> inv;
    for (const CharState& st : p.samples) inv.push_back(interior_invariant(1.0, st.r, st.u));
    CHECK(rel_drift(inv) <= 1e-8);
  }
}

TEST_CASE("interior and exterior burgers traces share the conserved quantity") {
  const CharPath ext = trace_exterior(burgers_model(), 1.0, {0.0, 0.0, 6.0, 0.7}, 1e-3, 15.0);
  const CharPath in = trace_interior(1.0, 0.0, {0.0, 0.0, 6.0, 0.7}, 1e-3, 15.0);
  const double i0 = interior_invariant(1.0, 6.0, 0.7);
  for (const CharPath* p : {&ext, &in}) {
    for (const CharState& st : p->samples) {
      CHECK(std::abs(interior_invariant(1.0, st.r, st.u) - i0) <= 1e-8 * i0);
    }
  }
}
