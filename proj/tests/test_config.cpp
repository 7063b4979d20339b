#include <cmath>

#include "doctest.h"
#include "hfv/config.hpp"
#include "hfv/errors.hpp"

using namespace hfv;

namespace {

// Returns the key a rejected config names, or "" if it parsed.
std::string rejected_key(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "";
}

}  // namespace

TEST_CASE("empty config gives the defaults") {
  const RunConfig c = parse_config_text("");
  CHECK(c.model == "burgers");
  CHECK(c.mass == 1.0);
  CHECK(c.r_max == 12.0);
  CHECK(c.cells == 200);
  CHECK(c.flux == "godunov");
  CHECK(c.cfl_fraction == 0.9);
  CHECK(c.seed == 42u);
  CHECK(c.kruzhkov_levels.size() == 5u);
  CHECK(std::isinf(c.char_r_stop));
}

TEST_CASE("sections, comments and arrays") {
  const RunConfig c = parse_config_text(
      "# comment\n"
      "model = \"custom\"  # trailing\n"
      "cells = 64\n"
      "entropy_diagnostics = true\n"
      "kruzhkov_levels = [0.5, -0.5]\n"
      "[custom_model]\n"
      "f = [-0.5, 0, 0.5]\n"
      "h = [0]\n"
      "[characteristics]\n"
      "u0 = -0.25\n"
      "[harness]\n"
      "preset = \"riemann\"\n");
  CHECK(c.model == "custom");
  CHECK(c.cells == 64);
  CHECK(c.entropy_diagnostics);
  CHECK(c.kruzhkov_levels == std::vector<double>{0.5, -0.5});
  CHECK(c.custom_f == std::vector<double>{-0.5, 0.0, 0.5});
  CHECK(c.char_u0 == -0.25);
  CHECK(c.preset == "riemann");
  CHECK(config_model(c).name == "custom");
}

TEST_CASE("rejected configs name the key and line") {
  try {
    parse_config_text("mass = 1\ncells = 1\n");
    FAIL("cells = 1 accepted");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "cells");
    CHECK(e.line() == 2);
  }
  CHECK(rejected_key("fluxx = \"godunov\"\n") == "fluxx");
  CHECK(rejected_key("tau_scale = 1.5\n") == "tau_scale");
  CHECK(rejected_key("cells = \"many\"\n") == "cells");
  CHECK(rejected_key("cells = 10\ncells = 20\n") == "cells");
  CHECK(rejected_key("flux = \"roe\"\n") == "flux");
  CHECK(rejected_key("r_max = 1.5\n") == "r_max");
  CHECK(rejected_key("initial = \"constant:2\"\n") == "initial");
  CHECK(rejected_key("model = \"custom\"\n") == "custom_model.f");
  CHECK(rejected_key("[custom_model]\nf = [1]\nh = [0]\n") == "custom_model.f");
  CHECK(rejected_key("[characteristics]\ncoordinates = \"interior\"\n") == "");
  CHECK_THROWS_AS(parse_config_text("[nowhere]\nx = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("cells 10\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_file("/nonexistent/config.toml"), ConfigError);
}

TEST_CASE("format_config round trips") {
  RunConfig c = parse_config_text(
      "model = \"custom\"\nmass = 0.75\nt_end = 0.1\n[custom_model]\nf = [-0.5, 0, 0.5]\nh = [0.125, 0, -0.125]\n");
  c.cfl_fraction = 0.1 + 0.2;
  const std::string text = format_config(c);
  const RunConfig back = parse_config_text(text);
  CHECK(format_config(back) == text);
  CHECK(back.cfl_fraction == c.cfl_fraction);
  CHECK(back.custom_h == c.custom_h);
}

TEST_CASE("initial data forms") {
  const FluxModel m = burgers_model();
  CHECK(make_initial("constant:0.25", m, 1.0)(7.0) == 0.25);
  const ScalarFn r = make_initial("riemann:6:0.8:-0.8", m, 1.0);
  CHECK(r(5.9) == 0.8);
  CHECK(r(6.1) == -0.8);
  CHECK(make_initial("gaussian:0.5:6:1", m, 1.0)(6.0) == 0.5);
  const ScalarFn s = make_initial("steady:4:0.9", m, 1.0);
  CHECK(s(4.0) == doctest::Approx(0.9).epsilon(1e-9));
  CHECK_THROWS_AS(make_initial("wave:1", m, 1.0), DomainError);
  CHECK_THROWS_AS(make_initial("constant:1.5", m, 1.0), DomainError);
  CHECK_THROWS_AS(make_initial("gaussian:0.5:6", m, 1.0), DomainError);
}
