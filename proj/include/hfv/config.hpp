#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "hfv/model.hpp"

namespace hfv {

// Everything a CLI invocation reads. Keys mirror the config file; see README.
struct RunConfig {
  std::string model = "burgers";     // "burgers" | "custom"
  std::vector<double> custom_f;      // [custom_model] f, ascending coefficients
  std::vector<double> custom_h;      // [custom_model] h
  double mass = 1.0;
  double r_max = 12.0;
  int cells = 200;
  std::string outer_boundary = "copy";
  std::string flux = "godunov";
  double cfl_fraction = 0.9;
  double tau_scale = 1.0;
  double t_end = 1.0;
  int snapshot_every = 0;
  std::string initial = "gaussian:0.5:6:1";
  bool entropy_diagnostics = false;
  std::vector<double> kruzhkov_levels{-0.75, -0.25, 0.0, 0.25, 0.75};
  std::uint64_t seed = 42;
  std::string output_dir = "out";
  int structure_samples = kDefaultStructureSamples;

  // [characteristics]
  std::string char_coordinates = "exterior";  // "exterior" | "interior"
  double char_r0 = 8.0;
  double char_u0 = 0.6;
  double char_ds = 1e-3;
  double char_s_max = 10.0;
  double char_r_stop = std::numeric_limits<double>::infinity();
  double char_shift = 0.0;  // R0 of the interior coordinates

  // [steady]
  double steady_r0 = 4.0;
  double steady_u0 = 0.9;

  // [harness]
  std::string preset = "smooth";
  int levels = 3;
  int base_cells = 0;  // 0: the preset's own base resolution
  int trials = 100;
  int max_steps = 2000;
};

// Parses the key = value format with [sections], applies defaults and
// validates every field. ConfigError names the key and line on failure.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

// Canonical text of a config; parsing it yields the same RunConfig.
std::string format_config(const RunConfig& c);

// Model selected by the config.
FluxModel config_model(const RunConfig& c);

// Initial data from its textual form:
//   constant:c | riemann:r:left:right | gaussian:amp:center:width | steady:r0:u0
// DomainError on malformed text or values outside [-1, 1].
ScalarFn make_initial(const std::string& text, const FluxModel& m, double mass);

}  // namespace hfv
