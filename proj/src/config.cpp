#include "hfv/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "hfv/characteristics.hpp"
#include "hfv/errors.hpp"
#include "hfv/harness.hpp"
#include "hfv/scheme.hpp"

namespace hfv {
namespace {

enum class Kind { number, string, boolean, array };

struct RawValue {
  Kind kind = Kind::number;
  double number = 0.0;
  std::string text;
  bool flag = false;
  std::vector<double> items;
  int line = 0;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && std::isfinite(out);
}

std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

RawValue parse_value(const std::string& key, const std::string& text, int line) {
  RawValue v;
  v.line = line;
  if (text.empty()) throw ConfigError(key, line, "missing value");
  if (text.front() == '"') {
    if (text.size() < 2 || text.back() != '"') throw ConfigError(key, line, "unterminated string");
    v.kind = Kind::string;
    for (std::size_t i = 1; i + 1 < text.size(); ++i) {
      if (text[i] == '\\' && i + 2 < text.size()) ++i;
      v.text.push_back(text[i]);
    }
    return v;
  }
  if (text == "true" || text == "false") {
    v.kind = Kind::boolean;
    v.flag = text == "true";
    return v;
  }
  if (text.front() == '[') {
    if (text.back() != ']') throw ConfigError(key, line, "unterminated array");
    v.kind = Kind::array;
    const std::string body = trim(text.substr(1, text.size() - 2));
    if (body.empty()) return v;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
      double x = 0.0;
      if (!parse_number(trim(item), x)) throw ConfigError(key, line, "array items must be numbers");
      v.items.push_back(x);
    }
    return v;
  }
  if (!parse_number(text, v.number)) throw ConfigError(key, line, "cannot read value '" + text + "'");
  v.kind = Kind::number;
  return v;
}

const std::set<std::string> kSections{"custom_model", "characteristics", "steady", "harness"};

std::map<std::string, RawValue> tokenize(const std::string& text) {
  std::map<std::string, RawValue> out;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(strip_comment(raw));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(s, line, "malformed section header");
      section = trim(s.substr(1, s.size() - 2));
      if (!kSections.count(section)) throw ConfigError(section, line, "unknown section");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(s, line, "expected key = value");
    const std::string key = trim(s.substr(0, eq));
    if (key.empty()) throw ConfigError(key, line, "empty key");
    const std::string full = section.empty() ? key : section + "." + key;
    if (out.count(full)) throw ConfigError(full, line, "duplicate key");
    out[full] = parse_value(full, trim(s.substr(eq + 1)), line);
  }
  return out;
}

struct Binder {
  std::map<std::string, RawValue>& raw;

  const RawValue* find(const std::string& key) const {
    const auto it = raw.find(key);
    return it == raw.end() ? nullptr : &it->second;
  }

  void number(const std::string& key, double& dst) {
    if (const RawValue* v = find(key)) {
      if (v->kind != Kind::number) throw ConfigError(key, v->line, "expected a number");
      dst = v->number;
    }
  }
  void integer(const std::string& key, int& dst) {
    if (const RawValue* v = find(key)) {
      if (v->kind != Kind::number || v->number != std::floor(v->number) || std::abs(v->number) > 2e9) {
        throw ConfigError(key, v->line, "expected an integer");
      }
      dst = static_cast<int>(v->number);
    }
  }
  void unsigned64(const std::string& key, std::uint64_t& dst) {
    if (const RawValue* v = find(key)) {
      if (v->kind != Kind::number || v->number != std::floor(v->number) || v->number < 0.0 || v->number > 9e15) {
        throw ConfigError(key, v->line, "expected a non-negative integer below 9e15");
      }
      dst = static_cast<std::uint64_t>(v->number);
    }
  }
  void string(const std::string& key, std::string& dst) {
    if (const RawValue* v = find(key)) {
      if (v->kind != Kind::string) throw ConfigError(key, v->line, "expected a quoted string");
      dst = v->text;
    }
  }
  void boolean(const std::string& key, bool& dst) {
    if (const RawValue* v = find(key)) {
      if (v->kind != Kind::boolean) throw ConfigError(key, v->line, "expected true or false");
      dst = v->flag;
    }
  }
  void array(const std::string& key, std::vector<double>& dst) {
    if (const RawValue* v = find(key)) {
      if (v->kind != Kind::array) throw ConfigError(key, v->line, "expected an array of numbers");
      dst = v->items;
    }
  }
  int line_of(const std::string& key) const {
    const RawValue* v = find(key);
    return v ? v->line : 0;
  }
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  if (!s.empty() && s.back() == sep) parts.push_back("");
  return parts;
}

std::vector<double> numbers_after_tag(const std::vector<std::string>& parts, std::size_t count,
                                      const std::string& form) {
  if (parts.size() != count + 1) throw DomainError("initial data must look like " + form);
  std::vector<double> out;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    double x = 0.0;
    if (!parse_number(parts[i], x)) throw DomainError("'" + parts[i] + "' is not a number in " + form);
    out.push_back(x);
  }
  return out;
}

void require_unit(double v, const std::string& what) {
  if (!(v >= -1.0 && v <= 1.0)) throw DomainError(what + " must lie in [-1, 1]");
}

void validate(const RunConfig& c, const Binder& b) {
  auto fail = [&](const std::string& key, const std::string& msg) { throw ConfigError(key, b.line_of(key), msg); };

  if (c.model != "burgers" && c.model != "custom") fail("model", "must be \"burgers\" or \"custom\"");
  const bool has_custom = b.find("custom_model.f") || b.find("custom_model.h");
  if (c.model == "custom") {
    if (!b.find("custom_model.f")) fail("custom_model.f", "required when model = \"custom\"");
    if (!b.find("custom_model.h")) fail("custom_model.h", "required when model = \"custom\"");
    for (const char* key : {"custom_model.f", "custom_model.h"}) {
      const auto& coeffs = std::string(key) == "custom_model.f" ? c.custom_f : c.custom_h;
      if (coeffs.empty()) fail(key, "needs at least one coefficient");
      if (coeffs.size() > kMaxPolynomialDegree + 1) fail(key, "polynomial degree must be <= 8");
    }
  } else if (has_custom) {
    fail("custom_model.f", "given but model is not \"custom\"");
  }
  if (!(c.mass >= 0.0)) fail("mass", "must be >= 0");
  if (!(c.r_max > 2.0 * c.mass)) fail("r_max", "must exceed the horizon radius 2 * mass");
  if (c.cells < 2) fail("cells", "cells >= 2 required");
  try {
    parse_boundary_policy(c.outer_boundary);
  } catch (const DomainError& e) {
    fail("outer_boundary", e.what());
  }
  try {
    parse_flux_kind(c.flux);
  } catch (const DomainError&) {
    fail("flux", "must be \"godunov\", \"eo\" or \"rusanov\"");
  }
  if (!(c.cfl_fraction > 0.0 && c.cfl_fraction <= 1.0)) fail("cfl_fraction", "must lie in (0, 1]");
  if (!(c.tau_scale > 0.0 && c.tau_scale <= 1.0)) {
    fail("tau_scale", "must lie in (0, 1]; larger values break the CFL bound");
  }
  if (!(c.t_end > 0.0)) fail("t_end", "must be > 0");
  if (c.snapshot_every < 0) fail("snapshot_every", "must be >= 0");
  try {
    make_initial(c.initial, burgers_model(), c.mass);
  } catch (const DomainError& e) {
    fail("initial", e.what());
  }
  for (double k : c.kruzhkov_levels) {
    if (!(k >= -1.0 && k <= 1.0)) fail("kruzhkov_levels", "levels must lie in [-1, 1]");
  }
  if (c.output_dir.empty()) fail("output_dir", "must not be empty");
  if (c.structure_samples < 3) fail("structure_samples", "must be >= 3");

  if (c.char_coordinates != "exterior" && c.char_coordinates != "interior") {
    fail("characteristics.coordinates", "must be \"exterior\" or \"interior\"");
  }
  if (c.char_coordinates == "interior" && c.model != "burgers") {
    fail("characteristics.coordinates", "interior coordinates are only defined for model = \"burgers\"");
  }
  if (!(c.char_r0 > 2.0 * c.mass)) fail("characteristics.r0", "must exceed 2 * mass");
  if (!(std::abs(c.char_u0) <= 1.0)) fail("characteristics.u0", "must lie in [-1, 1]");
  if (!(c.char_ds > 0.0)) fail("characteristics.ds", "must be > 0");
  if (!(c.char_s_max > 0.0)) fail("characteristics.s_max", "must be > 0");
  if (!(c.char_r_stop > c.char_r0)) fail("characteristics.r_stop", "must exceed characteristics.r0");

  if (!(c.steady_r0 > 2.0 * c.mass)) fail("steady.r0", "must exceed 2 * mass");
  if (!(std::abs(c.steady_u0) < 1.0) || c.steady_u0 == 0.0) fail("steady.u0", "must lie in (-1, 0) or (0, 1)");

  bool known_preset = false;
  for (const auto& name : preset_names()) known_preset = known_preset || name == c.preset;
  if (!known_preset) fail("harness.preset", "must be \"smooth\", \"riemann\" or \"flat\"");
  if (c.levels < 3) fail("harness.levels", "must be >= 3");
  if (c.base_cells != 0 && c.base_cells < 2) fail("harness.base_cells", "must be 0 (preset default) or >= 2");
  if (c.trials < 1) fail("harness.trials", "must be >= 1");
  if (c.max_steps < 1) fail("harness.max_steps", "must be >= 1");
}

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out.push_back('\\');
    out.push_back(ch);
  }
  return out + "\"";
}

std::string array_text(const std::vector<double>& xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + g17(xs[i]);
  return out + "]";
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  std::map<std::string, RawValue> raw = tokenize(text);
  static const std::set<std::string> known{
      "model", "mass", "r_max", "cells", "outer_boundary", "flux", "cfl_fraction", "tau_scale", "t_end",
      "snapshot_every", "initial", "entropy_diagnostics", "kruzhkov_levels", "seed", "output_dir",
      "structure_samples", "custom_model.f", "custom_model.h", "characteristics.coordinates", "characteristics.r0",
      "characteristics.u0", "characteristics.ds", "characteristics.s_max", "characteristics.r_stop",
      "characteristics.shift", "steady.r0", "steady.u0", "harness.preset", "harness.levels", "harness.base_cells",
      "harness.trials", "harness.max_steps"};
  for (const auto& [key, value] : raw) {
    if (!known.count(key)) throw ConfigError(key, value.line, "unknown key");
  }

  RunConfig c;
  Binder b{raw};
  b.string("model", c.model);
  b.array("custom_model.f", c.custom_f);
  b.array("custom_model.h", c.custom_h);
  b.number("mass", c.mass);
  b.number("r_max", c.r_max);
  b.integer("cells", c.cells);
  b.string("outer_boundary", c.outer_boundary);
  b.string("flux", c.flux);
  b.number("cfl_fraction", c.cfl_fraction);
  b.number("tau_scale", c.tau_scale);
  b.number("t_end", c.t_end);
  b.integer("snapshot_every", c.snapshot_every);
  b.string("initial", c.initial);
  b.boolean("entropy_diagnostics", c.entropy_diagnostics);
  b.array("kruzhkov_levels", c.kruzhkov_levels);
  b.unsigned64("seed", c.seed);
  b.string("output_dir", c.output_dir);
  b.integer("structure_samples", c.structure_samples);
  b.string("characteristics.coordinates", c.char_coordinates);
  b.number("characteristics.r0", c.char_r0);
  b.number("characteristics.u0", c.char_u0);
  b.number("characteristics.ds", c.char_ds);
  b.number("characteristics.s_max", c.char_s_max);
  b.number("characteristics.r_stop", c.char_r_stop);
  b.number("characteristics.shift", c.char_shift);
  b.number("steady.r0", c.steady_r0);
  b.number("steady.u0", c.steady_u0);
  b.string("harness.preset", c.preset);
  b.integer("harness.levels", c.levels);
  b.integer("harness.base_cells", c.base_cells);
  b.integer("harness.trials", c.trials);
  b.integer("harness.max_steps", c.max_steps);
  validate(c, b);
  if (c.model == "custom") {
    try {
      polynomial_model("custom", c.custom_f, c.custom_h);
    } catch (const DomainError& e) {
      throw ConfigError("custom_model.f", b.line_of("custom_model.f"), e.what());
    }
  }
  return c;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", 0, "cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string format_config(const RunConfig& c) {
  std::ostringstream out;
  out << "model = " << quoted(c.model) << "\n";
  out << "mass = " << g17(c.mass) << "\n";
  out << "r_max = " << g17(c.r_max) << "\n";
  out << "cells = " << c.cells << "\n";
  out << "outer_boundary = " << quoted(c.outer_boundary) << "\n";
  out << "flux = " << quoted(c.flux) << "\n";
  out << "cfl_fraction = " << g17(c.cfl_fraction) << "\n";
  out << "tau_scale = " << g17(c.tau_scale) << "\n";
  out << "t_end = " << g17(c.t_end) << "\n";
  out << "snapshot_every = " << c.snapshot_every << "\n";
  out << "initial = " << quoted(c.initial) << "\n";
  out << "entropy_diagnostics = " << (c.entropy_diagnostics ? "true" : "false") << "\n";
  out << "kruzhkov_levels = " << array_text(c.kruzhkov_levels) << "\n";
  out << "seed = " << c.seed << "\n";
  out << "output_dir = " << quoted(c.output_dir) << "\n";
  out << "structure_samples = " << c.structure_samples << "\n";
  if (c.model == "custom") {
    out << "\n[custom_model]\n";
    out << "f = " << array_text(c.custom_f) << "\n";
    out << "h = " << array_text(c.custom_h) << "\n";
  }
  out << "\n[characteristics]\n";
  out << "coordinates = " << quoted(c.char_coordinates) << "\n";
  out << "r0 = " << g17(c.char_r0) << "\n";
  out << "u0 = " << g17(c.char_u0) << "\n";
  out << "ds = " << g17(c.char_ds) << "\n";
  out << "s_max = " << g17(c.char_s_max) << "\n";
  if (std::isfinite(c.char_r_stop)) out << "r_stop = " << g17(c.char_r_stop) << "\n";
  out << "shift = " << g17(c.char_shift) << "\n";
  out << "\n[steady]\n";
  out << "r0 = " << g17(c.steady_r0) << "\n";
  out << "u0 = " << g17(c.steady_u0) << "\n";
  out << "\n[harness]\n";
  out << "preset = " << quoted(c.preset) << "\n";
  out << "levels = " << c.levels << "\n";
  out << "base_cells = " << c.base_cells << "\n";
  out << "trials = " << c.trials << "\n";
  out << "max_steps = " << c.max_steps << "\n";
  return out.str();
}

FluxModel config_model(const RunConfig& c) {
  if (c.model == "custom") return polynomial_model("custom", c.custom_f, c.custom_h);
  return burgers_model();
}

ScalarFn make_initial(const std::string& text, const FluxModel& m, double mass) {
  const auto parts = split(text, ':');
  const std::string tag = parts.empty() ? "" : parts[0];
  if (tag == "constant") {
    const double c = numbers_after_tag(parts, 1, "constant:c")[0];
    require_unit(c, "constant value");
    return [c](double) { return c; };
  }
  if (tag == "riemann") {
    const auto x = numbers_after_tag(parts, 3, "riemann:r:left:right");
    require_unit(x[1], "left state");
    require_unit(x[2], "right state");
    const double at = x[0], left = x[1], right = x[2];
    return [at, left, right](double r) { return r < at ? left : right; };
  }
  if (tag == "gaussian") {
    const auto x = numbers_after_tag(parts, 3, "gaussian:amp:center:width");
    require_unit(x[0], "amplitude");
    if (!(x[2] > 0.0)) throw DomainError("gaussian width must be > 0");
    const double amp = x[0], center = x[1], width = x[2];
    return [amp, center, width](double r) {
      const double z = (r - center) / width;
      return amp * std::exp(-z * z);
    };
  }
  if (tag == "steady") {
    const auto x = numbers_after_tag(parts, 2, "steady:r0:u0");
    if (!(x[0] > 2.0 * mass)) throw DomainError("steady anchor radius must exceed 2 * mass");
    if (!(std::abs(x[1]) < 1.0) || x[1] == 0.0) throw DomainError("steady anchor value must lie in (-1, 0) or (0, 1)");
    auto table = std::make_shared<const FhatTable>(m);
    const double r0 = x[0], u0 = x[1];
    return [table, mass, r0, u0](double r) { return steady_profile(*table, mass, r0, u0, {r})[0]; };
  }
  throw DomainError("initial data must be constant:, riemann:, gaussian: or steady: form, got '" + text + "'");
}

}  // namespace hfv
