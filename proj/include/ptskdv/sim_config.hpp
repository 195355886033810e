// Simulation configuration: strict JSON parsing (unknown keys are hard
// errors naming the offending field), preset initial data, and builders for
// the numeric engine.
#pragma once

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "integrator.hpp"

namespace ptskdv::num {

using Json = nlohmann::ordered_json;

namespace cfg_detail {

inline std::string join_keys(std::initializer_list<const char*> allowed) {
  std::string r;
  for (const char* a : allowed) {
    if (!r.empty()) r += ", ";
    r += a;
  }
  return r;
}

inline void check_keys(const Json& obj, const std::string& path,
                       std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ValidationError(path + " must be an object");
  for (auto& item : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || item.key() == a;
    if (!ok)
      throw ValidationError(path + "." + item.key() + " is not a recognized field (expected one of: " +
                            join_keys(allowed) + ")");
  }
}

inline const Json& require(const Json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError("missing required field " + path + "." + key);
  return *it;
}

inline double as_double(const Json& v, const std::string& path) {
  if (!v.is_number()) throw ValidationError(path + " must be a number");
  return v.get<double>();
}

inline long long as_int(const Json& v, const std::string& path) {
  if (v.is_number_integer()) return v.get<long long>();
  if (v.is_number()) {
    double d = v.get<double>();
    if (d == std::round(d)) return static_cast<long long>(d);
  }
  throw ValidationError(path + " must be an integer");
}

inline std::string as_string(const Json& v, const std::string& path) {
  if (!v.is_string()) throw ValidationError(path + " must be a string");
  return v.get<std::string>();
}

}  // namespace cfg_detail

struct SimConfig {
  super::ModelId model{};
  std::map<sym::Param, double> params;
  int points = 0;
  double length = 0.0;
  double dt = 0.0;
  double t_end = 0.0;
  long long sample_every = 1;
  int generators = 0;
  std::string preset;
  std::map<std::string, double> preset_params;
  Json raw;  // parsed config, echoed into metadata
};

inline SimConfig parse_config(const Json& j) {
  using namespace cfg_detail;
  SimConfig c;
  c.raw = j;
  check_keys(j, "config", {"model", "params", "grid", "time", "algebra", "initial"});

  std::string mname = as_string(require(j, "config", "model"), "config.model");
  auto id = super::model_from_name(mname);
  if (!id) throw ValidationError("config.model: unknown model '" + mname + "'");
  c.model = *id;

  const Json& params = require(j, "config", "params");
  if (!params.is_object()) throw ValidationError("config.params must be an object");
  auto declared = super::model_params(c.model);
  for (auto& item : params.items()) {
    bool known = false;
    sym::Param which = sym::Param::Lambda;
    for (sym::Param p : declared)
      if (item.key() == sym::param_name(p)) {
        known = true;
        which = p;
      }
    if (!known)
      throw ValidationError("config.params." + item.key() + " is not a parameter of model '" +
                            mname + "'");
    c.params[which] = as_double(item.value(), "config.params." + item.key());
  }
  for (sym::Param p : declared)
    if (!c.params.count(p))
      throw ValidationError(std::string("missing required field config.params.") +
                            sym::param_name(p));

  const Json& grid = require(j, "config", "grid");
  check_keys(grid, "config.grid", {"points", "length"});
  c.points = static_cast<int>(as_int(require(grid, "config.grid", "points"), "config.grid.points"));
  if (c.points < 8 || (c.points & (c.points - 1)) != 0)
    throw ValidationError("config.grid.points must be a power of two, at least 8");
  c.length = as_double(require(grid, "config.grid", "length"), "config.grid.length");
  if (c.length <= 0.0) throw ValidationError("config.grid.length must be positive");

  const Json& time = require(j, "config", "time");
  check_keys(time, "config.time", {"dt", "t_end", "sample_every"});
  c.dt = as_double(require(time, "config.time", "dt"), "config.time.dt");
  if (c.dt <= 0.0) throw ValidationError("config.time.dt must be positive");
  c.t_end = as_double(require(time, "config.time", "t_end"), "config.time.t_end");
  if (c.t_end <= 0.0) throw ValidationError("config.time.t_end must be positive");
  double ratio = c.t_end / c.dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio))
    throw ValidationError("config.time.t_end must be an integer multiple of dt");
  if (time.contains("sample_every")) {
    c.sample_every = as_int(time["sample_every"], "config.time.sample_every");
    if (c.sample_every < 1) throw ValidationError("config.time.sample_every must be at least 1");
  }

  if (j.contains("algebra")) {
    const Json& alg = j["algebra"];
    check_keys(alg, "config.algebra", {"generators"});
    c.generators =
        static_cast<int>(as_int(require(alg, "config.algebra", "generators"), "config.algebra.generators"));
    if (c.generators < 0 || c.generators > kMaxGenerators)
      throw ValidationError("config.algebra.generators must lie in [0, 8]");
  }

  const Json& init = require(j, "config", "initial");
  c.preset = as_string(require(init, "config.initial", "preset"), "config.initial.preset");
  auto read_preset = [&](std::initializer_list<const char*> allowed,
                         std::initializer_list<std::pair<const char*, double>> defaults) {
    std::vector<const char*> all = {"preset"};
    all.insert(all.end(), allowed.begin(), allowed.end());
    if (!init.is_object()) throw ValidationError("config.initial must be an object");
    for (auto& item : init.items()) {
      bool ok = false;
      for (const char* a : all) ok = ok || item.key() == a;
      if (!ok)
        throw ValidationError("config.initial." + item.key() +
                              " is not a recognized field for preset '" + c.preset + "'");
    }
    for (auto& [name, value] : defaults) c.preset_params[name] = value;
    for (auto& item : init.items())
      if (item.key() != "preset")
        c.preset_params[item.key()] = cfg_detail::as_double(item.value(), "config.initial." + item.key());
  };
  if (c.preset == "kdv_one_soliton") {
    read_preset({"k", "x0"}, {{"k", 0.7071067811865476}, {"x0", 0.0}});
  } else if (c.preset == "gaussian") {
    read_preset({"amplitude", "width", "x0", "xi_amplitude"},
                {{"amplitude", 1.0}, {"width", 2.0}, {"x0", 0.0}, {"xi_amplitude", 0.0}});
  } else if (c.preset == "monotone_kink") {
    read_preset({"amplitude", "steepness", "x0", "xi_amplitude"},
                {{"amplitude", 0.5}, {"steepness", 2.0}, {"x0", 0.0}, {"xi_amplitude", 0.0}});
  } else {
    throw ValidationError("config.initial.preset: unknown preset '" + c.preset +
                          "' (expected one of: kdv_one_soliton, gaussian, monotone_kink)");
  }
  if (c.preset_params.count("xi_amplitude") && c.preset_params["xi_amplitude"] != 0.0 &&
      c.generators < 2)
    throw ValidationError("config.initial.xi_amplitude needs config.algebra.generators >= 2");
  return c;
}

inline SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file: " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const std::exception& e) {
    throw ValidationError("config file is not valid JSON: " + std::string(e.what()));
  }
  return parse_config(j);
}

inline long long config_steps(const SimConfig& c) {
  return static_cast<long long>(std::llround(c.t_end / c.dt));
}

inline GridContext make_context(const SimConfig& c) {
  std::map<sym::Param, Complex> p;
  for (auto& [k, v] : c.params) p[k] = Complex(v, 0.0);
  return GridContext(c.points, c.length, std::move(p), true);
}

inline StateFields build_initial(const SimConfig& c, const Grid& grid, const FftPlan& plan) {
  StateFields s;
  s.u = GrassmannField(c.generators, grid.n);
  s.xi = GrassmannField(c.generators, grid.n);
  auto& pp = c.preset_params;
  auto get = [&](const char* k) { return pp.at(k); };
  if (c.preset == "kdv_one_soliton") {
    double k0 = get("k"), x0 = get("x0");
    for (int j = 0; j < grid.n; ++j) {
      double sech = 1.0 / std::cosh(k0 * (grid.x[j] - x0));
      s.u.comp[0][j] = Complex(-2.0 * k0 * k0 * sech * sech, 0.0);
    }
  } else if (c.preset == "gaussian") {
    double A = get("amplitude"), w = get("width"), x0 = get("x0"), Ax = get("xi_amplitude");
    auto bump = [&](double center, double xj) {
      double d = xj - center;
      return std::exp(-d * d / (w * w));
    };
    for (int j = 0; j < grid.n; ++j) {
      s.u.comp[0][j] = Complex(A * bump(x0, grid.x[j]), 0.0);
      if (Ax != 0.0) {
        s.xi.comp[1][j] = Complex(Ax * bump(x0 - grid.L / 8.0, grid.x[j]), 0.0);
        s.xi.comp[2][j] = Complex(Ax * bump(x0 + grid.L / 8.0, grid.x[j]), 0.0);
      }
    }
  } else {  // monotone_kink
    // A periodic kink pair, monotone on each half-window; a bare tanh profile
    // cannot be periodic, so the step sits inside a sine argument.
    double A = get("amplitude"), st = get("steepness"), x0 = get("x0"), Ax = get("xi_amplitude");
    for (int j = 0; j < grid.n; ++j) {
      double arg = 2.0 * std::numbers::pi * (grid.x[j] - x0) / grid.L;
      s.u.comp[0][j] = Complex(A * std::tanh(st * std::sin(arg)), 0.0);
      if (Ax != 0.0) {
        s.xi.comp[1][j] = Complex(Ax * std::cos(arg), 0.0);
        s.xi.comp[2][j] = Complex(Ax * std::sin(arg), 0.0);
      }
    }
  }
  s.u = f_dealias(grid, plan, std::move(s.u));
  s.xi = f_dealias(grid, plan, std::move(s.xi));
  return s;
}

}  // namespace ptskdv::num
