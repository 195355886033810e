// Run artifacts: metadata.json (config echo plus a creation stamp),
// traj.jsonl (one header line, then one JSON object per sample), and
// diagnostics.csv.  The JSONL layout keeps partially written runs readable:
// the reader reports the last valid sample time when a line is damaged.
#pragma once

#include <cstdio>
#include <ctime>
#include <filesystem>

#include "sim_config.hpp"

namespace ptskdv::num {

inline std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string iso_timestamp_utc() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline void write_metadata(const std::filesystem::path& dir, const SimConfig& c,
                           const std::string& tool_version) {
  Json meta;
  meta["format"] = "ptskdv-run-1";
  meta["tool"] = "ptskdv";
  meta["version"] = tool_version;
  meta["created"] = iso_timestamp_utc();
  meta["config"] = c.raw;
  std::ofstream out(dir / "metadata.json");
  if (!out) throw ValidationError("cannot write " + (dir / "metadata.json").string());
  out << meta.dump(2) << "\n";
}

namespace traj_detail {

inline Json field_to_json(const GrassmannField& f, int parity) {
  Json o = Json::object();
  for (std::size_t m = 0; m < f.masks(); ++m) {
    if (static_cast<int>(std::popcount(m)) % 2 != parity) continue;
    Json arr = Json::array();
    for (auto& v : f.comp[m]) arr.push_back(Json::array({v.real(), v.imag()}));
    o[std::to_string(m)] = std::move(arr);
  }
  return o;
}

inline void field_from_json(const Json& o, GrassmannField& f, int parity,
                            const std::string& what) {
  if (!o.is_object()) throw ValidationError(what + " must be an object");
  for (auto& item : o.items()) {
    std::size_t mask = 0;
    try {
      mask = static_cast<std::size_t>(std::stoull(item.key()));
    } catch (...) {
      throw ValidationError(what + ": bad mask key '" + item.key() + "'");
    }
    if (mask >= f.masks() || static_cast<int>(std::popcount(mask)) % 2 != parity)
      throw ValidationError(what + ": mask " + item.key() + " out of range or wrong parity");
    const Json& arr = item.value();
    if (!arr.is_array() || static_cast<int>(arr.size()) != f.npts())
      throw ValidationError(what + ": component length mismatch");
    for (int j = 0; j < f.npts(); ++j) {
      const Json& pt = arr[static_cast<std::size_t>(j)];
      if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number() || !pt[1].is_number())
        throw ValidationError(what + ": samples must be [re, im] pairs");
      f.comp[mask][j] = Complex(pt[0].get<double>(), pt[1].get<double>());
    }
  }
}

}  // namespace traj_detail

class TrajectoryWriter {
 public:
  TrajectoryWriter(const std::filesystem::path& dir, const SimConfig& c)
      : out_(dir / "traj.jsonl") {
    if (!out_) throw ValidationError("cannot write " + (dir / "traj.jsonl").string());
    Json h;
    h["format"] = "ptskdv-traj-1";
    h["model"] = super::model_name(c.model);
    h["points"] = c.points;
    h["length"] = c.length;
    h["generators"] = c.generators;
    h["dt"] = c.dt;
    h["sample_every"] = c.sample_every;
    Json p = Json::object();
    for (auto& [k, v] : c.params) p[sym::param_name(k)] = v;
    h["params"] = std::move(p);
    out_ << h.dump() << "\n";
  }

  void sample(double t, const StateFields& s) {
    Json o;
    o["t"] = t;
    o["u"] = traj_detail::field_to_json(s.u, 0);
    o["xi"] = traj_detail::field_to_json(s.xi, 1);
    out_ << o.dump() << "\n";
  }

  void flush() { out_.flush(); }

 private:
  std::ofstream out_;
};

class DiagnosticsWriter {
 public:
  explicit DiagnosticsWriter(const std::filesystem::path& dir)
      : out_(dir / "diagnostics.csv") {
    if (!out_) throw ValidationError("cannot write " + (dir / "diagnostics.csv").string());
    out_ << "t,mass,momentum,H_eps_real,H_eps_imag,max_u,tail_fraction\n";
  }
  void row(const DiagRow& r) {
    out_ << format_g17(r.t) << "," << format_g17(r.mass) << "," << format_g17(r.momentum) << ","
         << format_g17(r.h_real) << "," << format_g17(r.h_imag) << "," << format_g17(r.max_u)
         << "," << format_g17(r.tail_fraction) << "\n";
  }

 private:
  std::ofstream out_;
};

struct TrajSample {
  double t = 0.0;
  StateFields state;
};

struct Trajectory {
  std::string model;
  int points = 0;
  double length = 0.0;
  int generators = 0;
  double dt = 0.0;
  long long sample_every = 1;
  std::map<std::string, double> params;
  std::vector<TrajSample> samples;
};

inline Trajectory read_trajectory(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open trajectory file: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("trajectory file is empty");
  Json h = Json::parse(line, nullptr, false);
  if (h.is_discarded() || !h.is_object() || h.value("format", "") != "ptskdv-traj-1")
    throw ValidationError("trajectory header is damaged or has an unknown format");
  Trajectory t;
  try {
    t.model = h.at("model").get<std::string>();
    t.points = h.at("points").get<int>();
    t.length = h.at("length").get<double>();
    t.generators = h.at("generators").get<int>();
    t.dt = h.at("dt").get<double>();
    t.sample_every = h.at("sample_every").get<long long>();
    for (auto& item : h.at("params").items())
      t.params[item.key()] = item.value().get<double>();
  } catch (const std::exception& e) {
    throw ValidationError("trajectory header is incomplete: " + std::string(e.what()));
  }
  long long lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto damaged = [&](const std::string& why) {
      if (t.samples.empty())
        return ValidationError("trajectory sample on line " + std::to_string(lineno) +
                               " is damaged (" + why + "); no valid samples before it");
      return ValidationError("trajectory truncated: sample on line " + std::to_string(lineno) +
                             " is damaged (" + why + "); last valid sample is at t=" +
                             format_g17(t.samples.back().t));
    };
    Json o = Json::parse(line, nullptr, false);
    if (o.is_discarded()) throw damaged("not valid JSON");
    TrajSample s;
    s.state.u = GrassmannField(t.generators, t.points);
    s.state.xi = GrassmannField(t.generators, t.points);
    try {
      s.t = o.at("t").get<double>();
      traj_detail::field_from_json(o.at("u"), s.state.u, 0, "u");
      traj_detail::field_from_json(o.at("xi"), s.state.xi, 1, "xi");
    } catch (const ValidationError& e) {
      throw damaged(e.what());
    } catch (const std::exception& e) {
      throw damaged(e.what());
    }
    t.samples.push_back(std::move(s));
  }
  if (t.samples.empty()) throw ValidationError("trajectory contains no samples");
  return t;
}

}  // namespace ptskdv::num
