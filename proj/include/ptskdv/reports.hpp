// Structured documents for the command line tool: rendered component
// equations and the verification report.
//
// Determinism contract: everything that can vary between two identical runs
// (timestamps, wall-clock measurements) lives in the single top-level
// "metadata" object, so reports compare byte-identical once that one field
// is dropped.
#pragma once

#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "ptskdv/models.hpp"
#include "ptskdv/render.hpp"
#include "ptskdv/verify.hpp"

namespace ptskdv::super {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolName = "ptskdv";
inline constexpr const char* kToolVersion = "1.0.0";

// --- rendered component equations ------------------------------------------

inline Json params_json(const ModelSystem& m) {
  Json p = Json::object();
  for (const auto& [param, value] : m.params)
    p[param_name(param)] = value ? to_string(*value) : "symbolic";
  return p;
}

inline std::string derive_text(const ModelSystem& m) {
  std::ostringstream os;
  os << "model: " << model_name(m.id) << "\n";
  for (const auto& [param, value] : m.params)
    os << "param: " << param_name(param) << " = " << (value ? to_string(*value) : "symbolic")
       << "\n";
  os << "u_t = " << to_string(m.ru) << "\n";
  os << "xi_t = " << to_string(m.rxi) << "\n";
  return os.str();
}

inline std::string derive_latex(const ModelSystem& m) {
  std::ostringstream os;
  os << "\\begin{align}\n";
  os << "u_t &= " << to_latex(m.ru) << " \\\\\n";
  os << "\\xi_t &= " << to_latex(m.rxi) << "\n";
  os << "\\end{align}\n";
  return os.str();
}

inline Json derive_json(const ModelSystem& m) {
  Json doc;
  doc["format"] = "ptskdv-derive-1";
  doc["model"] = model_name(m.id);
  doc["params"] = params_json(m);
  Json eq;
  eq["u_t"] = to_string(m.ru);
  eq["xi_t"] = to_string(m.rxi);
  doc["equations"] = std::move(eq);
  return doc;
}

// --- verification report ----------------------------------------------------

// `created` is injected by the caller so the builder itself is deterministic.
inline Json verify_report_json(const std::vector<VerifyReport>& suites,
                               const std::string& created) {
  Json doc;
  doc["format"] = "ptskdv-verify-1";
  doc["tool"] = kToolName;
  doc["version"] = kToolVersion;
  bool all = true;
  Json jsuites = Json::array();
  Json walls = Json::object();
  double total_ms = 0.0;
  for (const auto& rep : suites) {
    Json js;
    js["suite"] = rep.suite;
    js["status"] = rep.all_pass() ? "pass" : "fail";
    Json checks = Json::array();
    for (const auto& c : rep.checks) {
      Json jc;
      jc["id"] = c.id;
      jc["status"] = c.pass ? "pass" : "fail";
      if (!c.pass) jc["detail"] = c.detail;
      checks.push_back(std::move(jc));
      walls[rep.suite + "/" + c.id] = c.wall_ms;
      total_ms += c.wall_ms;
    }
    js["checks"] = std::move(checks);
    all = all && rep.all_pass();
    jsuites.push_back(std::move(js));
  }
  doc["status"] = all ? "pass" : "fail";
  doc["suites"] = std::move(jsuites);
  Json meta;
  meta["created"] = created;
  meta["wall_ms_total"] = total_ms;
  meta["wall_ms"] = std::move(walls);
  doc["metadata"] = std::move(meta);
  return doc;
}

inline void print_verify_summary(std::ostream& os, const std::vector<VerifyReport>& suites) {
  int npass = 0, nfail = 0;
  for (const auto& rep : suites) {
    os << "suite " << rep.suite << "\n";
    for (const auto& c : rep.checks) {
      os << "  [" << (c.pass ? "pass" : "FAIL") << "] " << c.id << "  ("
         << std::fixed << std::setprecision(1) << c.wall_ms << " ms)\n";
      os.unsetf(std::ios::fixed);
      if (!c.pass) os << "         " << c.detail << "\n";
      (c.pass ? npass : nfail)++;
    }
  }
  os << (nfail == 0 ? "PASS" : "FAIL") << ": " << npass << " of " << (npass + nfail)
     << " checks passed\n";
}

}  // namespace ptskdv::super
