// Command line application behind the ptskdv executable.  cli_run is the
// embeddable entry point: it takes argv-style arguments in normal order and
// writes to caller-supplied streams, so tests can drive it in process.
//
// Exit codes: 0 success, 1 unexpected internal error, 2 invalid input
// (usage, config, trajectory), 3 verification failure, 4 runtime
// singularity or blow-up, 5 I/O failure.
#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ptskdv/reports.hpp"
#include "ptskdv/trajectory.hpp"

namespace ptskdv::cli {

using num::Complex;

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kBadInput = 2,
  kVerifyFailed = 3,
  kRuntimeSingular = 4,
  kIo = 5,
};

// Accepts integers, fractions p/q, and decimal literals; exact in all cases.
inline sym::BigRat parse_rational(std::string s) {
  std::string orig = s;
  auto bad = [&]() -> ValidationError {
    return ValidationError("cannot parse '" + orig + "' as a rational number");
  };
  bool negative = false;
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
    negative = s[0] == '-';
    s.erase(0, 1);
  }
  if (s.empty()) throw bad();
  sym::BigRat value;
  auto all_digits = [](const std::string& d) {
    return !d.empty() && std::all_of(d.begin(), d.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  std::size_t slash = s.find('/');
  std::size_t dot = s.find('.');
  try {
    if (slash != std::string::npos) {
      std::string num = s.substr(0, slash), den = s.substr(slash + 1);
      if (!all_digits(num) || !all_digits(den)) throw bad();
      value = sym::BigRat(sym::BigInt(num), sym::BigInt(den));
    } else if (dot != std::string::npos) {
      std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
      if (ip.empty()) ip = "0";
      if (!all_digits(ip) || (!fp.empty() && !all_digits(fp))) throw bad();
      sym::BigInt scale = 1;
      for (std::size_t k = 0; k < fp.size(); ++k) scale *= 10;
      value = sym::BigRat(sym::BigInt(ip) * scale + (fp.empty() ? sym::BigInt(0) : sym::BigInt(fp)),
                          scale);
    } else {
      if (!all_digits(s)) throw bad();
      value = sym::BigRat(sym::BigInt(s));
    }
  } catch (const ValidationError&) {
    throw;
  } catch (const std::exception&) {
    throw bad();
  }
  return negative ? sym::BigRat(-value) : value;
}

inline sym::ParamValues parse_param_args(const std::vector<std::string>& kvs) {
  sym::ParamValues out;
  for (const auto& kv : kvs) {
    std::size_t eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ValidationError("--param expects name=value, got '" + kv + "'");
    std::string name = kv.substr(0, eq);
    auto p = sym::param_from_name(name);
    if (!p)
      throw ValidationError("unknown parameter '" + name +
                            "' (expected one of: lam, eps, kappa, mu, nu)");
    out[*p] = parse_rational(kv.substr(eq + 1));
  }
  return out;
}

// --- verify -----------------------------------------------------------------

inline int cmd_verify(const std::string& suite, const std::string& report_path, std::ostream& out,
                      std::ostream& err) {
  std::vector<super::VerifyReport> reports = super::run_verify(suite);
  super::print_verify_summary(out, reports);
  if (!report_path.empty()) {
    super::Json doc = super::verify_report_json(reports, num::iso_timestamp_utc());
    std::ofstream f(report_path);
    if (!f) {
      err << "error: cannot write report file: " << report_path << "\n";
      return kIo;
    }
    f << doc.dump(2) << "\n";
    if (!f.good()) {
      err << "error: failed while writing report file: " << report_path << "\n";
      return kIo;
    }
  }
  for (const auto& r : reports)
    if (!r.all_pass()) return kVerifyFailed;
  return kOk;
}

// --- derive -----------------------------------------------------------------

inline int cmd_derive(const std::string& model, const std::vector<std::string>& param_args,
                      const std::string& format, std::ostream& out) {
  auto id = super::model_from_name(model);
  if (!id)
    throw ValidationError("unknown model '" + model +
                          "' (expected one of: skdv, kdvn, zs, xx, flow)");
  super::ModelSystem sys =
      super::to_components(super::build_model(*id, parse_param_args(param_args)));
  if (format == "text") {
    out << super::derive_text(sys);
  } else if (format == "latex") {
    out << super::derive_latex(sys);
  } else if (format == "json") {
    out << super::derive_json(sys).dump(2) << "\n";
  } else {
    throw ValidationError("unknown format '" + format + "' (expected text, latex, or json)");
  }
  return kOk;
}

// --- simulate ---------------------------------------------------------------

inline Complex config_eps(const num::SimConfig& c) {
  auto it = c.params.find(sym::Param::Eps);
  return it == c.params.end() ? Complex(1.0, 0.0) : Complex(it->second, 0.0);
}

inline int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                        std::ostream& out) {
  if (!std::filesystem::exists(config_path))
    throw std::filesystem::filesystem_error(
        "cannot open config file", config_path,
        std::make_error_code(std::errc::no_such_file_or_directory));
  num::SimConfig c = num::load_config(config_path);
  std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);

  num::GridContext ctx = num::make_context(c);
  num::StateFields s = num::build_initial(c, ctx.grid, ctx.plan);
  num::ModelRhs rhs(c.model, ctx.params);
  Complex eps = config_eps(c);

  num::write_metadata(dir, c, super::kToolVersion);
  num::TrajectoryWriter traj(dir, c);
  num::DiagnosticsWriter diag(dir);

  num::SimSpec spec;
  spec.dt = c.dt;
  spec.steps = num::config_steps(c);
  spec.sample_every = c.sample_every;

  num::DiagRow first, last;
  bool have_first = false;
  num::simulate(ctx, rhs, s, spec, [&](long long, double t, const num::StateFields& st) {
    traj.sample(t, st);
    num::DiagRow r;
    try {
      r = num::diagnostics(ctx, st, t, eps);
    } catch (const SingularConfiguration& e) {
      throw SingularConfiguration(std::string(e.what()) + " (while evaluating diagnostics at t=" +
                                      num::format_g17(t) + ")",
                                  e.grid_index);
    }
    diag.row(r);
    if (!have_first) {
      first = r;
      have_first = true;
    }
    last = r;
  });

  auto rel = [](double a, double b) {
    double scale = std::max(std::abs(a), 1e-30);
    return std::abs(b - a) / scale;
  };
  out << "completed: model=" << super::model_name(c.model) << " points=" << c.points
      << " steps=" << spec.steps << " t_end=" << num::format_g17(c.t_end) << "\n";
  out << "mass drift: " << num::format_g17(rel(first.mass, last.mass)) << " relative\n";
  out << "momentum drift: " << num::format_g17(rel(first.momentum, last.momentum))
      << " relative\n";
  out << "H drift: " << num::format_g17(rel(first.h_real, last.h_real)) << " relative\n";
  out << "artifacts: " << (dir / "traj.jsonl").string() << ", " << (dir / "diagnostics.csv").string()
      << ", " << (dir / "metadata.json").string() << "\n";
  return kOk;
}

// --- analyze ----------------------------------------------------------------

inline int cmd_analyze(const std::string& traj_path, const std::string& quantities_csv,
                       std::ostream& out) {
  static const std::vector<std::string> known = {"mass", "momentum", "H_eps", "max_u",
                                                 "tail_fraction"};
  std::vector<std::string> wanted;
  std::string cur;
  for (char ch : quantities_csv + ",") {
    if (ch == ',') {
      if (!cur.empty()) wanted.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (wanted.empty())
    throw ValidationError(
        "no quantities requested (expected a comma-separated list from: mass, momentum, H_eps, "
        "max_u, tail_fraction)");
  for (const auto& q : wanted)
    if (std::find(known.begin(), known.end(), q) == known.end())
      throw ValidationError("unknown quantity '" + q +
                            "' (expected: mass, momentum, H_eps, max_u, tail_fraction)");

  if (!std::filesystem::exists(traj_path))
    throw std::filesystem::filesystem_error(
        "cannot open trajectory file", traj_path,
        std::make_error_code(std::errc::no_such_file_or_directory));
  num::Trajectory tr = num::read_trajectory(traj_path);

  std::map<sym::Param, Complex> params;
  for (const auto& [name, value] : tr.params) {
    auto p = sym::param_from_name(name);
    if (!p) throw ValidationError("trajectory header names unknown parameter '" + name + "'");
    params[*p] = Complex(value, 0.0);
  }
  Complex eps(1.0, 0.0);
  if (auto it = tr.params.find("eps"); it != tr.params.end()) eps = Complex(it->second, 0.0);
  num::GridContext ctx(tr.points, tr.length, std::move(params), true);

  out << "t";
  for (const auto& q : wanted) {
    if (q == "H_eps")
      out << ",H_eps_real,H_eps_imag";
    else
      out << "," << q;
  }
  out << "\n";
  for (const auto& sample : tr.samples) {
    num::DiagRow r = num::diagnostics(ctx, sample.state, sample.t, eps);
    out << num::format_g17(r.t);
    for (const auto& q : wanted) {
      if (q == "mass") out << "," << num::format_g17(r.mass);
      else if (q == "momentum") out << "," << num::format_g17(r.momentum);
      else if (q == "H_eps") out << "," << num::format_g17(r.h_real) << "," << num::format_g17(r.h_imag);
      else if (q == "max_u") out << "," << num::format_g17(r.max_u);
      else out << "," << num::format_g17(r.tail_fraction);
    }
    out << "\n";
  }
  return kOk;
}

// --- driver -----------------------------------------------------------------

inline int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"PT-deformed supersymmetric KdV: verification, derivation, simulation, analysis"};
  app.name("ptskdv");
  app.require_subcommand(1);

  std::string suite = "all", report_path;
  CLI::App* verify = app.add_subcommand("verify", "run the symbolic verification suites");
  verify->add_option("--suite", suite,
                     "suite to run: all, derivatives, tables, pt, susy, hamiltonian");
  verify->add_option("--report", report_path, "write a JSON report to this path");

  std::string model, format = "text";
  std::vector<std::string> param_args;
  CLI::App* derive = app.add_subcommand("derive", "print the component equations of a model");
  derive->add_option("--model", model, "model name: skdv, kdvn, zs, xx, flow")->required();
  derive->add_option("--param", param_args, "fix a parameter, e.g. --param eps=2 or lam=1/2");
  derive->add_option("--format", format, "output format: text, latex, json");

  std::string config_path, out_dir;
  CLI::App* simulate = app.add_subcommand("simulate", "integrate a configured model on the grid");
  simulate->add_option("--config", config_path, "path to the JSON run configuration")->required();
  simulate->add_option("--out", out_dir, "directory for trajectory and diagnostics")->required();

  std::string traj_path, quantities;
  CLI::App* analyze = app.add_subcommand("analyze", "recompute diagnostics from a trajectory");
  analyze->add_option("--traj", traj_path, "path to traj.jsonl")->required();
  analyze->add_option("--quantities", quantities,
                      "comma-separated list: mass, momentum, H_eps, max_u, tail_fraction")
      ->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kBadInput;
  }

  try {
    if (app.got_subcommand(verify)) return cmd_verify(suite, report_path, out, err);
    if (app.got_subcommand(derive)) return cmd_derive(model, param_args, format, out);
    if (app.got_subcommand(simulate)) return cmd_simulate(config_path, out_dir, out);
    return cmd_analyze(traj_path, quantities, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const SingularConfiguration& e) {
    err << "error: singular configuration: " << e.what();
    if (e.grid_index >= 0) err << " (grid index " << e.grid_index << ")";
    err << "\n";
    return kRuntimeSingular;
  } catch (const BlowUpError& e) {
    err << "error: blow-up at t=" << num::format_g17(e.t) << ": " << e.what()
        << " (partial output retained)\n";
    return kRuntimeSingular;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  } catch (const std::ios_base::failure& e) {
    err << "error: I/O failure: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}

}  // namespace ptskdv::cli
