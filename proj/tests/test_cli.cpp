#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ptskdv/cli_app.hpp"

namespace fs = std::filesystem;
using ptskdv::cli::cli_run;

namespace {

struct CliResult {
  int code = -1;
  std::string out, err;
};

CliResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream o, e;
  CliResult r;
  r.code = cli_run(args, o, e);
  r.out = o.str();
  r.err = e.str();
  return r;
}

fs::path fresh_dir(const std::string& name) {
  fs::path d = fs::temp_directory_path() / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p);
  REQUIRE(f.good());
  f << text;
}

std::string read_file(const fs::path& p) {
  std::ifstream f(p);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string smoke_config() {
  return R"({
    "model": "skdv",
    "params": {"lam": 0},
    "grid": {"points": 64, "length": 40},
    "time": {"dt": 0.001, "t_end": 0.005},
    "algebra": {"generators": 0},
    "initial": {"preset": "kdv_one_soliton"}
  })";
}

// the two equation lines, without the model/param preamble
std::string equation_lines(const std::string& text) {
  std::istringstream in(text);
  std::string line, keep;
  while (std::getline(in, line))
    if (line.rfind("u_t", 0) == 0 || line.rfind("xi_t", 0) == 0) keep += line + "\n";
  return keep;
}

}  // namespace

TEST_CASE("derive output is identical for aligned deformations and the undeformed variant") {
  CliResult ones = run_cli({"derive", "--model", "zs", "--param", "eps=1", "--param", "kappa=1",
                            "--param", "mu=1", "--param", "nu=1"});
  CliResult plain = run_cli({"derive", "--model", "kdvn"});
  REQUIRE(ones.code == 0);
  REQUIRE(plain.code == 0);
  CHECK(equation_lines(ones.out) == equation_lines(plain.out));
  CHECK(!equation_lines(ones.out).empty());
}

TEST_CASE("derive accepts rational parameter values in all spellings") {
  CliResult half = run_cli({"derive", "--model", "skdv", "--param", "lam=1/2"});
  CliResult dec = run_cli({"derive", "--model", "skdv", "--param", "lam=0.5"});
  REQUIRE(half.code == 0);
  CHECK(half.out == dec.out);
  CHECK(half.out.find("11/2*u*xi_x") != std::string::npos);
}

TEST_CASE("derive validates model, parameter, value, and format") {
  CliResult m = run_cli({"derive", "--model", "nomodel"});
  CHECK(m.code == 2);
  CHECK(m.err.find("unknown model 'nomodel'") != std::string::npos);

  CliResult p = run_cli({"derive", "--model", "skdv", "--param", "zeta=1"});
  CHECK(p.code == 2);
  CHECK(p.err.find("unknown parameter 'zeta'") != std::string::npos);

  CliResult v = run_cli({"derive", "--model", "skdv", "--param", "lam=x+y"});
  CHECK(v.code == 2);
  CHECK(v.err.find("cannot parse 'x+y'") != std::string::npos);

  CliResult f = run_cli({"derive", "--model", "skdv", "--format", "pdf"});
  CHECK(f.code == 2);
  CHECK(f.err.find("unknown format 'pdf'") != std::string::npos);

  CliResult rejected = run_cli({"derive", "--model", "skdv", "--param", "eps=1"});
  CHECK(rejected.code == 2);  // skdv has no deformation parameter
}

TEST_CASE("derive emits latex and json renderings") {
  CliResult latex = run_cli({"derive", "--model", "skdv", "--format", "latex"});
  REQUIRE(latex.code == 0);
  CHECK(latex.out.find("\\xi_t &=") != std::string::npos);

  CliResult js = run_cli({"derive", "--model", "xx", "--param", "eps=2", "--format", "json"});
  REQUIRE(js.code == 0);
  auto doc = nlohmann::ordered_json::parse(js.out);
  CHECK(doc["model"] == "xx");
  CHECK(doc["params"]["eps"] == "2");
  CHECK(doc["params"]["lam"] == "symbolic");
  CHECK(doc["equations"].contains("u_t"));
  CHECK(doc["equations"].contains("xi_t"));
}

TEST_CASE("verify subcommand reports pass suites with exit 0") {
  CliResult r = run_cli({"verify", "--suite", "derivatives"});
  CHECK(r.code == 0);
  CHECK(r.out.find("suite derivatives") != std::string::npos);
  CHECK(r.out.find("PASS") != std::string::npos);
  CHECK(r.out.find("[FAIL]") == std::string::npos);
}

TEST_CASE("verify reports are byte-identical across runs outside the metadata field") {
  fs::path dir = fresh_dir("ptskdv_cli_verify");
  CliResult a = run_cli({"verify", "--suite", "susy", "--report", (dir / "a.json").string()});
  CliResult b = run_cli({"verify", "--suite", "susy", "--report", (dir / "b.json").string()});
  // the susy suite carries a failing breakdown check, so the exit code is the
  // verification-failure code
  CHECK(a.code == 3);
  CHECK(b.code == 3);
  auto da = nlohmann::ordered_json::parse(read_file(dir / "a.json"));
  auto db = nlohmann::ordered_json::parse(read_file(dir / "b.json"));
  CHECK(da.contains("metadata"));
  da.erase("metadata");
  db.erase("metadata");
  CHECK(da.dump() == db.dump());
  CHECK(da["status"] == "fail");
  // breakdown checks: the offset deformation breaks as expected, while the
  // dispersion-deformed odd equation closes and the check records that
  bool saw_offset = false, saw_odd = false;
  for (const auto& s : da["suites"])
    for (const auto& c : s["checks"]) {
      if (c["id"] == "offset_deformation_breaks_closure") {
        saw_offset = true;
        CHECK(c["status"] == "pass");
      }
      if (c["id"] == "dispersion_deformation_odd_equation_breaks_closure") {
        saw_odd = true;
        CHECK(c["status"] == "fail");
        CHECK(std::string(c["detail"]).find("cancels identically") != std::string::npos);
      }
    }
  CHECK(saw_offset);
  CHECK(saw_odd);
}

TEST_CASE("verify rejects unknown suites and unwritable report paths") {
  CliResult bad = run_cli({"verify", "--suite", "algebra"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("unknown verify suite") != std::string::npos);

  CliResult io = run_cli({"verify", "--suite", "derivatives", "--report",
                          "/nonexistent_dir_for_sure/rep.json"});
  CHECK(io.code == 5);
}

TEST_CASE("simulate writes artifacts and analyze reproduces the inline table exactly") {
  fs::path dir = fresh_dir("ptskdv_cli_sim");
  write_file(dir / "cfg.json", smoke_config());
  CliResult sim = run_cli({"simulate", "--config", (dir / "cfg.json").string(), "--out",
                           (dir / "run").string()});
  REQUIRE(sim.code == 0);
  CHECK(sim.out.find("mass drift:") != std::string::npos);
  CHECK(sim.out.find("H drift:") != std::string::npos);
  REQUIRE(fs::exists(dir / "run" / "traj.jsonl"));
  REQUIRE(fs::exists(dir / "run" / "diagnostics.csv"));
  REQUIRE(fs::exists(dir / "run" / "metadata.json"));

  CliResult an = run_cli({"analyze", "--traj", (dir / "run" / "traj.jsonl").string(),
                          "--quantities", "mass,momentum,H_eps,max_u,tail_fraction"});
  REQUIRE(an.code == 0);
  // offline recomputation regenerates the inline table byte for byte
  CHECK(an.out == read_file(dir / "run" / "diagnostics.csv"));
}

TEST_CASE("repeated simulate runs produce byte-identical artifacts outside the timestamp") {
  fs::path dir = fresh_dir("ptskdv_cli_det");
  write_file(dir / "cfg.json", smoke_config());
  CliResult s1 = run_cli({"simulate", "--config", (dir / "cfg.json").string(), "--out",
                          (dir / "r1").string()});
  CliResult s2 = run_cli({"simulate", "--config", (dir / "cfg.json").string(), "--out",
                          (dir / "r2").string()});
  REQUIRE(s1.code == 0);
  REQUIRE(s2.code == 0);
  // summaries agree except for the line naming the output directory
  auto drop_paths = [](const std::string& text) {
    std::istringstream in(text);
    std::string line, keep;
    while (std::getline(in, line))
      if (line.rfind("artifacts:", 0) != 0) keep += line + "\n";
    return keep;
  };
  CHECK(drop_paths(s1.out) == drop_paths(s2.out));
  CHECK(read_file(dir / "r1" / "traj.jsonl") == read_file(dir / "r2" / "traj.jsonl"));
  CHECK(read_file(dir / "r1" / "diagnostics.csv") == read_file(dir / "r2" / "diagnostics.csv"));
  auto m1 = nlohmann::ordered_json::parse(read_file(dir / "r1" / "metadata.json"));
  auto m2 = nlohmann::ordered_json::parse(read_file(dir / "r2" / "metadata.json"));
  m1.erase("created");
  m2.erase("created");
  CHECK(m1.dump() == m2.dump());
}

TEST_CASE("simulate distinguishes validation, singularity, and missing-file failures") {
  fs::path dir = fresh_dir("ptskdv_cli_err");

  std::string bad_dt = smoke_config();
  bad_dt.replace(bad_dt.find("\"dt\": 0.001"), 11, "\"dt\": 0");
  write_file(dir / "bad_dt.json", bad_dt);
  CliResult v = run_cli({"simulate", "--config", (dir / "bad_dt.json").string(), "--out",
                         (dir / "x").string()});
  CHECK(v.code == 2);
  CHECK(v.err.find("dt") != std::string::npos);

  CliResult io = run_cli({"simulate", "--config", (dir / "missing.json").string(), "--out",
                          (dir / "x").string()});
  CHECK(io.code == 5);

  // fractional exponent with a critical point in the window: singular
  write_file(dir / "sing.json", R"({
    "model": "flow",
    "params": {"eps": 2.5},
    "grid": {"points": 64, "length": 20},
    "time": {"dt": 0.001, "t_end": 0.05},
    "initial": {"preset": "gaussian", "x0": 0}
  })");
  CliResult sg = run_cli({"simulate", "--config", (dir / "sing.json").string(), "--out",
                          (dir / "runS").string()});
  CHECK(sg.code == 4);
  CHECK(sg.err.find("singular configuration") != std::string::npos);
  CHECK(sg.err.find("grid index") != std::string::npos);
  CHECK(sg.err.find("t=") != std::string::npos);
  // partial artifacts are retained
  CHECK(fs::exists(dir / "runS" / "traj.jsonl"));
}

TEST_CASE("blow-up exits with the runtime code and keeps partial output") {
  fs::path dir = fresh_dir("ptskdv_cli_blow");
  write_file(dir / "blow.json", R"({
    "model": "skdv",
    "params": {"lam": 0},
    "grid": {"points": 64, "length": 20},
    "time": {"dt": 0.05, "t_end": 2.0},
    "initial": {"preset": "gaussian", "amplitude": 40}
  })");
  CliResult r = run_cli({"simulate", "--config", (dir / "blow.json").string(), "--out",
                         (dir / "run").string()});
  CHECK(r.code == 4);
  CHECK(r.err.find("blow-up") != std::string::npos);
  CHECK(r.err.find("partial output retained") != std::string::npos);
  CHECK(fs::exists(dir / "run" / "traj.jsonl"));
  CHECK(fs::exists(dir / "run" / "diagnostics.csv"));
}

TEST_CASE("analyze validates its quantity list") {
  fs::path dir = fresh_dir("ptskdv_cli_an");
  write_file(dir / "cfg.json", smoke_config());
  REQUIRE(run_cli({"simulate", "--config", (dir / "cfg.json").string(), "--out",
                   (dir / "run").string()})
              .code == 0);
  std::string traj = (dir / "run" / "traj.jsonl").string();

  CliResult empty = run_cli({"analyze", "--traj", traj, "--quantities", ""});
  CHECK(empty.code == 2);
  CHECK(empty.err.find("no quantities requested") != std::string::npos);

  CliResult unknown = run_cli({"analyze", "--traj", traj, "--quantities", "mass,entropy"});
  CHECK(unknown.code == 2);
  CHECK(unknown.err.find("unknown quantity 'entropy'") != std::string::npos);

  CliResult missing = run_cli({"analyze", "--traj", (dir / "nope.jsonl").string(),
                               "--quantities", "mass"});
  CHECK(missing.code == 5);
}

TEST_CASE("analyze names the last valid time of a truncated trajectory") {
  fs::path dir = fresh_dir("ptskdv_cli_trunc");
  write_file(dir / "cfg.json", smoke_config());
  REQUIRE(run_cli({"simulate", "--config", (dir / "cfg.json").string(), "--out",
                   (dir / "run").string()})
              .code == 0);
  std::string whole = read_file(dir / "run" / "traj.jsonl");
  REQUIRE(whole.size() > 80);
  write_file(dir / "run" / "traj.jsonl", whole.substr(0, whole.size() - 40));

  CliResult r = run_cli({"analyze", "--traj", (dir / "run" / "traj.jsonl").string(),
                         "--quantities", "mass"});
  CHECK(r.code == 2);
  CHECK(r.err.find("truncated") != std::string::npos);
  CHECK(r.err.find("last valid sample is at t=") != std::string::npos);
}

TEST_CASE("usage errors come back as the invalid-input code") {
  CliResult none = run_cli({});
  CHECK(none.code == 2);
  CliResult sub = run_cli({"frobnicate"});
  CHECK(sub.code == 2);
  CliResult missing = run_cli({"derive"});
  CHECK(missing.code == 2);  // --model is required
  CliResult help = run_cli({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("simulate") != std::string::npos);
}

TEST_CASE("installed executable wires the driver to the process exit code") {
  const char* bin = std::getenv("PTSKDV_BIN");
  REQUIRE(bin != nullptr);

  auto shell = [&](const std::string& args) {
    std::string cmd = std::string(bin) + " " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    char buf[512];
    while (std::size_t got = fread(buf, 1, sizeof(buf), p)) out.append(buf, got);
    int status = pclose(p);
    int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return std::pair<int, std::string>(code, out);
  };

  auto [ok, out] = shell("derive --model skdv");
  CHECK(ok == 0);
  CHECK(out.find("u_t =") != std::string::npos);

  auto [bad, err] = shell("derive --model nomodel");
  CHECK(bad == 2);
  CHECK(err.find("unknown model") != std::string::npos);

  auto [vf, vout] = shell("verify --suite susy");
  CHECK(vf == 3);
  CHECK(vout.find("[FAIL]") != std::string::npos);
}
