#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lubrisurf/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace lubrisurf;

namespace {

const fs::path kWork = fs::temp_directory_path() / "lubrisurf_test_cli";

int run_cmd(const std::string& args) {
  const std::string cmd = std::string(LUBRISURF_BIN) + " " + args + " 2>/dev/null";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

void write_file(const fs::path& p, const std::string& content) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p);
  out << content;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json default_config() {
  json j;
  j["params"] = {{"G", 1.0}, {"D", 0.1}, {"delta", 0.1}, {"beta", 1.0},
                 {"K", 1.0}, {"L", 1.0},
                 {"sigma_law", {{"type", "linear"}}}};
  j["grid"] = {{"n_cells", 16}};
  j["integrator"] = {{"scheme", "imex"}, {"t_end", 0.2}};
  j["initial"] = {{"type", "perturbed_equilibrium"}, {"h_star", 1.0},
                  {"eta_star", 0.01}, {"mode", 1}, {"amp_h", 0.01}};
  j["output"] = {{"sample_dt", 0.01}, {"snapshot_stride", 5}};
  j["seed"] = 7;
  return j;
}

struct Workspace {
  Workspace() {
    fs::remove_all(kWork);
    fs::create_directories(kWork);
  }
};

Workspace workspace_once;

}  // namespace

TEST_CASE("simulate produces the full artifact set") {
  const fs::path cfg = kWork / "config.json";
  write_file(cfg, default_config().dump(2));
  const fs::path out = kWork / "run1";
  CHECK(run_cmd("simulate --config " + cfg.string() + " --out " + out.string()) ==
        cli::kExitOk);

  CHECK(fs::exists(out / "trace.csv"));
  CHECK(fs::exists(out / "manifest.json"));
  CHECK(fs::exists(out / "snapshots" / "0000.csv"));

  std::ifstream tr(out / "trace.csv");
  std::string header;
  std::getline(tr, header);
  CHECK(header ==
        "t,fluid_mass,surfactant_mass,energy,diss_1,diss_2,diss_3,diss_4,"
        "diss_5,residual,l2_h,l2_m,l2_gamma");
  int rows = 0;
  for (std::string line; std::getline(tr, line);)
    if (!line.empty()) ++rows;
  CHECK(rows == 21);  // t_end / sample_dt + 1

  std::ifstream sn(out / "snapshots" / "0000.csv");
  std::getline(sn, header);
  CHECK(header == "x,h,m,gamma,c0");

  const json manifest = json::parse(slurp(out / "manifest.json"));
  CHECK(manifest["exit_code"] == 0);
  CHECK(manifest["halt_reason"] == "reached_t_end");
  CHECK(manifest.contains("config"));
}

TEST_CASE("identical config and seed give byte-identical traces") {
  const fs::path cfg = kWork / "config.json";
  const fs::path a = kWork / "det_a", b = kWork / "det_b";
  REQUIRE(run_cmd("simulate --config " + cfg.string() + " --out " + a.string()) == 0);
  REQUIRE(run_cmd("simulate --config " + cfg.string() + " --out " + b.string()) == 0);
  CHECK(slurp(a / "trace.csv") == slurp(b / "trace.csv"));
}

TEST_CASE("manifest re-ingestion reproduces the run") {
  const fs::path src = kWork / "run1";
  const fs::path out = kWork / "run_reingest";
  REQUIRE(run_cmd("simulate --config " + (src / "manifest.json").string() +
                  " --out " + out.string()) == 0);
  CHECK(slurp(out / "trace.csv") == slurp(src / "trace.csv"));
}

TEST_CASE("seed changes the random-noise run, seed flag overrides") {
  json j = default_config();
  j["initial"] = {{"type", "random_noise"}, {"h_star", 1.0},
                  {"eta_star", 0.01}, {"amplitude", 0.005}};
  j["integrator"]["t_end"] = 0.05;
  const fs::path cfg = kWork / "noise.json";
  write_file(cfg, j.dump());
  const fs::path a = kWork / "noise_a", b = kWork / "noise_b", c = kWork / "noise_c";
  REQUIRE(run_cmd("simulate --config " + cfg.string() + " --out " + a.string()) == 0);
  REQUIRE(run_cmd("simulate --seed 99 --config " + cfg.string() + " --out " +
                  b.string()) == 0);
  REQUIRE(run_cmd("simulate --seed 99 --config " + cfg.string() + " --out " +
                  c.string()) == 0);
  CHECK(slurp(a / "trace.csv") != slurp(b / "trace.csv"));
  CHECK(slurp(b / "trace.csv") == slurp(c / "trace.csv"));
}

TEST_CASE("invalid configs exit with the config-error code") {
  json j = default_config();
  j["params"]["beta"] = 0.0;
  const fs::path cfg = kWork / "bad_beta.json";
  write_file(cfg, j.dump());
  CHECK(run_cmd("simulate --config " + cfg.string() + " --out " +
                (kWork / "bad_run").string()) == cli::kExitConfigError);

  write_file(kWork / "garbage.json", "{not json");
  CHECK(run_cmd("simulate --config " + (kWork / "garbage.json").string() +
                " --out " + (kWork / "bad_run2").string()) ==
        cli::kExitConfigError);

  CHECK(run_cmd("simulate --config " + (kWork / "missing.json").string() +
                " --out " + (kWork / "bad_run3").string()) ==
        cli::kExitConfigError);
}

TEST_CASE("linstab report contents") {
  const fs::path cfg = kWork / "config.json";
  const fs::path out = kWork / "lin1";
  CHECK(run_cmd("linstab --config " + cfg.string() + " --out " + out.string()) ==
        cli::kExitOk);
  const json rep = json::parse(slurp(out / "linstab.json"));
  // q_max = 16 G D / 3 = 0.5333...
  CHECK(rep["q_max"].get<double>() == doctest::Approx(1.6 / 3.0).epsilon(1e-12));
  CHECK(rep["spectral_bound"].get<double>() < 0.0);
  CHECK(rep["omega0_num"].get<double>() > 0.0);
  CHECK(rep["bq"].size() == 8);
  for (const auto& b : rep["bq"]) CHECK(b["positive_definite"] == true);
  CHECK(rep["comparison"].is_null());
}

TEST_CASE("constant law disables the b_q sweep") {
  json j = default_config();
  j["params"]["sigma_law"] = {{"type", "constant"}};
  const fs::path cfg = kWork / "const_law.json";
  write_file(cfg, j.dump());
  const fs::path out = kWork / "lin_const";
  REQUIRE(run_cmd("linstab --config " + cfg.string() + " --out " + out.string()) == 0);
  const json rep = json::parse(slurp(out / "linstab.json"));
  CHECK(rep["q_max"].is_null());
  CHECK(rep["bq"].empty());
}

TEST_CASE("compare joins a run with its linear prediction") {
  const fs::path run = kWork / "run1", lin = kWork / "lin1";
  CHECK(run_cmd("compare --run " + run.string() + " --linstab " + lin.string()) ==
        cli::kExitOk);
  const json cmp = json::parse(slurp(run / "compare.json"));
  CHECK(cmp["spectrally_stable"] == true);
  CHECK(cmp["omega_fit"].is_number());
  CHECK(cmp["verdict"] == "consistent");
  const json rep = json::parse(slurp(lin / "linstab.json"));
  CHECK(rep["comparison"]["verdict"] == "consistent");
}

TEST_CASE("compare refuses mismatched parameter sets") {
  json j = default_config();
  j["params"]["D"] = 0.2;
  const fs::path cfg = kWork / "other_d.json";
  write_file(cfg, j.dump());
  const fs::path lin = kWork / "lin_other";
  REQUIRE(run_cmd("linstab --config " + cfg.string() + " --out " + lin.string()) == 0);
  CHECK(run_cmd("compare --run " + (kWork / "run1").string() + " --linstab " +
                lin.string()) == cli::kExitConfigError);
}

TEST_CASE("sweep runs the cartesian product and summarizes") {
  json j;
  j["base"] = default_config();
  j["base"]["integrator"]["t_end"] = 0.05;
  j["sweep"] = {{"params.D", {0.1, 0.2}}, {"params.K", {0.5, 1.0}}};
  const fs::path cfg = kWork / "sweep.json";
  write_file(cfg, j.dump());
  const fs::path out = kWork / "sweep_out";
  CHECK(run_cmd("sweep --config " + cfg.string() + " --out " + out.string()) ==
        cli::kExitOk);

  std::ifstream sm(out / "summary.csv");
  std::string header;
  std::getline(sm, header);
  CHECK(header.rfind("run_id,", 0) == 0);
  CHECK(header.find("halt_reason") != std::string::npos);
  CHECK(header.find("omega0_num") != std::string::npos);
  int rows = 0;
  for (std::string line; std::getline(sm, line);)
    if (!line.empty()) ++rows;
  CHECK(rows == 4);
  for (int i = 0; i < 4; ++i) {
    char dir[16];
    std::snprintf(dir, sizeof(dir), "run_%04d", i);
    CHECK(fs::exists(out / dir / "manifest.json"));
  }
}

TEST_CASE("sweep size cap is enforced") {
  json j;
  j["base"] = default_config();
  j["sweep"] = {{"params.D", {0.1, 0.2, 0.3}}};
  j["max_runs"] = 2;
  const fs::path cfg = kWork / "sweep_cap.json";
  write_file(cfg, j.dump());
  CHECK(run_cmd("sweep --config " + cfg.string() + " --out " +
                (kWork / "sweep_cap_out").string()) == cli::kExitConfigError);
}

TEST_CASE("file initial conditions round-trip through snapshots") {
  // use the final snapshot of run1 as a new initial condition
  const fs::path snaps = kWork / "run1" / "snapshots";
  fs::path last;
  for (const auto& e : fs::directory_iterator(snaps)) last = std::max(last, e.path());
  json j = default_config();
  j["initial"] = {{"type", "file"}, {"path", last.string()}};
  j["integrator"]["t_end"] = 0.02;
  const fs::path cfg = kWork / "from_file.json";
  write_file(cfg, j.dump());
  CHECK(run_cmd("simulate --config " + cfg.string() + " --out " +
                (kWork / "from_file_run").string()) == cli::kExitOk);
}
