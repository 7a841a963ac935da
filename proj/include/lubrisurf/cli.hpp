#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "lubrisurf/integrate.hpp"
#include "lubrisurf/linstab.hpp"
#include "lubrisurf/model.hpp"

namespace lubrisurf::cli {

// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitPositivityLoss = 2;
inline constexpr int kExitNonFinite = 3;
inline constexpr int kExitEigensolverFailure = 4;

struct InitialCondition {
  enum class Kind { PerturbedEquilibrium, RandomNoise, File, Manufactured };
  Kind kind = Kind::PerturbedEquilibrium;
  double h_star = 1.0;
  double eta_star = 0.01;
  int mode = 1;
  double amp_h = 0.01, amp_m = 0.0, amp_gamma = 0.0;
  double amplitude = 0.01;       // random noise
  std::string path;              // file
  std::string id;                // manufactured profile
};

struct RunConfig {
  Params params;
  int n_cells = 64;
  IntegratorConfig integrator;
  InitialCondition initial;
  int snapshot_stride = 10;      // every k-th trace sample; 0 = first/last only
  uint64_t seed = 1;
  int linstab_n_q = 8;
  std::vector<double> linstab_q_values;  // overrides the default q grid
};

RunConfig parse_config(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& c);

// Loads a config file; a manifest.json (with a "config" member) is accepted
// too, so a finished run re-ingests bit-identically.
RunConfig load_config_file(const std::filesystem::path& path);

State build_initial_state(const RunConfig& c, const Grid& g);

// write-temp-then-rename
void atomic_write(const std::filesystem::path& path, const std::string& content);

std::string format_double(double v);  // 17 significant digits

int cmd_simulate(const std::filesystem::path& config_path,
                 const std::filesystem::path& out_dir,
                 std::optional<uint64_t> seed_override, bool quiet);
int cmd_linstab(const std::filesystem::path& config_path,
                const std::filesystem::path& out_dir, bool quiet);
int cmd_compare(const std::filesystem::path& run_dir,
                const std::filesystem::path& linstab_dir, bool quiet);
int cmd_sweep(const std::filesystem::path& config_path,
              const std::filesystem::path& out_dir,
              std::optional<uint64_t> seed_override, bool quiet);

}  // namespace lubrisurf::cli
