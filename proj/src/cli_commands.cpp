#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "lubrisurf/cli.hpp"
#include "lubrisurf/diagnostics.hpp"

namespace lubrisurf::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "1.0.0";

const char* halt_name(HaltReason h) {
  switch (h) {
    case HaltReason::ReachedTEnd: return "reached_t_end";
    case HaltReason::Steady: return "steady";
    case HaltReason::PositivityLoss: return "positivity_loss";
    case HaltReason::NonFinite: return "non_finite";
  }
  return "?";
}

int halt_exit_code(HaltReason h) {
  switch (h) {
    case HaltReason::PositivityLoss: return kExitPositivityLoss;
    case HaltReason::NonFinite: return kExitNonFinite;
    default: return kExitOk;
  }
}

std::string trace_csv(const RunTrace& trace) {
  std::vector<double> residual(trace.samples.size(), 0.0);
  if (trace.samples.size() >= 3) residual = energy_residual(trace);
  std::ostringstream out;
  out << "t,fluid_mass,surfactant_mass,energy,diss_1,diss_2,diss_3,diss_4,"
         "diss_5,residual,l2_h,l2_m,l2_gamma\n";
  for (size_t i = 0; i < trace.samples.size(); ++i) {
    const TraceSample& s = trace.samples[i];
    out << format_double(s.t) << ',' << format_double(s.fluid_mass) << ','
        << format_double(s.surfactant_mass) << ',' << format_double(s.energy);
    for (double d : s.diss) out << ',' << format_double(d);
    out << ',' << format_double(residual[i]) << ',' << format_double(s.l2_h)
        << ',' << format_double(s.l2_m) << ',' << format_double(s.l2_gamma)
        << '\n';
  }
  return out.str();
}

std::string snapshot_csv(const State& s, const Grid& g, const Params& p) {
  const std::vector<double> c0 = c0_from_state(s, p);
  std::ostringstream out;
  out << "x,h,m,gamma,c0\n";
  for (int i = 0; i < s.n(); ++i)
    out << format_double(g.center(i)) << ',' << format_double(s.h[i]) << ','
        << format_double(s.m[i]) << ',' << format_double(s.gamma[i]) << ','
        << format_double(c0[i]) << '\n';
  return out.str();
}

json manifest_json(const RunConfig& cfg, const RunTrace& trace, double final_t,
                   int exit_code, const std::string& error) {
  json m;
  m["config"] = config_to_json(cfg);
  m["version"] = kVersion;
  m["halt_reason"] = halt_name(trace.halt);
  if (trace.halt_cell >= 0) m["halt_cell"] = trace.halt_cell;
  m["accepted_steps"] = trace.accepted;
  m["rejected_steps"] = trace.rejected;
  m["final_time"] = final_t;
  m["exit_code"] = exit_code;
  if (!error.empty()) m["error"] = error;
  return m;
}

struct SimOutcome {
  int exit_code;
  RunConfig cfg;
  RunResult result;
};

// Shared by cmd_simulate and the sweep workers.
SimOutcome simulate_to_dir(const RunConfig& cfg, const fs::path& out,
                           bool quiet) {
  fs::create_directories(out / "snapshots");
  const Grid grid(cfg.n_cells, cfg.params.L);
  const State s0 = build_initial_state(cfg, grid);

  SimOutcome oc{kExitOk, cfg, {}};
  int snap = 0;
  auto write_snapshot = [&](const State& s) {
    char name[32];
    std::snprintf(name, sizeof(name), "%04d.csv", snap++);
    atomic_write(out / "snapshots" / name, snapshot_csv(s, grid, cfg.params));
  };
  SampleCallback on_sample;
  if (cfg.snapshot_stride > 0)
    on_sample = [&](const State& s, size_t idx) {
      if (idx % (size_t)cfg.snapshot_stride == 0) write_snapshot(s);
    };

  oc.result = run(s0, grid, cfg.params, cfg.integrator, on_sample);
  oc.exit_code = halt_exit_code(oc.result.trace.halt);

  atomic_write(out / "trace.csv", trace_csv(oc.result.trace));
  if (snap == 0) write_snapshot(s0);
  write_snapshot(oc.result.final_state);
  atomic_write(out / "manifest.json",
               manifest_json(cfg, oc.result.trace, oc.result.final_state.t,
                             oc.exit_code, "")
                   .dump(2) +
                   "\n");
  if (!quiet)
    std::cerr << "run: " << halt_name(oc.result.trace.halt) << " at t="
              << format_double(oc.result.final_state.t) << " ("
              << oc.result.trace.accepted << " steps, "
              << oc.result.trace.rejected << " rejections)\n";
  return oc;
}

json config_error_manifest(const std::string& msg) {
  json m;
  m["version"] = kVersion;
  m["halt_reason"] = "config_error";
  m["exit_code"] = kExitConfigError;
  m["error"] = msg;
  return m;
}

// Euclidean norm of the concatenated (h, m, gamma) deviations per sample.
std::vector<double> combined_norms(const std::vector<TraceSample>& samples) {
  std::vector<double> out(samples.size());
  for (size_t i = 0; i < samples.size(); ++i)
    out[i] = std::sqrt(samples[i].l2_h * samples[i].l2_h +
                       samples[i].l2_m * samples[i].l2_m +
                       samples[i].l2_gamma * samples[i].l2_gamma);
  return out;
}

struct TailFit {
  bool ok = false;
  DecayFit fit;
  std::string note;
};

TailFit fit_tail(const std::vector<double>& times, const std::vector<double>& norms) {
  TailFit tf;
  if (times.size() < 8) {
    tf.note = "insufficient tail";
    return tf;
  }
  const double floor = norms.front() * 1e-10;
  size_t first = times.size() / 2;
  size_t last = times.size();
  while (last > first && !(norms[last - 1] > floor)) --last;
  if (last - first < 5) {
    tf.note = "insufficient tail";
    return tf;
  }
  tf.fit = fit_decay_rate(times, norms, first, last);
  tf.ok = true;
  return tf;
}

json linstab_report(const RunConfig& cfg) {
  const Grid grid(cfg.n_cells, cfg.params.L);
  const Equilibrium eq =
      equilibrium_from(cfg.initial.h_star, cfg.initial.eta_star, cfg.params);

  json rep;
  rep["equilibrium"] = {{"h_star", eq.h_star},
                        {"eta_star", eq.eta_star},
                        {"m_star", eq.m_star},
                        {"gamma_star", eq.gamma_star}};
  rep["n_cells"] = cfg.n_cells;
  rep["params"] = config_to_json(cfg)["params"];

  const double q_max = q_admissible_max(cfg.params);
  json bq_list = json::array();
  if (std::isfinite(q_max)) {
    rep["q_max"] = q_max;
    std::vector<double> qs = cfg.linstab_q_values;
    if (qs.empty())
      for (int k = 1; k <= cfg.linstab_n_q; ++k)
        qs.push_back(q_max * k / (cfg.linstab_n_q + 1));
    for (double q : qs) {
      const BqMatrix b = bq_matrix(q, eq, cfg.params);
      const PdCertificate cert = bq_is_positive_definite(b);
      bq_list.push_back({{"q", q},
                         {"eigenvalues", cert.eigenvalues},
                         {"positive_definite", cert.positive_definite}});
    }
  } else {
    rep["q_max"] = nullptr;
    rep["note"] = "sigma'(0) = 0: q bound unbounded, b_q certificate skipped";
  }
  rep["bq"] = bq_list;

  const LinearOperator op = assemble_linearized(grid, cfg.params, eq);
  const Spectrum sp = spectrum(op);
  rep["spectral_bound"] = sp.spectral_bound;
  rep["omega0_num"] = sp.omega0;
  json evs = json::array();
  for (const auto& ev : sp.eigenvalues)
    evs.push_back({{"re", ev.real()}, {"im", ev.imag()}});
  rep["eigenvalues"] = evs;
  rep["comparison"] = nullptr;
  return rep;
}

}  // namespace

int cmd_simulate(const fs::path& config_path, const fs::path& out_dir,
                 std::optional<uint64_t> seed_override, bool quiet) {
  RunConfig cfg;
  try {
    cfg = load_config_file(config_path);
    if (seed_override) cfg.seed = *seed_override;
  } catch (const std::exception& e) {
    fs::create_directories(out_dir);
    atomic_write(out_dir / "manifest.json",
                 config_error_manifest(e.what()).dump(2) + "\n");
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
  try {
    return simulate_to_dir(cfg, out_dir, quiet).exit_code;
  } catch (const std::exception& e) {
    atomic_write(out_dir / "manifest.json",
                 config_error_manifest(e.what()).dump(2) + "\n");
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
}

int cmd_linstab(const fs::path& config_path, const fs::path& out_dir, bool quiet) {
  RunConfig cfg;
  try {
    cfg = load_config_file(config_path);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
  try {
    const json rep = linstab_report(cfg);
    fs::create_directories(out_dir);
    atomic_write(out_dir / "linstab.json", rep.dump(2) + "\n");
    if (!quiet)
      std::cerr << "linstab: spectral bound "
                << format_double(rep["spectral_bound"].get<double>()) << "\n";
    return kExitOk;
  } catch (const std::runtime_error& e) {
    std::cerr << "eigensolver failure: " << e.what() << "\n";
    return kExitEigensolverFailure;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
}

int cmd_compare(const fs::path& run_dir, const fs::path& linstab_dir, bool quiet) {
  try {
    std::ifstream mf(run_dir / "manifest.json");
    if (!mf) throw std::runtime_error("missing " + (run_dir / "manifest.json").string());
    const json manifest = json::parse(mf);
    std::ifstream lf(linstab_dir / "linstab.json");
    if (!lf) throw std::runtime_error("missing " + (linstab_dir / "linstab.json").string());
    json lin = json::parse(lf);

    if (manifest["config"]["params"] != lin["params"])
      throw std::runtime_error("parameter mismatch between run and linstab artifacts");

    // read the sampled norms back from trace.csv
    std::ifstream tf(run_dir / "trace.csv");
    if (!tf) throw std::runtime_error("missing " + (run_dir / "trace.csv").string());
    std::string line;
    std::getline(tf, line);  // header
    std::vector<double> times, norms;
    while (std::getline(tf, line)) {
      if (line.empty()) continue;
      std::vector<double> cols;
      std::stringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ',')) cols.push_back(std::stod(cell));
      if (cols.size() != 13) throw std::runtime_error("bad trace row: " + line);
      times.push_back(cols[0]);
      norms.push_back(std::sqrt(cols[10] * cols[10] + cols[11] * cols[11] +
                                cols[12] * cols[12]));
    }

    const TailFit tail = fit_tail(times, norms);
    const double omega0 = lin["omega0_num"].get<double>();
    const double bound = lin["spectral_bound"].get<double>();

    json cmp;
    cmp["omega0_num"] = omega0;
    cmp["spectral_bound"] = bound;
    if (tail.ok) {
      cmp["omega_fit"] = tail.fit.omega;
      cmp["r_squared"] = tail.fit.r_squared;
      if (omega0 > 0.0)
        cmp["ratio"] = tail.fit.omega / omega0;
      else
        cmp["ratio"] = nullptr;
      cmp["decaying"] = tail.fit.omega > 0.0;
    } else {
      cmp["omega_fit"] = nullptr;
      cmp["flag"] = tail.note;
    }
    cmp["spectrally_stable"] = bound < 0.0;
    if (tail.ok)
      cmp["verdict"] = (tail.fit.omega > 0.0) == (bound < 0.0) ? "consistent"
                                                               : "inconsistent";
    else
      cmp["verdict"] = "insufficient_data";

    lin["comparison"] = cmp;
    atomic_write(linstab_dir / "linstab.json", lin.dump(2) + "\n");
    atomic_write(run_dir / "compare.json", cmp.dump(2) + "\n");
    if (!quiet) std::cerr << "compare: " << cmp["verdict"] << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "compare error: " << e.what() << "\n";
    return kExitConfigError;
  }
}

int cmd_sweep(const fs::path& config_path, const fs::path& out_dir,
              std::optional<uint64_t> seed_override, bool quiet) {
  json sweep_spec;
  RunConfig base;
  std::vector<std::string> names;
  std::vector<std::vector<json>> values;
  size_t total = 1;
  try {
    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot open " + config_path.string());
    sweep_spec = json::parse(in);
    base = parse_config(sweep_spec.at("base"));
    if (seed_override) base.seed = *seed_override;

    for (auto& [key, vals] : sweep_spec.at("sweep").items()) {
      names.push_back(key);
      values.push_back(std::vector<json>(vals.begin(), vals.end()));
      total *= values.back().size();
    }
    const size_t cap = sweep_spec.value("max_runs", (size_t)256);
    if (total == 0 || total > cap)
      throw std::runtime_error("sweep size " + std::to_string(total) +
                               " outside (0, " + std::to_string(cap) + "]");
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }

  fs::create_directories(out_dir);

  // apply "a.b.c" -> base json path
  auto with_overrides = [&](size_t idx, json& echo) {
    json j = config_to_json(base);
    for (size_t k = 0; k < names.size(); ++k) {
      const json& v = values[k][idx % values[k].size()];
      idx /= values[k].size();
      json* node = &j;
      std::string path = names[k];
      size_t pos;
      while ((pos = path.find('.')) != std::string::npos) {
        node = &(*node)[path.substr(0, pos)];
        path = path.substr(pos + 1);
      }
      (*node)[path] = v;
      echo[names[k]] = v;
    }
    return parse_config(j);
  };

  size_t workers = std::thread::hardware_concurrency();
  if (const char* env = std::getenv("LUBRISURF_THREADS"))
    workers = std::max<size_t>(1, std::strtoul(env, nullptr, 10));
  workers = std::min(workers, total);

  std::vector<std::string> rows(total);
  std::atomic<size_t> next{0};

  auto worker = [&]() {
    for (size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1)) {
      char dir[32];
      std::snprintf(dir, sizeof(dir), "run_%04zu", i);
      std::ostringstream row;
      row << i;
      json echo;
      try {
        const RunConfig cfg = with_overrides(i, echo);
        for (const auto& nm : names) row << ',' << echo[nm].dump();
        const SimOutcome oc = simulate_to_dir(cfg, out_dir / dir, true);

        const Grid grid(cfg.n_cells, cfg.params.L);
        const SteadyVerdict sv =
            classify_steady(oc.result.final_state, grid, cfg.params, 1e-6);
        const char* steady = sv.kind == SteadyKind::SteadyConstant
                                 ? "steady_constant"
                                 : (sv.kind == SteadyKind::SteadyNonconforming
                                        ? "steady_nonconforming"
                                        : "not_steady");

        const auto& ss = oc.result.trace.samples;
        std::vector<double> times(ss.size());
        for (size_t k = 0; k < ss.size(); ++k) times[k] = ss[k].t;
        const TailFit tail = fit_tail(times, combined_norms(ss));

        double omega0 = std::nan("");
        try {
          const Equilibrium eq = equilibrium_from(cfg.initial.h_star,
                                                  cfg.initial.eta_star, cfg.params);
          omega0 = spectrum(assemble_linearized(grid, cfg.params, eq)).omega0;
        } catch (const std::exception&) {
        }

        double mass_drift_h = 0.0, mass_drift_s = 0.0, energy_rise = 0.0;
        for (size_t k = 1; k < ss.size(); ++k) {
          mass_drift_h = std::max(
              mass_drift_h, std::abs(ss[k].fluid_mass - ss[0].fluid_mass));
          mass_drift_s = std::max(mass_drift_s, std::abs(ss[k].surfactant_mass -
                                                         ss[0].surfactant_mass));
          energy_rise =
              std::max(energy_rise, ss[k].energy - ss[k - 1].energy);
        }

        row << ',' << halt_name(oc.result.trace.halt) << ',' << steady << ','
            << (tail.ok ? format_double(tail.fit.omega) : "nan") << ','
            << format_double(omega0) << ',' << format_double(mass_drift_h)
            << ',' << format_double(mass_drift_s) << ','
            << format_double(energy_rise);
      } catch (const std::exception& e) {
        row.str("");
        row << i;
        for (const auto& nm : names)
          row << ',' << (echo.contains(nm) ? echo[nm].dump() : "");
        row << ",error,,nan,nan,nan,nan,nan";
        fs::create_directories(out_dir / dir);
        atomic_write(out_dir / dir / "error.txt", std::string(e.what()) + "\n");
      }
      rows[i] = row.str();
    }
  };

  std::vector<std::thread> pool;
  for (size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  std::ostringstream csv;
  csv << "run_id";
  for (const auto& nm : names) csv << ',' << nm;
  csv << ",halt_reason,steady,omega_fit,omega0_num,max_fluid_mass_drift,"
         "max_surfactant_mass_drift,max_energy_increase\n";
  for (const auto& r : rows) csv << r << '\n';
  atomic_write(out_dir / "summary.csv", csv.str());
  if (!quiet) std::cerr << "sweep: " << total << " runs complete\n";
  return kExitOk;
}

}  // namespace lubrisurf::cli
