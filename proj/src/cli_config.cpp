#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <numeric>
#include <random>

#include <nlohmann/json.hpp>

#include "lubrisurf/cli.hpp"

namespace lubrisurf::cli {

using nlohmann::json;

namespace {

SurfaceTensionLaw parse_law(const json& j) {
  const std::string type = j.value("type", "linear");
  if (type == "linear") return SurfaceTensionLaw::linear();
  if (type == "sheludko") return SurfaceTensionLaw::sheludko(j.value("alpha", 1.0));
  if (type == "constant") return SurfaceTensionLaw::constant();
  throw std::invalid_argument("unknown sigma_law type '" + type + "'");
}

json law_to_json(const SurfaceTensionLaw& law) {
  switch (law.kind) {
    case SigmaLawKind::Linear: return {{"type", "linear"}};
    case SigmaLawKind::Sheludko: return {{"type", "sheludko"}, {"alpha", law.alpha}};
    case SigmaLawKind::Constant: return {{"type", "constant"}};
  }
  return {};
}

Scheme parse_scheme(const std::string& s) {
  if (s == "imex") return Scheme::Imex;
  if (s == "rk2") return Scheme::ExplicitRK2;
  throw std::invalid_argument("unknown scheme '" + s + "' (imex|rk2)");
}

InitialCondition parse_initial(const json& j) {
  InitialCondition ic;
  const std::string type = j.value("type", "perturbed_equilibrium");
  if (type == "perturbed_equilibrium") {
    ic.kind = InitialCondition::Kind::PerturbedEquilibrium;
    ic.h_star = j.value("h_star", 1.0);
    ic.eta_star = j.value("eta_star", 0.01);
    ic.mode = j.value("mode", 1);
    ic.amp_h = j.value("amp_h", 0.01);
    ic.amp_m = j.value("amp_m", 0.0);
    ic.amp_gamma = j.value("amp_gamma", 0.0);
    if (ic.mode < 0) throw std::invalid_argument("mode must be >= 0");
  } else if (type == "random_noise") {
    ic.kind = InitialCondition::Kind::RandomNoise;
    ic.h_star = j.value("h_star", 1.0);
    ic.eta_star = j.value("eta_star", 0.01);
    ic.amplitude = j.value("amplitude", 0.01);
  } else if (type == "file") {
    ic.kind = InitialCondition::Kind::File;
    ic.path = j.at("path").get<std::string>();
  } else if (type == "manufactured") {
    ic.kind = InitialCondition::Kind::Manufactured;
    ic.id = j.at("id").get<std::string>();
    ic.h_star = j.value("h_star", 1.0);
    ic.eta_star = j.value("eta_star", 0.01);
  } else {
    throw std::invalid_argument("unknown initial condition type '" + type + "'");
  }
  return ic;
}

json initial_to_json(const InitialCondition& ic) {
  switch (ic.kind) {
    case InitialCondition::Kind::PerturbedEquilibrium:
      return {{"type", "perturbed_equilibrium"}, {"h_star", ic.h_star},
              {"eta_star", ic.eta_star},         {"mode", ic.mode},
              {"amp_h", ic.amp_h},               {"amp_m", ic.amp_m},
              {"amp_gamma", ic.amp_gamma}};
    case InitialCondition::Kind::RandomNoise:
      return {{"type", "random_noise"},
              {"h_star", ic.h_star},
              {"eta_star", ic.eta_star},
              {"amplitude", ic.amplitude}};
    case InitialCondition::Kind::File:
      return {{"type", "file"}, {"path", ic.path}};
    case InitialCondition::Kind::Manufactured:
      return {{"type", "manufactured"},
              {"id", ic.id},
              {"h_star", ic.h_star},
              {"eta_star", ic.eta_star}};
  }
  return {};
}

}  // namespace

RunConfig parse_config(const json& j) {
  RunConfig c;
  if (j.contains("params")) {
    const json& p = j["params"];
    c.params.G = p.value("G", 1.0);
    c.params.D = p.value("D", 0.1);
    c.params.delta = p.value("delta", 0.1);
    c.params.beta = p.value("beta", 1.0);
    c.params.K = p.value("K", 1.0);
    c.params.L = p.value("L", 1.0);
    if (p.contains("sigma_law")) c.params.law = parse_law(p["sigma_law"]);
  }
  c.params.validate();

  c.n_cells = j.contains("grid") ? j["grid"].value("n_cells", 64) : 64;
  if (c.n_cells < 4) throw std::invalid_argument("n_cells must be >= 4");

  if (j.contains("integrator")) {
    const json& it = j["integrator"];
    c.integrator.scheme = parse_scheme(it.value("scheme", "imex"));
    c.integrator.dt_init = it.value("dt_init", 1e-4);
    c.integrator.dt_min = it.value("dt_min", 1e-12);
    c.integrator.dt_max = it.value("dt_max", 1e-2);
    c.integrator.safety = it.value("safety", 0.4);
    c.integrator.t_end = it.value("t_end", 1.0);
    c.integrator.steady_tol = it.value("steady_tol", 1e-11);
    c.integrator.positivity_floor = it.value("positivity_floor", 1e-10);
    c.integrator.max_steps = it.value("max_steps", (long)100000000);
  }
  if (j.contains("output"))
    c.integrator.sample_dt = j["output"].value("sample_dt", 0.01);
  c.integrator.validate();

  if (j.contains("initial")) c.initial = parse_initial(j["initial"]);
  if (j.contains("output"))
    c.snapshot_stride = j["output"].value("snapshot_stride", 10);
  c.seed = j.value("seed", (uint64_t)1);
  if (j.contains("linstab")) {
    c.linstab_n_q = j["linstab"].value("n_q", 8);
    if (j["linstab"].contains("q_values"))
      c.linstab_q_values = j["linstab"]["q_values"].get<std::vector<double>>();
  }
  return c;
}

json config_to_json(const RunConfig& c) {
  json j;
  j["params"] = {{"G", c.params.G},       {"D", c.params.D},
                 {"delta", c.params.delta}, {"beta", c.params.beta},
                 {"K", c.params.K},       {"L", c.params.L},
                 {"sigma_law", law_to_json(c.params.law)}};
  j["grid"] = {{"n_cells", c.n_cells}};
  j["integrator"] = {
      {"scheme", c.integrator.scheme == Scheme::Imex ? "imex" : "rk2"},
      {"dt_init", c.integrator.dt_init},
      {"dt_min", c.integrator.dt_min},
      {"dt_max", c.integrator.dt_max},
      {"safety", c.integrator.safety},
      {"t_end", c.integrator.t_end},
      {"steady_tol", c.integrator.steady_tol},
      {"positivity_floor", c.integrator.positivity_floor},
      {"max_steps", c.integrator.max_steps}};
  j["initial"] = initial_to_json(c.initial);
  j["output"] = {{"sample_dt", c.integrator.sample_dt},
                 {"snapshot_stride", c.snapshot_stride}};
  j["seed"] = c.seed;
  json ls = {{"n_q", c.linstab_n_q}};
  if (!c.linstab_q_values.empty()) ls["q_values"] = c.linstab_q_values;
  j["linstab"] = ls;
  return j;
}

RunConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  json j = json::parse(in);
  if (j.contains("config")) j = j["config"];  // accept a manifest
  return parse_config(j);
}

State build_initial_state(const RunConfig& c, const Grid& g) {
  const int n = g.n_cells;
  const Equilibrium eq = equilibrium_from(c.initial.h_star, c.initial.eta_star, c.params);
  State s = State::constant(n, eq.h_star, eq.m_star, eq.gamma_star);

  auto mean_correct = [&](std::vector<double>& f, const std::vector<double>& bump,
                          double amp) {
    const double mu = std::accumulate(bump.begin(), bump.end(), 0.0) / n;
    for (int i = 0; i < n; ++i) f[i] += amp * (bump[i] - mu);
  };

  switch (c.initial.kind) {
    case InitialCondition::Kind::PerturbedEquilibrium: {
      std::vector<double> bump(n);
      for (int i = 0; i < n; ++i)
        bump[i] = std::cos(c.initial.mode * std::numbers::pi * g.center(i) / g.L);
      mean_correct(s.h, bump, c.initial.amp_h);
      mean_correct(s.m, bump, c.initial.amp_m);
      mean_correct(s.gamma, bump, c.initial.amp_gamma);
      break;
    }
    case InitialCondition::Kind::RandomNoise: {
      std::mt19937_64 rng(c.seed);
      auto uniform = [&rng]() {
        return 2.0 * ((rng() >> 11) * 0x1.0p-53) - 1.0;  // libc-independent
      };
      std::vector<double> bh(n), bm(n), bg(n);
      for (int i = 0; i < n; ++i) bh[i] = uniform();
      for (int i = 0; i < n; ++i) bm[i] = uniform();
      for (int i = 0; i < n; ++i) bg[i] = uniform();
      mean_correct(s.h, bh, c.initial.amplitude);
      mean_correct(s.m, bm, c.initial.amplitude * eq.m_star);
      mean_correct(s.gamma, bg, c.initial.amplitude * eq.gamma_star);
      break;
    }
    case InitialCondition::Kind::File: {
      std::ifstream in(c.initial.path);
      if (!in)
        throw std::invalid_argument("cannot open initial-condition file " +
                                    c.initial.path);
      std::string line;
      std::getline(in, line);  // header: x,h,m,gamma
      s.h.clear();
      s.m.clear();
      s.gamma.clear();
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        double x, h, m, ga;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &x, &h, &m, &ga) != 4)
          throw std::invalid_argument("bad initial-condition row: " + line);
        s.h.push_back(h);
        s.m.push_back(m);
        s.gamma.push_back(ga);
      }
      if ((int)s.h.size() != n)
        throw std::invalid_argument("initial-condition file has " +
                                    std::to_string(s.h.size()) + " rows, grid has " +
                                    std::to_string(n) + " cells");
      break;
    }
    case InitialCondition::Kind::Manufactured: {
      if (c.initial.id == "gaussian_bump") {
        std::vector<double> bump(n);
        for (int i = 0; i < n; ++i) {
          const double r = g.center(i) / g.L - 0.5;
          bump[i] = std::exp(-50.0 * r * r);
        }
        mean_correct(s.h, bump, 0.1 * eq.h_star);
      } else {
        throw std::invalid_argument("unknown manufactured profile '" +
                                    c.initial.id + "'");
      }
      break;
    }
  }
  s.validate();
  return s;
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace lubrisurf::cli
