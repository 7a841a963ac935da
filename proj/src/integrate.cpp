#include "lubrisurf/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lubrisurf/diagnostics.hpp"

namespace lubrisurf {

namespace {

// Positivity / finiteness scan; returns a rejection if the candidate leaves
// the admissible set.
std::optional<Rejection> inadmissible(const State& s, double floor) {
  const std::vector<double>* fields[3] = {&s.h, &s.m, &s.gamma};
  const Rejection::Field names[3] = {Rejection::H, Rejection::M, Rejection::Gamma};
  for (int f = 0; f < 3; ++f) {
    const auto& v = *fields[f];
    for (int i = 0; i < (int)v.size(); ++i) {
      if (!std::isfinite(v[i])) return Rejection{names[f], i, true};
      if (v[i] <= floor) return Rejection{names[f], i, false};
    }
  }
  return std::nullopt;
}

StepResult step_rk2(const State& s, const Grid& g, const Params& p,
                    const IntegratorConfig& cfg, double dt) {
  const int n = s.n();
  const RhsArrays f1 = rhs(s, g, p);

  State mid = s;
  for (int i = 0; i < n; ++i) {
    mid.h[i] = s.h[i] + dt * f1.dh[i];
    mid.m[i] = s.m[i] + dt * f1.dm[i];
    mid.gamma[i] = s.gamma[i] + dt * f1.dgamma[i];
  }
  if (auto rej = inadmissible(mid, cfg.positivity_floor))
    return {std::nullopt, rej};

  const RhsArrays f2 = rhs(mid, g, p);
  State out = s;
  out.t = s.t + dt;
  for (int i = 0; i < n; ++i) {
    out.h[i] = s.h[i] + 0.5 * dt * (f1.dh[i] + f2.dh[i]);
    out.m[i] = s.m[i] + 0.5 * dt * (f1.dm[i] + f2.dm[i]);
    out.gamma[i] = s.gamma[i] + 0.5 * dt * (f1.dgamma[i] + f2.dgamma[i]);
  }
  if (auto rej = inadmissible(out, cfg.positivity_floor))
    return {std::nullopt, rej};
  return {std::move(out), std::nullopt};
}

// Conservative finalize of an implicit diffusion substep: recompute the face
// fluxes from the solved field and apply them in flux form, so the cell sum
// telescopes exactly.
void apply_diffusion_flux_form(std::vector<double>& out,
                               const std::vector<double>& rhs_cells,
                               const std::vector<double>& solved, double nu,
                               double dt, double dx) {
  const int n = (int)rhs_cells.size();
  std::vector<double> flux(n + 1, 0.0);
  for (int f = 1; f < n; ++f) flux[f] = nu * (solved[f] - solved[f - 1]) / dx;
  out.resize(n);
  for (int i = 0; i < n; ++i)
    out[i] = rhs_cells[i] + dt * (flux[i + 1] - flux[i]) / dx;
}

StepResult step_imex(const State& s, const Grid& g, const Params& p,
                     const IntegratorConfig& cfg, double dt) {
  const int n = s.n();
  const double inv_dx = 1.0 / g.dx;

  // Explicit part: full fluxes minus the linear diffusive fluxes of m, gamma.
  const FluxSet fs = compute_fluxes(s, g, p);
  std::vector<double> fm_expl(n + 1, 0.0), fg_expl(n + 1, 0.0);
  for (int f = 1; f < n; ++f) {
    fm_expl[f] = fs.flux_m[f] - p.delta * (s.m[f] - s.m[f - 1]) * inv_dx;
    fg_expl[f] = fs.flux_gamma[f] - p.D * (s.gamma[f] - s.gamma[f - 1]) * inv_dx;
  }

  State out = s;
  out.t = s.t + dt;
  std::vector<double> m_tilde(n), g_tilde(n);
  for (int i = 0; i < n; ++i) {
    const double src = p.K * (p.beta * s.m[i] / s.h[i] - s.gamma[i]);
    out.h[i] = s.h[i] + dt * (fs.flux_h[i + 1] - fs.flux_h[i]) * inv_dx;
    m_tilde[i] = s.m[i] + dt * ((fm_expl[i + 1] - fm_expl[i]) * inv_dx - src);
    g_tilde[i] = s.gamma[i] + dt * ((fg_expl[i + 1] - fg_expl[i]) * inv_dx + src);
  }

  std::vector<double> m_solved, g_solved;
  implicit_diffusion_solve(m_solved, m_tilde, dt * p.delta * inv_dx * inv_dx);
  implicit_diffusion_solve(g_solved, g_tilde, dt * p.D * inv_dx * inv_dx);
  apply_diffusion_flux_form(out.m, m_tilde, m_solved, p.delta, dt, g.dx);
  apply_diffusion_flux_form(out.gamma, g_tilde, g_solved, p.D, dt, g.dx);

  if (auto rej = inadmissible(out, cfg.positivity_floor))
    return {std::nullopt, rej};
  return {std::move(out), std::nullopt};
}

}  // namespace

void implicit_diffusion_solve(std::vector<double>& x,
                              const std::vector<double>& b, double r) {
  const int n = (int)b.size();
  x = b;
  if (r == 0.0) return;
  // Thomas algorithm for rows (1+r, -r | -r, 1+2r, -r | -r, 1+r).
  std::vector<double> c(n), d(n);
  double diag0 = 1.0 + r;
  c[0] = -r / diag0;
  d[0] = b[0] / diag0;
  for (int i = 1; i < n; ++i) {
    const double diag = (i == n - 1) ? 1.0 + r : 1.0 + 2.0 * r;
    const double denom = diag + r * c[i - 1];
    c[i] = -r / denom;
    d[i] = (b[i] + r * d[i - 1]) / denom;
  }
  x[n - 1] = d[n - 1];
  for (int i = n - 2; i >= 0; --i) x[i] = d[i] - c[i] * x[i + 1];
}

StepResult step(const State& s, const Grid& g, const Params& p,
                const IntegratorConfig& cfg, double dt) {
  if (cfg.scheme == Scheme::ExplicitRK2) return step_rk2(s, g, p, cfg, dt);
  return step_imex(s, g, p, cfg, dt);
}

double stable_dt_estimate(const State& s, const Grid& g, const Params& p,
                          const IntegratorConfig& cfg) {
  double amax = 0.0;
  for (int i = 0; i < s.n(); ++i) {
    const double sp = p.law.sigma_prime(s.gamma[i]);
    amax = std::max(amax, p.G / 3.0 * s.h[i] * s.h[i] * s.h[i]);
    if (cfg.scheme == Scheme::ExplicitRK2) {
      amax = std::max(amax, p.delta);
      amax = std::max(amax, p.D - s.h[i] * s.gamma[i] * sp);
    } else {
      amax = std::max(amax, -s.h[i] * s.gamma[i] * sp);
    }
  }
  if (amax <= 0.0) return cfg.dt_max;
  return std::min(cfg.dt_max, cfg.safety * g.dx * g.dx / amax);
}

RunResult run(const State& s0, const Grid& g, const Params& p,
              const IntegratorConfig& cfg, const SampleCallback& on_sample) {
  s0.validate();
  p.validate();
  cfg.validate();
  const Entropy ent = entropy_build(p.law);

  // Equilibrium reference pinned by the conserved means.
  const int n = s0.n();
  auto mean = [&](const std::vector<double>& f) {
    return std::accumulate(f.begin(), f.end(), 0.0) / n;
  };
  const double h_star = mean(s0.h);
  const double eta_star = mean(s0.m) + mean(s0.gamma);
  const double m_star = h_star * eta_star / (p.beta + h_star);
  const double gamma_star = p.beta * eta_star / (p.beta + h_star);

  RunResult result;
  result.final_state = s0;
  State& u = result.final_state;
  RunTrace& trace = result.trace;

  auto sample = [&]() {
    TraceSample ts;
    ts.t = u.t;
    ts.fluid_mass = fluid_mass(u, g);
    ts.surfactant_mass = surfactant_mass(u, g);
    const EnergyReport rep = dissipation(u, g, p, ent);
    ts.energy = rep.energy;
    ts.diss[0] = rep.diss_surface_diffusion;
    ts.diss[1] = rep.diss_bulk_diffusion;
    ts.diss[2] = rep.diss_marangoni;
    ts.diss[3] = rep.diss_gravity_marangoni_square;
    ts.diss[4] = rep.diss_sorption;
    auto l2 = [&](const std::vector<double>& f, double ref) {
      double sum = 0.0;
      for (double v : f) sum += (v - ref) * (v - ref);
      return std::sqrt(sum * g.dx);
    };
    ts.l2_h = l2(u.h, h_star);
    ts.l2_m = l2(u.m, m_star);
    ts.l2_gamma = l2(u.gamma, gamma_star);
    trace.samples.push_back(ts);
    if (on_sample) on_sample(u, trace.samples.size() - 1);
  };

  sample();
  long next_sample_idx = 1;
  const double t0 = u.t;

  while (u.t < cfg.t_end && trace.accepted < cfg.max_steps) {
    const RhsArrays full = rhs(u, g, p);
    if (rhs_inf_norm(full) < cfg.steady_tol) {
      trace.halt = HaltReason::Steady;
      if (trace.samples.back().t < u.t) sample();
      return result;
    }

    const double t_next_sample = t0 + next_sample_idx * cfg.sample_dt;
    double dt = std::clamp(stable_dt_estimate(u, g, p, cfg), cfg.dt_min, cfg.dt_max);
    dt = std::min({dt, cfg.t_end - u.t, t_next_sample - u.t});

    StepResult sr = step(u, g, p, cfg, dt);
    while (!sr.accepted()) {
      ++trace.rejected;
      dt *= 0.5;
      if (dt < cfg.dt_min) {
        trace.halt = sr.rejection->non_finite ? HaltReason::NonFinite
                                              : HaltReason::PositivityLoss;
        trace.halt_cell = sr.rejection->cell;
        if (trace.samples.back().t < u.t) sample();
        return result;
      }
      sr = step(u, g, p, cfg, dt);
    }
    u = std::move(*sr.state);
    ++trace.accepted;

    if (u.t >= t_next_sample - 1e-12 * cfg.sample_dt) {
      sample();
      ++next_sample_idx;
    }
  }

  trace.halt = HaltReason::ReachedTEnd;
  if (trace.samples.back().t < u.t) sample();
  return result;
}

}  // namespace lubrisurf
