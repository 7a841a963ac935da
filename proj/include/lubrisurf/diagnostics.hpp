#pragma once

#include "lubrisurf/integrate.hpp"
#include "lubrisurf/model.hpp"

namespace lubrisurf {

// Energy value and the five nonnegative dissipation terms (stored without the
// leading minus signs of the energy equality).
struct EnergyReport {
  double energy = 0.0;
  double diss_surface_diffusion = 0.0;        // D * int phi''(gamma) |dx gamma|^2
  double diss_bulk_diffusion = 0.0;           // (delta/beta) * int phi''(bm/h) h |dx(bm/h)|^2
  double diss_marangoni = 0.0;                // (1/4) * int h |dx sigma|^2
  double diss_gravity_marangoni_square = 0.0; // int (G/sqrt3 h^1.5 dx h - sqrt3/2 h^0.5 dx sigma)^2
  double diss_sorption = 0.0;                 // K * int (phi'(gamma)-phi'(bm/h)) (gamma-bm/h)
  double residual = 0.0;

  double diss_sum() const {
    return diss_surface_diffusion + diss_bulk_diffusion + diss_marangoni +
           diss_gravity_marangoni_square + diss_sorption;
  }
};

double fluid_mass(const State& s, const Grid& g);
double surfactant_mass(const State& s, const Grid& g);

double energy(const State& s, const Grid& g, const Params& p, const Entropy& ent);

// The five dissipation terms, computed with the same face gradients as the
// flux discretization.
EnergyReport dissipation(const State& s, const Grid& g, const Params& p,
                         const Entropy& ent);

// Central-difference d/dt of sampled energy plus the sampled dissipation sum.
// Needs >= 3 samples at uniform cadence; one-sided differences at endpoints.
std::vector<double> energy_residual(const RunTrace& trace);

enum class SteadyKind { NotSteady, SteadyConstant, SteadyNonconforming };

struct SteadyVerdict {
  SteadyKind kind = SteadyKind::NotSteady;
  double h_star = 0.0, m_star = 0.0, gamma_star = 0.0;  // for SteadyConstant
};

SteadyVerdict classify_steady(const State& s, const Grid& g, const Params& p,
                              double tol);

struct DecayFit {
  double omega = 0.0;
  double r_squared = 0.0;
};

// Least-squares slope of log(norm) vs time over samples [first, last).
DecayFit fit_decay_rate(const std::vector<double>& times,
                        const std::vector<double>& norms, size_t first,
                        size_t last);

}  // namespace lubrisurf
