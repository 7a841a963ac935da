#pragma once

#include <optional>

#include "lubrisurf/discretize.hpp"
#include "lubrisurf/model.hpp"

namespace lubrisurf {

enum class Scheme { ExplicitRK2, Imex };

struct IntegratorConfig {
  Scheme scheme = Scheme::Imex;
  double dt_init = 1e-4;
  double dt_min = 1e-12;
  double dt_max = 1e-2;
  double safety = 0.4;           // in (0, 1); 0.5 puts the 4/dx^2 grid mode
                                 // exactly on the explicit stability boundary
  double t_end = 1.0;
  double steady_tol = 1e-11;     // steady detection on ||rhs||_inf
  double positivity_floor = 1e-10;
  double sample_dt = 0.01;       // trace sampling cadence
  long max_steps = 100000000;

  void validate() const {
    if (!(dt_min <= dt_init && dt_init <= dt_max))
      throw std::invalid_argument("require dt_min <= dt_init <= dt_max");
    if (!(safety > 0.0 && safety < 1.0))
      throw std::invalid_argument("safety must be in (0,1)");
    if (!(steady_tol > 0.0)) throw std::invalid_argument("steady_tol must be > 0");
    if (!(sample_dt > 0.0)) throw std::invalid_argument("sample_dt must be > 0");
  }
};

// Step rejection: which field lost positivity (or went non-finite) and where.
struct Rejection {
  enum Field { H, M, Gamma } field;
  int cell;
  bool non_finite;
};

struct StepResult {
  std::optional<State> state;    // empty on rejection
  std::optional<Rejection> rejection;
  bool accepted() const { return state.has_value(); }
};

enum class HaltReason { ReachedTEnd, Steady, PositivityLoss, NonFinite };

struct TraceSample {
  double t;
  double fluid_mass, surfactant_mass;
  double energy;
  double diss[5];
  double l2_h, l2_m, l2_gamma;
};

struct RunTrace {
  std::vector<TraceSample> samples;
  long accepted = 0;
  long rejected = 0;
  HaltReason halt = HaltReason::ReachedTEnd;
  int halt_cell = -1;            // for positivity/non-finite halts
};

struct RunResult {
  RunTrace trace;
  State final_state;
};

// One time step of size dt. ExplicitRK2 is a Heun step on the full rhs;
// Imex treats the linear diffusions of m and gamma implicitly (tridiagonal
// Neumann solves, flux-form finalize so the cell sums telescope exactly)
// and everything else explicitly.
StepResult step(const State& s, const Grid& g, const Params& p,
                const IntegratorConfig& cfg, double dt);

// safety * dx^2 / max effective diffusivity, read off the diagonal of the
// quasilinear coefficient matrix: G h^3/3, delta, D - h gamma sigma'(gamma).
// For Imex the implicit diffusivities delta and D are excluded.
double stable_dt_estimate(const State& s, const Grid& g, const Params& p,
                          const IntegratorConfig& cfg);

// on_sample, when set, is invoked with the state at every recorded trace
// sample (including the initial one), with the sample index.
using SampleCallback = std::function<void(const State&, size_t)>;

RunResult run(const State& s0, const Grid& g, const Params& p,
              const IntegratorConfig& cfg, const SampleCallback& on_sample = {});

// Solves the Neumann-closed tridiagonal system (I - r*Lap) x = b, where Lap is
// the flux-form second-difference operator, r = dt*diffusivity/dx^2.
void implicit_diffusion_solve(std::vector<double>& x,
                              const std::vector<double>& b, double r);

}  // namespace lubrisurf
