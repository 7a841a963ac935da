#pragma once

#include "lubrisurf/model.hpp"

namespace lubrisurf {

// Face-interpolated values and gradients, arrays of length n_cells+1.
// Boundary faces (0 and n) carry the cell value and zero gradient.
struct FaceData {
  std::vector<double> h, m, gamma, sigma_p;        // arithmetic face means
  std::vector<double> dh, dm, dgamma, dsigma;      // face gradients
};

// Fluxes at all faces, boundary faces exactly zero.
struct FluxSet {
  std::vector<double> flux_h, flux_m, flux_gamma;
};

struct RhsArrays {
  std::vector<double> dh, dm, dgamma;
};

FaceData face_values(const State& s, const Grid& g, const SurfaceTensionLaw& law);

FluxSet compute_fluxes(const State& s, const Grid& g, const Params& p);
FluxSet compute_fluxes_serial(const State& s, const Grid& g, const Params& p);

void sorption_source(const State& s, const Params& p,
                     std::vector<double>& source_m,
                     std::vector<double>& source_gamma);

// Semi-discrete right-hand side of the (h, m, gamma) system:
// d(field)_i = (F_{i+1} - F_i)/dx + source_i, zero-flux walls.
// rhs() parallelizes the face and cell loops; rhs_serial() is the reference
// implementation, bit-identical by construction.
RhsArrays rhs(const State& s, const Grid& g, const Params& p);
RhsArrays rhs_serial(const State& s, const Grid& g, const Params& p);

double rhs_inf_norm(const RhsArrays& r);

}  // namespace lubrisurf
