#pragma once

#include <array>
#include <complex>

#include "lubrisurf/densela.hpp"
#include "lubrisurf/discretize.hpp"
#include "lubrisurf/model.hpp"

namespace lubrisurf {

// Constant steady state parameterized by (h_star, eta_star):
//   m_star = h_star/(beta+h_star) * eta_star,
//   gamma_star = beta/(beta+h_star) * eta_star,
// so beta*m_star = h_star*gamma_star and m_star + gamma_star = eta_star.
struct Equilibrium {
  double h_star = 1.0;
  double eta_star = 0.0;
  double m_star = 0.0;
  double gamma_star = 0.0;
};

Equilibrium equilibrium_from(double h_star, double eta_star, const Params& p);

State equilibrium_state(const Equilibrium& eq, int n_cells);

// Discrete analogue of the mean-zero projection P: v is a stacked
// (h, m, gamma) vector of length 3n.
std::vector<double> project_mean_zero(const std::vector<double>& v,
                                      const Equilibrium& eq, const Params& p);

// Dense Jacobian of the nonlinear rhs at the equilibrium (3n x 3n), built
// with the same face discretization and Neumann closure as the solver.
struct LinearOperator {
  Matrix A;           // acts on stacked (h, m, gamma) cell vectors
  Grid grid;
  Equilibrium eq;
};

LinearOperator assemble_linearized(const Grid& g, const Params& p,
                                   const Equilibrium& eq);

// The symmetric 3x3 certificate matrix b_q at the equilibrium.
struct BqMatrix {
  std::array<std::array<double, 3>, 3> entries{};
  double q = 0.0;
};

BqMatrix bq_matrix(double q, const Equilibrium& eq, const Params& p);

// Admissibility bound 16 G D / (3 sigma'(0)^2); +infinity when sigma'(0) = 0.
double q_admissible_max(const Params& p);

struct PdCertificate {
  bool positive_definite = false;
  std::array<double, 3> eigenvalues{};  // ascending
  int failing_minor = 0;                // 1..3 when not positive definite
};

// Sylvester leading-minor test cross-checked against the symmetric
// eigenvalues; throws std::logic_error if the two routes disagree.
PdCertificate bq_is_positive_definite(const BqMatrix& b);

struct Spectrum {
  std::vector<std::complex<double>> eigenvalues;  // sorted by real part, desc
  double spectral_bound = 0.0;                    // max real part
  double omega0 = 0.0;                            // -spectral_bound when < 0
};

// Eigenvalues of the operator restricted to the constrained subspace
// {<h> = 0, <m+gamma> = 0} via explicit Householder deflation of the two
// neutral directions.
Spectrum spectrum(const LinearOperator& op);

}  // namespace lubrisurf
