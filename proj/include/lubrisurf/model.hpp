#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace lubrisurf {

// Surface tension as a function of the surface surfactant concentration.
// Linear:   sigma(g) = 1 - g
// Sheludko: sigma(g) = (alpha+1) * (1 + c*g)^-3,  c = ((alpha+1)/alpha)^(1/3) - 1,
//           so that sigma(0) = alpha+1 and sigma(1) = alpha.
// Constant: sigma == 1 (switches Marangoni terms off; used for decoupled runs).
enum class SigmaLawKind { Linear, Sheludko, Constant };

struct SurfaceTensionLaw {
  SigmaLawKind kind = SigmaLawKind::Linear;
  double alpha = 1.0;  // Sheludko shape parameter, > 0

  static SurfaceTensionLaw linear() { return {SigmaLawKind::Linear, 0.0}; }
  static SurfaceTensionLaw sheludko(double a) {
    if (a <= 0.0) throw std::invalid_argument("Sheludko alpha must be > 0");
    return {SigmaLawKind::Sheludko, a};
  }
  static SurfaceTensionLaw constant() { return {SigmaLawKind::Constant, 0.0}; }

  double sheludko_slope() const {  // the constant c above
    return std::cbrt((alpha + 1.0) / alpha) - 1.0;
  }

  // Admissible upper bound of gamma. Sheludko is capped at 90% of 1/c;
  // the other laws admit any nonnegative gamma.
  double gamma_max() const {
    if (kind == SigmaLawKind::Sheludko) return 0.9 / sheludko_slope();
    return std::numeric_limits<double>::infinity();
  }

  void check_admissible(double g) const {
    if (!(g >= 0.0)) throw std::domain_error("gamma must be >= 0");
    if (g > gamma_max())
      throw std::domain_error("gamma beyond admissible Sheludko range");
  }

  double sigma(double g) const {
    check_admissible(g);
    switch (kind) {
      case SigmaLawKind::Linear: return 1.0 - g;
      case SigmaLawKind::Sheludko: {
        const double c = sheludko_slope();
        const double b = 1.0 + c * g;
        return (alpha + 1.0) / (b * b * b);
      }
      case SigmaLawKind::Constant: return 1.0;
    }
    return 0.0;  // unreachable
  }

  double sigma_prime(double g) const {
    check_admissible(g);
    switch (kind) {
      case SigmaLawKind::Linear: return -1.0;
      case SigmaLawKind::Sheludko: {
        const double c = sheludko_slope();
        const double b = 1.0 + c * g;
        return -3.0 * c * (alpha + 1.0) / (b * b * b * b);
      }
      case SigmaLawKind::Constant: return 0.0;
    }
    return 0.0;  // unreachable
  }
};

inline double sigma_eval(const SurfaceTensionLaw& law, double gamma) {
  return law.sigma(gamma);
}
inline double sigma_prime_eval(const SurfaceTensionLaw& law, double gamma) {
  return law.sigma_prime(gamma);
}

// Entropy phi with phi''(r) r = -sigma'(r), normalized so phi(1) = phi'(1) = 0.
// Closed forms for the Linear law (phi'' = 1/r, phi' = ln r, phi = r ln r - r + 1)
// and the Constant law (phi == 0); adaptive quadrature otherwise.
struct Entropy {
  SurfaceTensionLaw law;

  double d2phi(double r) const;
  double dphi(double r) const;
  double phi(double r) const;
};

Entropy entropy_build(const SurfaceTensionLaw& law);

struct Params {
  double G = 1.0;      // gravity number
  double D = 0.1;      // surface diffusivity
  double delta = 0.1;  // bulk horizontal diffusivity
  double beta = 1.0;   // solubility ratio
  double K = 1.0;      // sorption rate ratio
  double L = 1.0;      // domain length
  SurfaceTensionLaw law = SurfaceTensionLaw::linear();

  void validate() const {
    if (!(G >= 0.0)) throw std::invalid_argument("G must be >= 0");
    if (!(D > 0.0)) throw std::invalid_argument("D must be > 0");
    if (!(delta > 0.0)) throw std::invalid_argument("delta must be > 0");
    if (!(beta > 0.0)) throw std::invalid_argument("beta must be > 0");
    if (!(K >= 0.0)) throw std::invalid_argument("K must be >= 0");
    if (!(L > 0.0)) throw std::invalid_argument("L must be > 0");
  }
};

// Uniform cell-centered grid on (0, L): faces at i*dx, centers at (i+1/2)*dx.
struct Grid {
  int n_cells = 0;
  double L = 1.0;
  double dx = 0.0;

  Grid() = default;
  Grid(int n, double length) : n_cells(n), L(length), dx(length / n) {
    if (n < 4) throw std::invalid_argument("grid needs at least 4 cells");
    if (!(length > 0.0)) throw std::invalid_argument("L must be > 0");
  }

  double center(int i) const { return (i + 0.5) * dx; }
};

// Cell-averaged fields at one time instant. m is the scaled bulk surfactant
// m = h C0 / beta.
struct State {
  std::vector<double> h, m, gamma;
  double t = 0.0;

  int n() const { return static_cast<int>(h.size()); }

  void validate() const {
    if (m.size() != h.size() || gamma.size() != h.size())
      throw std::invalid_argument("state arrays must have equal length");
    for (int i = 0; i < n(); ++i) {
      if (!(h[i] > 0.0 && m[i] > 0.0 && gamma[i] > 0.0))
        throw std::domain_error("state positivity violated at cell " +
                                std::to_string(i));
    }
  }

  static State constant(int n, double h0, double m0, double g0, double t0 = 0.0) {
    State s;
    s.h.assign(n, h0);
    s.m.assign(n, m0);
    s.gamma.assign(n, g0);
    s.t = t0;
    return s;
  }
};

// C0 = beta m / h, well-defined thanks to the positivity of h.
inline std::vector<double> c0_from_state(const State& s, const Params& p) {
  std::vector<double> c0(s.h.size());
  for (size_t i = 0; i < s.h.size(); ++i) {
    if (!(s.h[i] > 0.0))
      throw std::domain_error("h must be positive at cell " + std::to_string(i));
    c0[i] = p.beta * s.m[i] / s.h[i];
  }
  return c0;
}

}  // namespace lubrisurf
