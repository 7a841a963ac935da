#include "lubrisurf/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lubrisurf {

double fluid_mass(const State& s, const Grid& g) {
  double sum = 0.0;
  for (double v : s.h) sum += v;
  return sum * g.dx;
}

double surfactant_mass(const State& s, const Grid& g) {
  double sum = 0.0;
  for (int i = 0; i < s.n(); ++i) sum += s.gamma[i] + s.m[i];
  return sum * g.dx;
}

double energy(const State& s, const Grid& g, const Params& p, const Entropy& ent) {
  s.validate();
  double sum = 0.0;
  for (int i = 0; i < s.n(); ++i) {
    const double r = p.beta * s.m[i] / s.h[i];
    sum += ent.phi(s.gamma[i]) + s.h[i] / p.beta * ent.phi(r) +
           0.5 * p.G * s.h[i] * s.h[i];
  }
  return sum * g.dx;
}

EnergyReport dissipation(const State& s, const Grid& g, const Params& p,
                         const Entropy& ent) {
  s.validate();
  const int n = s.n();
  EnergyReport rep;
  rep.energy = energy(s, g, p, ent);

  const double inv_dx = 1.0 / g.dx;
  for (int f = 1; f < n; ++f) {
    const int l = f - 1, r = f;
    const double hf = 0.5 * (s.h[l] + s.h[r]);
    const double gf = 0.5 * (s.gamma[l] + s.gamma[r]);
    const double dg = (s.gamma[r] - s.gamma[l]) * inv_dx;
    const double dhf = (s.h[r] - s.h[l]) * inv_dx;
    const double dsigma = p.law.sigma_prime(gf) * dg;

    const double bl = p.beta * s.m[l] / s.h[l];
    const double br = p.beta * s.m[r] / s.h[r];
    const double bf = 0.5 * (bl + br);
    const double dbm = (br - bl) * inv_dx;

    rep.diss_surface_diffusion += p.D * ent.d2phi(gf) * dg * dg;
    rep.diss_bulk_diffusion += (p.delta / p.beta) * ent.d2phi(bf) * hf * dbm * dbm;
    rep.diss_marangoni += 0.25 * hf * dsigma * dsigma;
    const double sq = (p.G / std::sqrt(3.0)) * std::pow(hf, 1.5) * dhf -
                      (std::sqrt(3.0) / 2.0) * std::sqrt(hf) * dsigma;
    rep.diss_gravity_marangoni_square += sq * sq;
  }
  for (int i = 0; i < n; ++i) {
    const double b = p.beta * s.m[i] / s.h[i];
    rep.diss_sorption +=
        p.K * (ent.dphi(s.gamma[i]) - ent.dphi(b)) * (s.gamma[i] - b);
  }
  rep.diss_surface_diffusion *= g.dx;
  rep.diss_bulk_diffusion *= g.dx;
  rep.diss_marangoni *= g.dx;
  rep.diss_gravity_marangoni_square *= g.dx;
  rep.diss_sorption *= g.dx;
  return rep;
}

std::vector<double> energy_residual(const RunTrace& trace) {
  const auto& ss = trace.samples;
  if (ss.size() < 3)
    throw std::invalid_argument("energy_residual needs at least 3 samples");
  std::vector<double> res(ss.size(), 0.0);
  auto diss = [&](size_t i) {
    double d = 0.0;
    for (double v : ss[i].diss) d += v;
    return d;
  };
  for (size_t i = 1; i + 1 < ss.size(); ++i) {
    const double dEdt =
        (ss[i + 1].energy - ss[i - 1].energy) / (ss[i + 1].t - ss[i - 1].t);
    res[i] = dEdt + diss(i);
  }
  res.front() = (ss[1].energy - ss[0].energy) / (ss[1].t - ss[0].t) + diss(0);
  const size_t k = ss.size() - 1;
  res.back() = (ss[k].energy - ss[k - 1].energy) / (ss[k].t - ss[k - 1].t) + diss(k);
  return res;
}

SteadyVerdict classify_steady(const State& s, const Grid& g, const Params& p,
                              double tol) {
  SteadyVerdict v;
  const RhsArrays r = rhs(s, g, p);
  if (rhs_inf_norm(r) > tol) return v;  // NotSteady

  const int n = s.n();
  auto mean = [&](const std::vector<double>& f) {
    return std::accumulate(f.begin(), f.end(), 0.0) / n;
  };
  auto max_dev = [&](const std::vector<double>& f, double mu) {
    double d = 0.0;
    for (double x : f) d = std::max(d, std::abs(x - mu));
    return d;
  };
  const double hb = mean(s.h), mb = mean(s.m), gb = mean(s.gamma);
  const bool constant = max_dev(s.h, hb) <= tol && max_dev(s.m, mb) <= tol &&
                        max_dev(s.gamma, gb) <= tol;
  const bool sorption_balanced = std::abs(p.beta * mb - hb * gb) <= tol;
  if (constant && sorption_balanced) {
    v.kind = SteadyKind::SteadyConstant;
    v.h_star = hb;
    v.m_star = mb;
    v.gamma_star = gb;
  } else {
    v.kind = SteadyKind::SteadyNonconforming;
  }
  return v;
}

DecayFit fit_decay_rate(const std::vector<double>& times,
                        const std::vector<double>& norms, size_t first,
                        size_t last) {
  if (last > times.size() || last > norms.size() || last < first)
    throw std::invalid_argument("fit window out of range");
  const size_t m = last - first;
  if (m < 5) throw std::invalid_argument("fit window shorter than 5 samples");
  for (size_t i = first; i < last; ++i)
    if (!(norms[i] > 0.0))
      throw std::domain_error("non-positive norm in fit window");

  double st = 0.0, sy = 0.0;
  for (size_t i = first; i < last; ++i) {
    st += times[i];
    sy += std::log(norms[i]);
  }
  const double tb = st / m, yb = sy / m;
  double stt = 0.0, sty = 0.0, syy = 0.0;
  for (size_t i = first; i < last; ++i) {
    const double dt = times[i] - tb, dy = std::log(norms[i]) - yb;
    stt += dt * dt;
    sty += dt * dy;
    syy += dy * dy;
  }
  DecayFit fit;
  const double slope = sty / stt;
  fit.omega = -slope;
  fit.r_squared = (syy <= 0.0) ? 1.0 : (sty * sty) / (stt * syy);
  return fit;
}

}  // namespace lubrisurf
