#include "lubrisurf/discretize.hpp"

#include <algorithm>

namespace lubrisurf {

namespace {

// Fluxes at interior face f (between cells f-1 and f). Mobilities are
// arithmetic means of the cellwise products; d(sigma) = sigma'(gamma_f) * dgamma.
inline void face_fluxes(const State& s, const Params& p, double inv_dx, int f,
                        double& fh, double& fm, double& fg) {
  const int l = f - 1, r = f;
  const double dh = (s.h[r] - s.h[l]) * inv_dx;
  const double dm = (s.m[r] - s.m[l]) * inv_dx;
  const double dg = (s.gamma[r] - s.gamma[l]) * inv_dx;

  const double gamma_f = 0.5 * (s.gamma[l] + s.gamma[r]);
  const double dsigma = p.law.sigma_prime(gamma_f) * dg;

  const double h3 = 0.5 * (s.h[l] * s.h[l] * s.h[l] + s.h[r] * s.h[r] * s.h[r]);
  const double h2 = 0.5 * (s.h[l] * s.h[l] + s.h[r] * s.h[r]);
  const double h2m = 0.5 * (s.h[l] * s.h[l] * s.m[l] + s.h[r] * s.h[r] * s.m[r]);
  const double hm = 0.5 * (s.h[l] * s.m[l] + s.h[r] * s.m[r]);
  const double moh = 0.5 * (s.m[l] / s.h[l] + s.m[r] / s.h[r]);
  const double h2g = 0.5 * (s.h[l] * s.h[l] * s.gamma[l] + s.h[r] * s.h[r] * s.gamma[r]);
  const double hg = 0.5 * (s.h[l] * s.gamma[l] + s.h[r] * s.gamma[r]);

  fh = (p.G / 3.0) * h3 * dh - 0.5 * h2 * dsigma;
  fm = (p.G / 3.0) * h2m * dh - 0.5 * hm * dsigma + p.delta * dm - p.delta * moh * dh;
  fg = (p.G / 2.0) * h2g * dh - hg * dsigma + p.D * dg;
}

template <bool Parallel>
FluxSet fluxes_impl(const State& s, const Grid& g, const Params& p) {
  const int n = s.n();
  FluxSet fs;
  fs.flux_h.assign(n + 1, 0.0);
  fs.flux_m.assign(n + 1, 0.0);
  fs.flux_gamma.assign(n + 1, 0.0);
  const double inv_dx = 1.0 / g.dx;

#pragma omp parallel for schedule(static) if (Parallel && n > 512)
  for (int f = 1; f < n; ++f)
    face_fluxes(s, p, inv_dx, f, fs.flux_h[f], fs.flux_m[f], fs.flux_gamma[f]);

  return fs;
}

template <bool Parallel>
RhsArrays rhs_impl(const State& s, const Grid& g, const Params& p) {
  const int n = s.n();
  const FluxSet fs = fluxes_impl<Parallel>(s, g, p);
  RhsArrays out;
  out.dh.resize(n);
  out.dm.resize(n);
  out.dgamma.resize(n);
  const double inv_dx = 1.0 / g.dx;

#pragma omp parallel for schedule(static) if (Parallel && n > 512)
  for (int i = 0; i < n; ++i) {
    const double src = p.K * (p.beta * s.m[i] / s.h[i] - s.gamma[i]);
    out.dh[i] = (fs.flux_h[i + 1] - fs.flux_h[i]) * inv_dx;
    out.dm[i] = (fs.flux_m[i + 1] - fs.flux_m[i]) * inv_dx - src;
    out.dgamma[i] = (fs.flux_gamma[i + 1] - fs.flux_gamma[i]) * inv_dx + src;
  }
  return out;
}

}  // namespace

FaceData face_values(const State& s, const Grid& g, const SurfaceTensionLaw& law) {
  const int n = s.n();
  FaceData fd;
  for (auto* v : {&fd.h, &fd.m, &fd.gamma, &fd.sigma_p, &fd.dh, &fd.dm,
                  &fd.dgamma, &fd.dsigma})
    v->assign(n + 1, 0.0);

  const double inv_dx = 1.0 / g.dx;
  for (int f = 1; f < n; ++f) {
    const int l = f - 1, r = f;
    fd.h[f] = 0.5 * (s.h[l] + s.h[r]);
    fd.m[f] = 0.5 * (s.m[l] + s.m[r]);
    fd.gamma[f] = 0.5 * (s.gamma[l] + s.gamma[r]);
    fd.sigma_p[f] = law.sigma_prime(fd.gamma[f]);
    fd.dh[f] = (s.h[r] - s.h[l]) * inv_dx;
    fd.dm[f] = (s.m[r] - s.m[l]) * inv_dx;
    fd.dgamma[f] = (s.gamma[r] - s.gamma[l]) * inv_dx;
    fd.dsigma[f] = fd.sigma_p[f] * fd.dgamma[f];
  }
  // boundary faces: cell value, zero gradient
  fd.h[0] = s.h[0];
  fd.m[0] = s.m[0];
  fd.gamma[0] = s.gamma[0];
  fd.sigma_p[0] = law.sigma_prime(s.gamma[0]);
  fd.h[n] = s.h[n - 1];
  fd.m[n] = s.m[n - 1];
  fd.gamma[n] = s.gamma[n - 1];
  fd.sigma_p[n] = law.sigma_prime(s.gamma[n - 1]);
  return fd;
}

FluxSet compute_fluxes(const State& s, const Grid& g, const Params& p) {
  return fluxes_impl<true>(s, g, p);
}
FluxSet compute_fluxes_serial(const State& s, const Grid& g, const Params& p) {
  return fluxes_impl<false>(s, g, p);
}

void sorption_source(const State& s, const Params& p,
                     std::vector<double>& source_m,
                     std::vector<double>& source_gamma) {
  const int n = s.n();
  source_m.resize(n);
  source_gamma.resize(n);
  for (int i = 0; i < n; ++i) {
    if (!(s.h[i] > 0.0))
      throw std::domain_error("h must be positive at cell " + std::to_string(i));
    const double src = p.K * (p.beta * s.m[i] / s.h[i] - s.gamma[i]);
    source_m[i] = -src;
    source_gamma[i] = src;
  }
}

RhsArrays rhs(const State& s, const Grid& g, const Params& p) {
  return rhs_impl<true>(s, g, p);
}
RhsArrays rhs_serial(const State& s, const Grid& g, const Params& p) {
  return rhs_impl<false>(s, g, p);
}

double rhs_inf_norm(const RhsArrays& r) {
  double v = 0.0;
  for (double x : r.dh) v = std::max(v, std::abs(x));
  for (double x : r.dm) v = std::max(v, std::abs(x));
  for (double x : r.dgamma) v = std::max(v, std::abs(x));
  return v;
}

}  // namespace lubrisurf
