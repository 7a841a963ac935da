#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lubrisurf/discretize.hpp"

using namespace lubrisurf;

namespace {

State random_state(int n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.2, 1.5);
  State s;
  s.h.resize(n);
  s.m.resize(n);
  s.gamma.resize(n);
  for (int i = 0; i < n; ++i) {
    s.h[i] = u(rng);
    s.m[i] = u(rng);
    s.gamma[i] = 0.5 * u(rng);
  }
  return s;
}

}  // namespace

TEST_CASE("boundary fluxes are exactly zero") {
  const Grid g(16, 1.0);
  const Params p;
  const State s = random_state(16, 7);
  const FluxSet fs = compute_fluxes(s, g, p);
  CHECK(fs.flux_h.front() == 0.0);
  CHECK(fs.flux_h.back() == 0.0);
  CHECK(fs.flux_m.front() == 0.0);
  CHECK(fs.flux_m.back() == 0.0);
  CHECK(fs.flux_gamma.front() == 0.0);
  CHECK(fs.flux_gamma.back() == 0.0);
}

TEST_CASE("face means and gradients") {
  const Grid g(4, 2.0);  // dx = 0.5
  State s = State::constant(4, 1.0, 1.0, 0.5);
  s.h = {1.0, 3.0, 5.0, 7.0};
  const FaceData fd = face_values(s, g, SurfaceTensionLaw::linear());
  CHECK(fd.h[1] == doctest::Approx(2.0).epsilon(1e-16));
  CHECK(fd.dh[1] == doctest::Approx(4.0).epsilon(1e-16));
  CHECK(fd.h[2] == doctest::Approx(4.0).epsilon(1e-16));
  CHECK(fd.dgamma[2] == 0.0);
  CHECK(fd.sigma_p[2] == -1.0);
  // boundary faces carry the cell value with zero gradient
  CHECK(fd.h[0] == 1.0);
  CHECK(fd.h[4] == 7.0);
  CHECK(fd.dh[0] == 0.0);
  CHECK(fd.dh[4] == 0.0);
}

TEST_CASE("constant state with sorption equilibrium is a fixed point") {
  const Grid g(8, 1.0);
  Params p;
  p.beta = 2.0;
  // beta m / h = gamma: h=1, m=0.25, gamma=0.5
  const State s = State::constant(8, 1.0, 0.25, 0.5);
  const RhsArrays r = rhs(s, g, p);
  CHECK(rhs_inf_norm(r) == 0.0);
}

TEST_CASE("constant state off sorption equilibrium exchanges only") {
  const Grid g(8, 1.0);
  Params p;
  p.K = 3.0;
  p.beta = 1.0;
  const State s = State::constant(8, 2.0, 1.0, 0.25);
  // src = K (beta m / h - gamma) = 3 (0.5 - 0.25) = 0.75
  const RhsArrays r = rhs(s, g, p);
  for (int i = 0; i < 8; ++i) {
    CHECK(r.dh[i] == 0.0);
    CHECK(r.dm[i] == doctest::Approx(-0.75).epsilon(1e-15));
    CHECK(r.dgamma[i] == doctest::Approx(0.75).epsilon(1e-15));
  }
}

TEST_CASE("sorption source hand values") {
  Params p;
  p.K = 2.0;
  p.beta = 1.0;
  State s = State::constant(4, 1.0, 1.0, 0.5);
  std::vector<double> sm, sg;
  sorption_source(s, p, sm, sg);
  // src = 2 (1 - 0.5) = 1
  for (int i = 0; i < 4; ++i) {
    CHECK(sm[i] == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(sg[i] == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("porous-medium reduction: gravity-only h flux") {
  const Grid g(4, 2.0);  // dx = 0.5
  Params p;
  p.G = 3.0;
  p.K = 0.0;
  p.law = SurfaceTensionLaw::constant();
  State s = State::constant(4, 1.0, 1.0, 1.0);
  s.h = {1.0, 2.0, 2.0, 2.0};
  const FluxSet fs = compute_fluxes(s, g, p);
  // face 1: mean(h^3) = (1+8)/2 = 4.5, dh = 2, flux = (G/3) 4.5 * 2 = 9
  CHECK(fs.flux_h[1] == doctest::Approx(9.0).epsilon(1e-15));
  CHECK(fs.flux_h[2] == 0.0);
}

TEST_CASE("Marangoni hand value: constant h, linear law") {
  const Grid g(4, 2.0);  // dx = 0.5
  Params p;
  p.G = 0.0;  // validate() not used here; gravity off isolates Marangoni
  p.D = 1.0;
  p.delta = 1.0;
  p.K = 0.0;
  State s = State::constant(4, 2.0, 1.0, 0.2);
  s.gamma = {0.2, 0.4, 0.4, 0.4};
  const FluxSet fs = compute_fluxes(s, g, p);
  // face 1: dgamma = 0.4, dsigma = -0.4;
  //   flux_h = -0.5 * mean(h^2) * dsigma = -0.5 * 4 * (-0.4) = 0.8
  //   flux_m = -0.5 * mean(h m) * dsigma + delta*dm = -0.5*2*(-0.4) = 0.4
  //   flux_g = -mean(h gamma) dsigma + D dgamma = -0.6*(-0.4) + 0.4 = 0.64
  CHECK(fs.flux_h[1] == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(fs.flux_m[1] == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(fs.flux_gamma[1] == doctest::Approx(0.64).epsilon(1e-14));
}

TEST_CASE("cell sums telescope: discrete conservation") {
  const Grid g(64, 1.0);
  const Params p;
  const State s = random_state(64, 42);
  const RhsArrays r = rhs(s, g, p);
  double sum_h = 0.0, sum_mg = 0.0, scale = 0.0;
  for (int i = 0; i < 64; ++i) {
    sum_h += r.dh[i];
    sum_mg += r.dm[i] + r.dgamma[i];
    scale += std::abs(r.dh[i]) + std::abs(r.dm[i]) + std::abs(r.dgamma[i]);
  }
  CHECK(std::abs(sum_h) <= 1e-13 * scale);
  CHECK(std::abs(sum_mg) <= 1e-13 * scale);
}

TEST_CASE("parallel and serial right-hand sides are bit-identical") {
  for (int n : {16, 600, 2048}) {
    const Grid g(n, 1.0);
    const Params p;
    const State s = random_state(n, 99 + n);
    const RhsArrays a = rhs(s, g, p);
    const RhsArrays b = rhs_serial(s, g, p);
    for (int i = 0; i < n; ++i) {
      CHECK(a.dh[i] == b.dh[i]);
      CHECK(a.dm[i] == b.dm[i]);
      CHECK(a.dgamma[i] == b.dgamma[i]);
    }
  }
}

TEST_CASE("reflection symmetry") {
  const int n = 32;
  const Grid g(n, 1.0);
  const Params p;
  const State s = random_state(n, 5);
  State sr;
  sr.h.assign(n, 0.0);
  sr.m.assign(n, 0.0);
  sr.gamma.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    sr.h[i] = s.h[n - 1 - i];
    sr.m[i] = s.m[n - 1 - i];
    sr.gamma[i] = s.gamma[n - 1 - i];
  }
  const RhsArrays a = rhs(s, g, p);
  const RhsArrays b = rhs(sr, g, p);
  for (int i = 0; i < n; ++i) {
    CHECK(a.dh[i] == doctest::Approx(b.dh[n - 1 - i]).epsilon(1e-13));
    CHECK(a.dm[i] == doctest::Approx(b.dm[n - 1 - i]).epsilon(1e-13));
    CHECK(a.dgamma[i] == doctest::Approx(b.dgamma[n - 1 - i]).epsilon(1e-13));
  }
}

TEST_CASE("second-order consistency against analytic fluxes") {
  Params p;
  p.G = 1.0;
  p.D = 0.1;
  p.delta = 0.1;
  p.beta = 1.0;
  p.K = 1.0;
  const double pi = std::numbers::pi;

  auto hf = [&](double x) { return 1.0 + 0.1 * std::cos(pi * x); };
  auto hfp = [&](double x) { return -0.1 * pi * std::sin(pi * x); };
  auto mf = [&](double x) { return 0.5 + 0.05 * std::cos(2 * pi * x); };
  auto mfp = [&](double x) { return -0.1 * pi * std::sin(2 * pi * x); };
  auto gf = [&](double x) { return 0.4 + 0.04 * std::cos(pi * x); };
  auto gfp = [&](double x) { return -0.04 * pi * std::sin(pi * x); };

  // continuum fluxes (linear law: sigma' = -1, so dsigma = -gamma')
  auto Fh = [&](double x) {
    const double h = hf(x);
    return (p.G / 3.0) * h * h * h * hfp(x) + 0.5 * h * h * gfp(x);
  };
  auto Fm = [&](double x) {
    const double h = hf(x), m = mf(x);
    return (p.G / 3.0) * h * m * h * hfp(x) + 0.5 * h * m * gfp(x) +
           p.delta * mfp(x) - p.delta * (m / h) * hfp(x);
  };
  auto Fg = [&](double x) {
    const double h = hf(x), ga = gf(x);
    return (p.G / 2.0) * h * h * ga * hfp(x) + h * ga * gfp(x) + p.D * gfp(x);
  };
  const double eps = 1e-5;
  auto ddx = [&](auto F, double x) { return (F(x + eps) - F(x - eps)) / (2 * eps); };

  std::vector<double> errs;
  for (int n : {32, 64, 128}) {
    const Grid g(n, 1.0);
    State s;
    s.h.resize(n);
    s.m.resize(n);
    s.gamma.resize(n);
    for (int i = 0; i < n; ++i) {
      const double x = g.center(i);
      s.h[i] = hf(x);
      s.m[i] = mf(x);
      s.gamma[i] = gf(x);
    }
    const RhsArrays r = rhs(s, g, p);
    double e = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = g.center(i);
      const double src = p.K * (p.beta * mf(x) / hf(x) - gf(x));
      e = std::max(e, std::abs(r.dh[i] - ddx(Fh, x)));
      e = std::max(e, std::abs(r.dm[i] - (ddx(Fm, x) - src)));
      e = std::max(e, std::abs(r.dgamma[i] - (ddx(Fg, x) + src)));
    }
    errs.push_back(e);
  }
  // observed order ~2 under halving
  CHECK(errs[0] / errs[1] > 3.3);
  CHECK(errs[1] / errs[2] > 3.3);
}
