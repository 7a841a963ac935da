#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lubrisurf/model.hpp"

using namespace lubrisurf;

TEST_CASE("linear law values") {
  const auto law = SurfaceTensionLaw::linear();
  CHECK(law.sigma(0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(law.sigma(0.25) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(law.sigma_prime(0.3) == -1.0);
  CHECK(std::isinf(law.gamma_max()));
}

TEST_CASE("sheludko law values") {
  const auto law = SurfaceTensionLaw::sheludko(1.0);
  // sigma(0) = alpha + 1, sigma(1) = alpha
  CHECK(law.sigma(0.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(law.sigma(1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(law.sheludko_slope() == doctest::Approx(std::cbrt(2.0) - 1.0).epsilon(1e-15));
  // strictly decreasing across the admissible range
  double prev = law.sigma(0.0);
  for (int k = 1; k <= 50; ++k) {
    const double g = law.gamma_max() * k / 50.0;
    const double cur = law.sigma(g);
    CHECK(cur < prev);
    CHECK(law.sigma_prime(g) < 0.0);
    prev = cur;
  }
}

TEST_CASE("sheludko derivative matches finite differences") {
  const auto law = SurfaceTensionLaw::sheludko(0.5);
  const double eps = 1e-7;
  for (double g : {0.1, 0.4, 0.8}) {
    const double fd = (law.sigma(g + eps) - law.sigma(g - eps)) / (2 * eps);
    CHECK(law.sigma_prime(g) == doctest::Approx(fd).epsilon(1e-7));
  }
}

TEST_CASE("admissibility checks throw") {
  const auto law = SurfaceTensionLaw::sheludko(1.0);
  CHECK_THROWS_AS(law.sigma(-0.1), std::domain_error);
  CHECK_THROWS_AS(law.sigma(law.gamma_max() * 1.01), std::domain_error);
  CHECK_THROWS_AS(SurfaceTensionLaw::sheludko(0.0), std::invalid_argument);
  const auto lin = SurfaceTensionLaw::linear();
  CHECK_THROWS_AS(lin.sigma(-1e-12), std::domain_error);
  CHECK_NOTHROW(lin.sigma(100.0));
}

TEST_CASE("constant law disables Marangoni response") {
  const auto law = SurfaceTensionLaw::constant();
  CHECK(law.sigma(3.0) == 1.0);
  CHECK(law.sigma_prime(3.0) == 0.0);
}

TEST_CASE("linear entropy closed form") {
  const Entropy ent = entropy_build(SurfaceTensionLaw::linear());
  CHECK(ent.phi(1.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(ent.dphi(1.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(ent.d2phi(2.0) == doctest::Approx(0.5).epsilon(1e-15));
  // phi(r) = r ln r - r + 1
  CHECK(ent.phi(2.0) == doctest::Approx(2.0 * std::log(2.0) - 1.0).epsilon(1e-14));
  CHECK(ent.phi(0.5) ==
        doctest::Approx(0.5 * std::log(0.5) + 0.5).epsilon(1e-14));
  CHECK(ent.dphi(3.0) == doctest::Approx(std::log(3.0)).epsilon(1e-14));
}

TEST_CASE("entropy ODE identity phi''(r) r = -sigma'(r)") {
  for (const auto& law : {SurfaceTensionLaw::linear(),
                          SurfaceTensionLaw::sheludko(1.0),
                          SurfaceTensionLaw::sheludko(0.25)}) {
    const Entropy ent = entropy_build(law);
    const double hi = std::min(law.gamma_max(), 10.0);
    for (int k = 0; k <= 40; ++k) {
      const double r = 0.01 * std::pow(hi / 0.01, k / 40.0);
      CHECK(std::abs(ent.d2phi(r) * r + law.sigma_prime(r)) <= 1e-10);
    }
  }
}

TEST_CASE("entropy normalization and convexity for sheludko") {
  const Entropy ent = entropy_build(SurfaceTensionLaw::sheludko(1.0));
  CHECK(std::abs(ent.phi(1.0)) <= 1e-11);
  CHECK(std::abs(ent.dphi(1.0)) <= 1e-11);
  CHECK(ent.phi(0.5) > 0.0);
  CHECK(ent.phi(2.0) > 0.0);
  // dphi is the antiderivative of d2phi: compare against a fine midpoint sum
  const double a = 0.5, b = 2.0;
  const int nq = 4000;
  double acc = 0.0;
  for (int i = 0; i < nq; ++i)
    acc += ent.d2phi(a + (i + 0.5) * (b - a) / nq) * (b - a) / nq;
  CHECK(ent.dphi(b) - ent.dphi(a) == doctest::Approx(acc).epsilon(1e-7));
}

TEST_CASE("constant-law entropy vanishes") {
  const Entropy ent = entropy_build(SurfaceTensionLaw::constant());
  CHECK(ent.phi(0.3) == 0.0);
  CHECK(ent.dphi(5.0) == 0.0);
  CHECK(ent.d2phi(2.0) == 0.0);
}

TEST_CASE("params validation") {
  Params p;
  CHECK_NOTHROW(p.validate());
  p.beta = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = Params{};
  p.K = 0.0;  // sorption may be switched off
  CHECK_NOTHROW(p.validate());
  p.G = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("grid geometry") {
  const Grid g(4, 2.0);
  CHECK(g.dx == doctest::Approx(0.5).epsilon(1e-16));
  CHECK(g.center(0) == doctest::Approx(0.25).epsilon(1e-16));
  CHECK(g.center(3) == doctest::Approx(1.75).epsilon(1e-16));
  CHECK_THROWS_AS(Grid(3, 1.0), std::invalid_argument);
}

TEST_CASE("state validation and c0 round trip") {
  State s = State::constant(8, 2.0, 0.5, 0.25);
  CHECK_NOTHROW(s.validate());
  s.m[3] = 0.0;
  CHECK_THROWS_AS(s.validate(), std::domain_error);

  Params p;
  p.beta = 2.0;
  State t = State::constant(8, 1.5, 0.75, 0.1);
  const auto c0 = c0_from_state(t, p);  // c0 = beta m / h = 1.0
  for (double v : c0) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
  // reconstruct m = h c0 / beta
  for (int i = 0; i < t.n(); ++i)
    CHECK(t.h[i] * c0[i] / p.beta == doctest::Approx(t.m[i]).epsilon(1e-14));
}
