#include "lubrisurf/model.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace lubrisurf {

namespace {

constexpr double kQuadTol = 1e-12;

double integrate(const std::function<double(double)>& f, double a, double b) {
  if (a == b) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, a, b, 12, kQuadTol);
}

}  // namespace

double Entropy::d2phi(double r) const {
  if (!(r > 0.0)) throw std::domain_error("entropy argument must be > 0");
  switch (law.kind) {
    case SigmaLawKind::Linear: return 1.0 / r;
    case SigmaLawKind::Constant: return 0.0;
    default: return -law.sigma_prime(r) / r;
  }
}

double Entropy::dphi(double r) const {
  if (!(r > 0.0)) throw std::domain_error("entropy argument must be > 0");
  switch (law.kind) {
    case SigmaLawKind::Linear: return std::log(r);
    case SigmaLawKind::Constant: return 0.0;
    default:
      return integrate([this](double s) { return d2phi(s); }, 1.0, r);
  }
}

double Entropy::phi(double r) const {
  if (!(r > 0.0)) throw std::domain_error("entropy argument must be > 0");
  switch (law.kind) {
    case SigmaLawKind::Linear: return r * std::log(r) - r + 1.0;
    case SigmaLawKind::Constant: return 0.0;
    default:
      // Taylor remainder form of the double integral, phi(1) = phi'(1) = 0.
      return integrate([this, r](double s) { return (r - s) * d2phi(s); }, 1.0, r);
  }
}

Entropy entropy_build(const SurfaceTensionLaw& law) {
  // The entropy exists only where sigma is nonincreasing.
  const double hi = std::min(law.gamma_max(), 10.0);
  const double lo = 0.01;
  for (int k = 0; k <= 64; ++k) {
    const double r = lo * std::pow(hi / lo, k / 64.0);
    if (law.sigma_prime(r) > 0.0)
      throw std::domain_error("sigma' > 0: entropy undefined for this law");
  }
  return Entropy{law};
}

}  // namespace lubrisurf
