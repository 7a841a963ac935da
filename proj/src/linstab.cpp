#include "lubrisurf/linstab.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lubrisurf {

Equilibrium equilibrium_from(double h_star, double eta_star, const Params& p) {
  if (!(h_star > 0.0)) throw std::invalid_argument("h_star must be > 0");
  if (!(eta_star >= 0.0)) throw std::invalid_argument("eta_star must be >= 0");
  Equilibrium eq;
  eq.h_star = h_star;
  eq.eta_star = eta_star;
  eq.m_star = h_star / (p.beta + h_star) * eta_star;
  eq.gamma_star = p.beta / (p.beta + h_star) * eta_star;
  return eq;
}

State equilibrium_state(const Equilibrium& eq, int n_cells) {
  return State::constant(n_cells, eq.h_star, eq.m_star, eq.gamma_star);
}

std::vector<double> project_mean_zero(const std::vector<double>& v,
                                      const Equilibrium& eq, const Params& p) {
  if (v.size() % 3 != 0) throw std::invalid_argument("vector length must be 3n");
  const int n = (int)v.size() / 3;
  double mh = 0.0, mmg = 0.0;
  for (int i = 0; i < n; ++i) {
    mh += v[i];
    mmg += v[n + i] + v[2 * n + i];
  }
  mh /= n;
  mmg /= n;
  const double wm = eq.h_star / (eq.h_star + p.beta);
  const double wg = p.beta / (eq.h_star + p.beta);
  std::vector<double> out(v.size());
  for (int i = 0; i < n; ++i) {
    out[i] = v[i] - mh;
    out[n + i] = v[n + i] - wm * mmg;
    out[2 * n + i] = v[2 * n + i] - wg * mmg;
  }
  return out;
}

LinearOperator assemble_linearized(const Grid& g, const Params& p,
                                   const Equilibrium& eq) {
  if (!(eq.h_star > 0.0)) throw std::invalid_argument("equilibrium must be positive");
  const int n = g.n_cells;
  const double h = eq.h_star, m = eq.m_star, ga = eq.gamma_star;
  const double sp = p.law.sigma_prime(ga);

  // Flux coefficient matrix (the quasilinear a(u) at the equilibrium):
  // row = evolved field, column = differentiated field.
  const double C[3][3] = {
      {p.G / 3.0 * h * h * h, 0.0, -0.5 * h * h * sp},
      {p.G / 3.0 * h * h * m - p.delta * m / h, p.delta, -0.5 * h * m * sp},
      {p.G / 2.0 * h * h * ga, 0.0, p.D - h * ga * sp}};

  // Zero-order sorption Jacobian.
  const double kb = p.K * p.beta;
  const double S[3][3] = {{0.0, 0.0, 0.0},
                          {kb * m / (h * h), -kb / h, p.K},
                          {-kb * m / (h * h), kb / h, -p.K}};

  LinearOperator op{Matrix(3 * n, 3 * n), g, eq};
  const double w = 1.0 / (g.dx * g.dx);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      const double c = C[a][b];
      if (c != 0.0) {
        for (int i = 0; i < n; ++i) {
          // Flux-form Neumann Laplacian stencil applied to field b.
          if (i > 0) {
            op.A(a * n + i, b * n + i - 1) += c * w;
            op.A(a * n + i, b * n + i) -= c * w;
          }
          if (i < n - 1) {
            op.A(a * n + i, b * n + i + 1) += c * w;
            op.A(a * n + i, b * n + i) -= c * w;
          }
        }
      }
      if (S[a][b] != 0.0)
        for (int i = 0; i < n; ++i) op.A(a * n + i, b * n + i) += S[a][b];
    }
  return op;
}

BqMatrix bq_matrix(double q, const Equilibrium& eq, const Params& p) {
  if (!(q > 0.0)) throw std::invalid_argument("q must be > 0");
  const double h = eq.h_star, m = eq.m_star, ga = eq.gamma_star;
  const double sp = p.law.sigma_prime(ga);
  BqMatrix b;
  b.q = q;
  const double offside_hm = p.beta * p.G / 6.0 * h * h * m - p.delta * p.beta / 2.0 * m / h;
  const double offside_hg = p.G / 4.0 * h * h * h * ga - q / 4.0 * h * h * sp;
  const double offside_mg = -p.beta / 4.0 * m * h * sp;
  b.entries = {{{q * p.G / 3.0 * h * h * h, offside_hm, offside_hg},
                {offside_hm, p.delta * p.beta, offside_mg},
                {offside_hg, offside_mg, p.D * h - h * h * ga * sp}}};
  return b;
}

double q_admissible_max(const Params& p) {
  const double sp0 = p.law.sigma_prime(0.0);
  if (sp0 == 0.0) return std::numeric_limits<double>::infinity();
  return 16.0 * p.G * p.D / (3.0 * sp0 * sp0);
}

PdCertificate bq_is_positive_definite(const BqMatrix& b) {
  const auto& m = b.entries;
  double scale = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) scale = std::max(scale, std::abs(m[i][j]));
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (std::abs(m[i][j] - m[j][i]) > 1e-12 * std::max(1.0, scale))
        throw std::invalid_argument("bq certificate requires a symmetric matrix");

  const double m1 = m[0][0];
  const double m2 = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  const double m3 = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                    m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                    m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);

  PdCertificate cert;
  cert.eigenvalues = symmetric_eigenvalues_3x3(m);
  const bool pd_minors = m1 > 0.0 && m2 > 0.0 && m3 > 0.0;
  const bool pd_eigen = cert.eigenvalues[0] > 0.0;
  // The two routes must agree away from the singular boundary.
  if (pd_minors != pd_eigen &&
      std::abs(cert.eigenvalues[0]) > 1e-12 * std::max(1.0, scale))
    throw std::logic_error("minor test and eigenvalue test disagree");
  cert.positive_definite = pd_minors && pd_eigen;
  if (!cert.positive_definite)
    cert.failing_minor = (m1 <= 0.0) ? 1 : (m2 <= 0.0 ? 2 : 3);
  return cert;
}

namespace {

// Apply the Householder reflector H = I - 2 u u^T to A on both sides.
void reflect_both_sides(Matrix& A, const std::vector<double>& u) {
  const int n = A.rows;
  // rows: A <- H A
  std::vector<double> tmp(n);
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += u[i] * A(i, j);
    tmp[j] = 2.0 * s;
  }
  for (int i = 0; i < n; ++i) {
    if (u[i] == 0.0) continue;
    for (int j = 0; j < n; ++j) A(i, j) -= u[i] * tmp[j];
  }
  // cols: A <- A H
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += A(i, j) * u[j];
    s *= 2.0;
    for (int j = 0; j < n; ++j)
      if (u[j] != 0.0) A(i, j) -= s * u[j];
  }
}

// Reflector taking the unit vector v to the unit basis vector e_k; empty when
// v is already e_k.
std::vector<double> reflector_to_axis(std::vector<double> v, int k) {
  v[k] -= 1.0;
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  if (norm < 1e-300) return {};
  for (double& x : v) x /= norm;
  return v;
}

}  // namespace

Spectrum spectrum(const LinearOperator& op) {
  const int n = op.grid.n_cells;
  const int N = 3 * n;
  Matrix B = op.A;

  // Orthonormal neutral directions: the h-mean and the (m+gamma)-mean.
  std::vector<double> c1(N, 0.0), c2(N, 0.0);
  for (int i = 0; i < n; ++i) c1[i] = 1.0 / std::sqrt((double)n);
  for (int i = n; i < 3 * n; ++i) c2[i] = 1.0 / std::sqrt(2.0 * n);

  if (auto u = reflector_to_axis(c1, 0); !u.empty()) {
    reflect_both_sides(B, u);
    // carry c2 through the same similarity
    double s = 0.0;
    for (int i = 0; i < N; ++i) s += u[i] * c2[i];
    s *= 2.0;
    for (int i = 0; i < N; ++i) c2[i] -= s * u[i];
  }
  if (auto u = reflector_to_axis(c2, 1); !u.empty()) reflect_both_sides(B, u);

  Matrix M(N - 2, N - 2);
  for (int i = 2; i < N; ++i)
    for (int j = 2; j < N; ++j) M(i - 2, j - 2) = B(i, j);

  Spectrum sp;
  sp.eigenvalues = eigenvalues(std::move(M));
  std::sort(sp.eigenvalues.begin(), sp.eigenvalues.end(),
            [](const std::complex<double>& a, const std::complex<double>& b) {
              if (a.real() != b.real()) return a.real() > b.real();
              return a.imag() > b.imag();
            });
  sp.spectral_bound = sp.eigenvalues.empty() ? 0.0 : sp.eigenvalues.front().real();
  sp.omega0 = sp.spectral_bound < 0.0 ? -sp.spectral_bound : 0.0;
  return sp;
}

}  // namespace lubrisurf
