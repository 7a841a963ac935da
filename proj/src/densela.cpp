#include "lubrisurf/densela.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lubrisurf {

std::vector<double> Matrix::apply(const std::vector<double>& x) const {
  if ((int)x.size() != cols) throw std::invalid_argument("apply: size mismatch");
  std::vector<double> y(rows, 0.0);
  for (int i = 0; i < rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < cols; ++j) s += (*this)(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

Matrix Matrix::identity(int n) {
  Matrix I(n, n);
  for (int i = 0; i < n; ++i) I(i, i) = 1.0;
  return I;
}

Matrix matmul(const Matrix& A, const Matrix& B) {
  if (A.cols != B.rows) throw std::invalid_argument("matmul: size mismatch");
  Matrix C(A.rows, B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int k = 0; k < A.cols; ++k) {
      const double aik = A(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < B.cols; ++j) C(i, j) += aik * B(k, j);
    }
  return C;
}

Matrix transpose(const Matrix& A) {
  Matrix T(A.cols, A.rows);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) T(j, i) = A(i, j);
  return T;
}

namespace {

// Diagonal similarity scaling to balance row/column norms (radix 2).
void balance(Matrix& a) {
  const int n = a.rows;
  bool last = false;
  while (!last) {
    last = true;
    for (int i = 0; i < n; ++i) {
      double r = 0.0, c = 0.0;
      for (int j = 0; j < n; ++j)
        if (j != i) {
          c += std::abs(a(j, i));
          r += std::abs(a(i, j));
        }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / 2.0, f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= 2.0;
        c *= 4.0;
      }
      g = r * 2.0;
      while (c > g) {
        f /= 2.0;
        c /= 4.0;
      }
      if ((c + r) / f < 0.95 * s) {
        last = false;
        const double ginv = 1.0 / f;
        for (int j = 0; j < n; ++j) a(i, j) *= ginv;
        for (int j = 0; j < n; ++j) a(j, i) *= f;
      }
    }
  }
}

// Reduction to upper Hessenberg form by stabilized elementary similarity
// transformations.
void hessenberg(Matrix& a) {
  const int n = a.rows;
  for (int m = 1; m < n - 1; ++m) {
    double x = 0.0;
    int piv = m;
    for (int j = m; j < n; ++j)
      if (std::abs(a(j, m - 1)) > std::abs(x)) {
        x = a(j, m - 1);
        piv = j;
      }
    if (piv != m) {
      for (int j = m - 1; j < n; ++j) std::swap(a(piv, j), a(m, j));
      for (int j = 0; j < n; ++j) std::swap(a(j, piv), a(j, m));
    }
    if (x != 0.0) {
      for (int i = m + 1; i < n; ++i) {
        double y = a(i, m - 1);
        if (y == 0.0) continue;
        y /= x;
        a(i, m - 1) = 0.0;
        for (int j = m; j < n; ++j) a(i, j) -= y * a(m, j);
        for (int j = 0; j < n; ++j) a(j, m) += y * a(j, i);
      }
    }
  }
  for (int i = 2; i < n; ++i)
    for (int j = 0; j < i - 1; ++j) a(i, j) = 0.0;
}

inline double sign_of(double a, double b) { return b >= 0.0 ? std::abs(a) : -std::abs(a); }

// Francis double-shift QR on an upper Hessenberg matrix; eigenvalues only.
std::vector<std::complex<double>> hqr(Matrix& a) {
  const int n = a.rows;
  const double eps = std::numeric_limits<double>::epsilon();
  std::vector<std::complex<double>> wri(n);
  double anorm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(a(i, j));

  int nn = n - 1;
  double t = 0.0;
  while (nn >= 0) {
    int its = 0;
    int l;
    do {
      for (l = nn; l > 0; --l) {
        double s = std::abs(a(l - 1, l - 1)) + std::abs(a(l, l));
        if (s == 0.0) s = anorm;
        if (std::abs(a(l, l - 1)) <= eps * s) {
          a(l, l - 1) = 0.0;
          break;
        }
      }
      double x = a(nn, nn);
      if (l == nn) {
        wri[nn--] = x + t;
      } else {
        double y = a(nn - 1, nn - 1);
        double w = a(nn, nn - 1) * a(nn - 1, nn);
        if (l == nn - 1) {
          double p = 0.5 * (y - x);
          double q = p * p + w;
          double z = std::sqrt(std::abs(q));
          x += t;
          if (q >= 0.0) {
            z = p + sign_of(z, p);
            wri[nn - 1] = wri[nn] = x + z;
            if (z != 0.0) wri[nn] = x - w / z;
          } else {
            wri[nn] = std::complex<double>(x + p, -z);
            wri[nn - 1] = std::conj(wri[nn]);
          }
          nn -= 2;
        } else {
          if (its == 100) throw std::runtime_error("QR iteration did not converge");
          if (its != 0 && its % 30 == 0) {
            t += x;
            for (int i = 0; i <= nn; ++i) a(i, i) -= x;
            double s = std::abs(a(nn, nn - 1)) + std::abs(a(nn - 1, nn - 2));
            y = x = 0.75 * s;
            w = -0.4375 * s * s;
          }
          ++its;
          int m;
          double p = 0.0, q = 0.0, r = 0.0, z = 0.0;
          for (m = nn - 2; m >= l; --m) {
            z = a(m, m);
            double rr = x - z;
            double ss = y - z;
            p = (rr * ss - w) / a(m + 1, m) + a(m, m + 1);
            q = a(m + 1, m + 1) - z - rr - ss;
            r = a(m + 2, m + 1);
            double s = std::abs(p) + std::abs(q) + std::abs(r);
            p /= s;
            q /= s;
            r /= s;
            if (m == l) break;
            const double u = std::abs(a(m, m - 1)) * (std::abs(q) + std::abs(r));
            const double v = std::abs(p) * (std::abs(a(m - 1, m - 1)) +
                                            std::abs(z) + std::abs(a(m + 1, m + 1)));
            if (u <= eps * v) break;
          }
          for (int i = m + 2; i <= nn; ++i) {
            a(i, i - 2) = 0.0;
            if (i != m + 2) a(i, i - 3) = 0.0;
          }
          for (int k = m; k < nn; ++k) {
            if (k != m) {
              p = a(k, k - 1);
              q = a(k + 1, k - 1);
              r = (k + 1 != nn) ? a(k + 2, k - 1) : 0.0;
              x = std::abs(p) + std::abs(q) + std::abs(r);
              if (x != 0.0) {
                p /= x;
                q /= x;
                r /= x;
              }
            }
            const double s = sign_of(std::sqrt(p * p + q * q + r * r), p);
            if (s == 0.0) continue;
            if (k == m) {
              if (l != m) a(k, k - 1) = -a(k, k - 1);
            } else {
              a(k, k - 1) = -s * x;
            }
            p += s;
            x = p / s;
            y = q / s;
            z = r / s;
            q /= p;
            r /= p;
            for (int j = k; j <= nn; ++j) {
              p = a(k, j) + q * a(k + 1, j);
              if (k + 1 != nn) {
                p += r * a(k + 2, j);
                a(k + 2, j) -= p * z;
              }
              a(k + 1, j) -= p * y;
              a(k, j) -= p * x;
            }
            const int mmin = std::min(nn, k + 3);
            for (int i = l; i <= mmin; ++i) {
              p = x * a(i, k) + y * a(i, k + 1);
              if (k + 1 != nn) {
                p += z * a(i, k + 2);
                a(i, k + 2) -= p * r;
              }
              a(i, k + 1) -= p * q;
              a(i, k) -= p;
            }
          }
        }
      }
    } while (l + 1 < nn);
  }
  return wri;
}

}  // namespace

std::vector<std::complex<double>> eigenvalues(Matrix A) {
  if (A.rows != A.cols) throw std::invalid_argument("eigenvalues: square matrix required");
  if (A.rows == 0) return {};
  if (A.rows == 1) return {std::complex<double>(A(0, 0), 0.0)};
  balance(A);
  hessenberg(A);
  return hqr(A);
}

std::array<double, 3> symmetric_eigenvalues_3x3(
    const std::array<std::array<double, 3>, 3>& m) {
  double a[3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a[i][j] = m[i][j];

  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = std::abs(a[0][1]) + std::abs(a[0][2]) + std::abs(a[1][2]);
    if (off == 0.0) break;
    for (int p = 0; p < 2; ++p)
      for (int q = p + 1; q < 3; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = sign_of(1.0, theta) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        double App = a[p][p], Aqq = a[q][q], Apq = a[p][q];
        a[p][p] = App - t * Apq;
        a[q][q] = Aqq + t * Apq;
        a[p][q] = a[q][p] = 0.0;
        const int r = 3 - p - q;
        const double Arp = a[r][p], Arq = a[r][q];
        a[r][p] = a[p][r] = c * Arp - s * Arq;
        a[r][q] = a[q][r] = s * Arp + c * Arq;
      }
  }
  std::array<double, 3> ev = {a[0][0], a[1][1], a[2][2]};
  std::sort(ev.begin(), ev.end());
  return ev;
}

std::array<std::complex<double>, 3> cubic_roots(double a, double b, double c) {
  using C = std::complex<double>;
  const C d0 = a * a - 3.0 * b;
  const C d1 = 2.0 * a * a * a - 9.0 * a * b + 27.0 * c;
  const C sq = std::sqrt(d1 * d1 - 4.0 * d0 * d0 * d0);
  C base = (std::abs(d1 + sq) >= std::abs(d1 - sq)) ? (d1 + sq) : (d1 - sq);
  if (std::abs(base) == 0.0) {
    const C r = C(-a / 3.0, 0.0);
    return {r, r, r};
  }
  const C cc = std::pow(base / 2.0, 1.0 / 3.0);
  const C zeta(-0.5, std::sqrt(3.0) / 2.0);
  std::array<C, 3> roots;
  C w = cc;
  for (int k = 0; k < 3; ++k) {
    roots[k] = -(a + w + d0 / w) / 3.0;
    w *= zeta;
  }
  return roots;
}

}  // namespace lubrisurf
