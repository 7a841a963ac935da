#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <vector>

namespace lubrisurf {

// Minimal row-major dense matrix, sized for operators up to a few thousand.
struct Matrix {
  int rows = 0, cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), a((size_t)r * c, 0.0) {}

  double& operator()(int i, int j) { return a[(size_t)i * cols + j]; }
  double operator()(int i, int j) const { return a[(size_t)i * cols + j]; }

  std::vector<double> apply(const std::vector<double>& x) const;
  static Matrix identity(int n);
};

Matrix matmul(const Matrix& A, const Matrix& B);
Matrix transpose(const Matrix& A);

// All eigenvalues of a general real square matrix: balancing, Householder
// reduction to upper Hessenberg form, then Francis double-shift QR.
// Throws std::runtime_error on non-convergence (cap 100 * n sweeps).
std::vector<std::complex<double>> eigenvalues(Matrix A);

// Eigenvalues of a symmetric 3x3 by cyclic Jacobi rotations, ascending.
std::array<double, 3> symmetric_eigenvalues_3x3(const std::array<std::array<double, 3>, 3>& m);

// Roots of a real monic cubic x^3 + a x^2 + b x + c (Cardano), for
// cross-checking the dense solver on 3x3 symbol blocks.
std::array<std::complex<double>, 3> cubic_roots(double a, double b, double c);

}  // namespace lubrisurf
