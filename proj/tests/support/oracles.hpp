// Copyright The lse-cond Authors
// SPDX-License-Identifier: Apache-2.0

// Reference computations that share no code with the library: a null-space
// LSE solver and finite-difference condition numbers.

#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "core/types.hpp"

namespace lsecond::testing {

// x from B^T = Q R: x = Q1 R1^{-T} d + Q2 z with z the least squares solution
// of (A Q2) z = b - A Q1 R1^{-T} d.
inline Vector lse_nullspace(const Matrix& A, const Matrix& B, const Vector& b, const Vector& d) {
  const Index n = A.cols(), s = B.rows();
  if (s == 0) return A.colPivHouseholderQr().solve(b);
  Eigen::HouseholderQR<Matrix> qr(B.transpose());
  const Matrix Q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix R1 = qr.matrixQR().topLeftCorner(s, s).triangularView<Eigen::Upper>();
  const Vector y = R1.transpose().triangularView<Eigen::Lower>().solve(d);
  Vector x = Q.leftCols(s) * y;
  if (n > s) {
    const Matrix AQ2 = A * Q.rightCols(n - s);
    const Vector z = AQ2.colPivHouseholderQr().solve(b - A * x);
    x += Q.rightCols(n - s) * z;
  }
  return x;
}

inline Vector lse_nullspace(const LseProblem& p) { return lse_nullspace(p.A(), p.B(), p.b(), p.d()); }

inline double largest_singular_value(const Matrix& M) {
  if (M.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Matrix>(M).singularValues()(0);
}

// Perturbation directions of the data (dA, dB, db, dd); the derivative of
// L^T x along each one is a column of the Jacobian.
using Direction = std::function<void(Matrix&, Matrix&, Vector&, Vector&)>;

inline Vector directional_derivative(const LseProblem& p, const Matrix& L, const Direction& dir,
                                     double h) {
  Matrix A1 = p.A(), B1 = p.B(), A2 = p.A(), B2 = p.B();
  Vector b1 = p.b(), d1 = p.d(), b2 = p.b(), d2 = p.d();
  Matrix dA = Matrix::Zero(p.m(), p.n()), dB = Matrix::Zero(p.s(), p.n());
  Vector db = Vector::Zero(p.m()), dd = Vector::Zero(p.s());
  dir(dA, dB, db, dd);
  A1 += h * dA;
  B1 += h * dB;
  b1 += h * db;
  d1 += h * dd;
  A2 -= h * dA;
  B2 -= h * dB;
  b2 -= h * db;
  d2 -= h * dd;
  return L.transpose() * (lse_nullspace(A1, B1, b1, d1) - lse_nullspace(A2, B2, b2, d2)) / (2 * h);
}

// ||J||_2 for the map (alpha_A vec A, alpha_B vec B, alpha_b b, alpha_d d) -> L^T x.
inline double fd_condition(const LseProblem& p, const ConditionWeights& w, double h = 1e-6) {
  const Index m = p.m(), n = p.n(), s = p.s();
  const Matrix L = w.L ? *w.L : Matrix::Identity(n, n);
  Matrix J(L.cols(), m * n + s * n + m + s);
  Index col = 0;
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < m; ++i)
      J.col(col++) = directional_derivative(
          p, L, [&](Matrix& dA, Matrix&, Vector&, Vector&) { dA(i, j) = 1.0 / w.alpha_A; }, h);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < s; ++i)
      J.col(col++) = directional_derivative(
          p, L, [&](Matrix&, Matrix& dB, Vector&, Vector&) { dB(i, j) = 1.0 / w.alpha_B; }, h);
  for (Index i = 0; i < m; ++i)
    J.col(col++) = directional_derivative(
        p, L, [&](Matrix&, Matrix&, Vector& db, Vector&) { db(i) = 1.0 / w.alpha_b; }, h);
  for (Index i = 0; i < s; ++i)
    J.col(col++) = directional_derivative(
        p, L, [&](Matrix&, Matrix&, Vector&, Vector& dd) { dd(i) = 1.0 / w.alpha_d; }, h);
  return largest_singular_value(J);
}

// Structured variant: A and B move along unit-norm structured directions,
// given as lists of matrices (each of Frobenius norm 1).
inline double fd_structured_condition(const LseProblem& p, const ConditionWeights& w,
                                      const std::vector<Matrix>& dirs_A,
                                      const std::vector<Matrix>& dirs_B, double h = 1e-6) {
  const Index m = p.m(), n = p.n(), s = p.s();
  const Matrix L = w.L ? *w.L : Matrix::Identity(n, n);
  Matrix J(L.cols(), static_cast<Index>(dirs_A.size() + dirs_B.size()) + m + s);
  Index col = 0;
  for (const Matrix& E : dirs_A)
    J.col(col++) = directional_derivative(
        p, L, [&](Matrix& dA, Matrix&, Vector&, Vector&) { dA = E / w.alpha_A; }, h);
  for (const Matrix& E : dirs_B)
    J.col(col++) = directional_derivative(
        p, L, [&](Matrix&, Matrix& dB, Vector&, Vector&) { dB = E / w.alpha_B; }, h);
  for (Index i = 0; i < m; ++i)
    J.col(col++) = directional_derivative(
        p, L, [&](Matrix&, Matrix&, Vector& db, Vector&) { db(i) = 1.0 / w.alpha_b; }, h);
  for (Index i = 0; i < s; ++i)
    J.col(col++) = directional_derivative(
        p, L, [&](Matrix&, Matrix&, Vector&, Vector& dd) { dd(i) = 1.0 / w.alpha_d; }, h);
  return largest_singular_value(J);
}

// Unit-norm Toeplitz directions of an r×c matrix, one per diagonal.
inline std::vector<Matrix> toeplitz_directions(Index rows, Index cols) {
  std::vector<Matrix> out;
  for (Index off = -(rows - 1); off <= cols - 1; ++off) {
    Matrix E = Matrix::Zero(rows, cols);
    for (Index i = 0; i < rows; ++i)
      if (i + off >= 0 && i + off < cols) E(i, i + off) = 1.0;
    out.push_back(E / E.norm());
  }
  return out;
}

}  // namespace lsecond::testing
