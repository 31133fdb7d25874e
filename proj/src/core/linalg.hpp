// Copyright The lse-cond Authors
// SPDX-License-Identifier: Apache-2.0

// Generalized SVD of (A, B), the LSE solution, and the two pseudo-inverse
// operators (AP)^+ and B_A^+ that the solution and all condition formulas
// are built from.

#pragma once

#include <optional>

#include "core/types.hpp"

namespace lsecond {

struct AssumptionDiagnostic {
  Index rank_B = 0;
  Index rank_stacked = 0;
  bool ok = false;
};

// ok iff rank(B) = s and rank([A; B]) = n. Ranks use singular values relative
// to sigma_max; the default threshold is max(rows, cols) * eps.
AssumptionDiagnostic check_assumptions(const Matrix& A, const Matrix& B,
                                       std::optional<double> rel_tol = {});

// A = U Sigma X^{-1}, B = V Lambda X^{-1} with
//
//   Sigma  = [ Sigma1   0   0 ]      Lambda = [ 0  S_B   0       ]
//            [ 0       S_A  0 ]               [ 0   0    I_{s-t} ]
//            [ 0        0   0 ]
//
// Column blocks are (n-s, t, s-t); Sigma's row blocks are (n-s, t, m-n+s-t).
// For s > 0, Sigma1 = I_{n-s}. For s = 0 the factorization is the SVD of A,
// X is orthogonal and Sigma1 holds the singular values.
struct GsvdFactors {
  Matrix U;       // m×m orthogonal
  Matrix V;       // s×s orthogonal
  Matrix X;       // n×n nonsingular
  Matrix X_inv;   // X^{-1}, computed directly from the orthogonal reduction
  Vector alpha;   // diag(S_A), length t
  Vector beta;    // diag(S_B), length t
  Vector sigma1;  // diagonal of Sigma1, length n-s
  Index t = 0;

  Index m() const { return U.rows(); }
  Index n() const { return X.rows(); }
  Index s() const { return V.rows(); }

  Matrix sigma() const;   // m×n
  Matrix lambda() const;  // s×n

  // X1 Sigma1^{-1}: (AP)^+ = Y1 U1^T.
  Matrix Y1() const;
  // X2 Lambda1^{-1}: B_A^+ = Z2 V^T.
  Matrix Z2() const;
  // Diagonal of Lambda1^{-1} = diag(1/beta_1 .. 1/beta_t, 1 .. 1), length s.
  Vector lambda1_inv() const;
};

GsvdFactors gsvd(const Matrix& A, const Matrix& B);

// P = I_n - B^+ B, the orthogonal projector onto null(B).
Matrix null_projector(const Matrix& B);

Vector apply_ap_pinv(const GsvdFactors& f, const Vector& y);
Matrix ap_pinv(const GsvdFactors& f);
Vector apply_ba_pinv(const GsvdFactors& f, const Vector& y);
Matrix ba_pinv(const GsvdFactors& f);

struct LseSolution {
  Vector x;
  Vector r;  // b - A x
  GsvdFactors factors;
};

LseSolution solve_lse(const LseProblem& problem);

// Dense reference operators computed from SVD pseudo-inverses:
// (AP)^+ with rank n - s, and B_A^+ = (I - (AP)^+ A) B^+.
Matrix dense_ap_pinv(const Matrix& A, const Matrix& B);
Matrix dense_ba_pinv(const Matrix& A, const Matrix& B, const Matrix& ap_pinv);

}  // namespace lsecond
