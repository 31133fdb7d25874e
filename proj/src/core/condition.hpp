// Copyright The lse-cond Authors
// SPDX-License-Identifier: Apache-2.0

// Exact partial condition numbers of L^T x for the LSE solution.
//
// Three independent routes compute the same number:
//   kron    largest singular value of the explicit derivative matrix
//           M = [M1, M2, M3, M4] assembled with Kronecker products,
//   closed  sqrt(||C||_2) with C built from dense pseudo-inverses,
//   gsvd    sqrt(||C||_2) with C built from the GSVD factors only.

#pragma once

#include <chrono>
#include <optional>
#include <string_view>

#include "core/linalg.hpp"

namespace lsecond {

enum class ConditionMethod {
  kron_oracle,
  closed,
  gsvd,
  lls_closed,
  lls_svd,
  upper_bound,
  structured,
  structured_lls,
};

std::string_view to_string(ConditionMethod method);

struct ConditionReport {
  double kappa = 0.0;
  ConditionMethod method = ConditionMethod::closed;
  std::optional<double> c_norm;  // ||C||_2 for the C-based routes
  std::chrono::duration<double, std::milli> elapsed{0};
};

// Column blocks of M, each with k = L.cols() rows:
// M1 (k × mn), M2 (k × sn), M3 (k × m), M4 (k × s).
struct KroneckerBlocks {
  Matrix M1, M2, M3, M4;

  Matrix assembled() const;
};

// The oracle refuses problems with mn + sn above this many columns.
inline constexpr Index kKronMaxColumns = 10000;

KroneckerBlocks kron_oracle(const LseProblem& problem, const ConditionWeights& weights,
                            Index max_columns = kKronMaxColumns);

ConditionReport cond_exact_kron(const LseProblem& problem, const ConditionWeights& weights,
                                Index max_columns = kKronMaxColumns);
ConditionReport cond_exact_closed(const LseProblem& problem, const ConditionWeights& weights);
ConditionReport cond_exact_gsvd(const LseProblem& problem, const ConditionWeights& weights);

// Variants reusing an existing solution (x, r and the GSVD factors).
ConditionReport cond_exact_gsvd(const LseProblem& problem, const LseSolution& solution,
                                const ConditionWeights& weights);

// The k×k matrix C, symmetrized, from the closed route and the GSVD route.
Matrix closed_form_C(const LseProblem& problem, const ConditionWeights& weights);
Matrix gsvd_form_C(const LseProblem& problem, const LseSolution& solution,
                   const ConditionWeights& weights);

// Ordinary least squares (B = 0), A of full column rank.
ConditionReport cond_lls_closed(const Matrix& A, const Vector& b,
                                const ConditionWeights& weights);
ConditionReport cond_lls_svd(const Matrix& A, const Vector& b,
                             const ConditionWeights& weights);
// Scalar form for a single column L, written with A^+ and (A^T A)^{-1}.
double cond_lls_single(const Matrix& A, const Vector& b, const ConditionWeights& weights);

// Sum of the spectral norms of the four blocks of M for L = I and unit
// weights; an upper bound on the exact value. Other settings raise
// Error(domain).
ConditionReport cond_upper_bound(const LseProblem& problem,
                                 const ConditionWeights& weights = {});

// Dense operators shared by the closed route, the oracle and the bound.
struct DenseOperators {
  Matrix ap_pinv;   // (AP)^+, n×m
  Matrix ba_pinv;   // B_A^+, n×s
  Matrix G;         // ((AP)^T AP)^+ = (AP)^+ ((AP)^+)^T, n×n
  Matrix H;         // B_A^+ (B_A^+)^T, n×n
  Vector x;
  Vector r;
  Vector y;         // (A B_A^+)^T r, length s
};

DenseOperators dense_operators(const LseProblem& problem);

}  // namespace lsecond
