// Copyright The lse-cond Authors
// SPDX-License-Identifier: Apache-2.0

// Small dense helpers built on SVD / symmetric eigensolvers.

#pragma once

#include <optional>

#include "core/types.hpp"

namespace lsecond::dense {

enum class SvdVectors { none, thin, full };

// M = U diag(sigma) V^T with sigma descending. U and V are empty for
// SvdVectors::none. Backed by LAPACK dgesvd.
struct Svd {
  Vector sigma;
  Matrix U;
  Matrix V;
};

Svd svd(const Matrix& M, SvdVectors vectors = SvdVectors::none);

// max(rows, cols) * machine epsilon.
double default_rank_tol(Index rows, Index cols);

// Singular values at or below rel_tol * sigma_max count as zero.
Index numerical_rank(const Matrix& M, std::optional<double> rel_tol = {});

// Pseudo-inverse keeping exactly the `rank` largest singular values.
Matrix pinv(const Matrix& M, Index rank);

// Orthonormal basis of null(M) for a matrix of the given rank.
Matrix null_basis(const Matrix& M, Index rank);

// Largest singular value; 0 for empty matrices.
double spectral_norm(const Matrix& M);

// Largest |eigenvalue| of (C + C^T) / 2.
double symmetric_norm(const Matrix& C);

// Smallest eigenvalue of (C + C^T) / 2.
double symmetric_min_eigenvalue(const Matrix& C);

// Kronecker product.
Matrix kron(const Matrix& X, const Matrix& Y);

// K * Pi_{pq}, where Pi_{pq} vec(Z) = vec(Z^T) for Z of size p×q. K has p*q
// columns; the permutation is applied as a column gather.
Matrix times_vec_permutation(const Matrix& K, Index p, Index q);

}  // namespace lsecond::dense
