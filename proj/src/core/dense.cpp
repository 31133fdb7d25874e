// Copyright The lse-cond Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/dense.hpp"

#include <lapacke.h>

#include <algorithm>
#include <limits>
#include <vector>

namespace lsecond::dense {

Svd svd(const Matrix& M, SvdVectors vectors) {
  const Index m = M.rows(), n = M.cols(), k = std::min(m, n);
  Svd out;
  out.sigma = Vector::Zero(k);
  const Index ucols = vectors == SvdVectors::full ? m : k;
  const Index vrows = vectors == SvdVectors::full ? n : k;
  if (vectors != SvdVectors::none) {
    out.U = Matrix::Identity(m, ucols);
    out.V = Matrix::Identity(n, vrows);
  }
  if (k == 0) return out;

  const char job = vectors == SvdVectors::none ? 'N' : vectors == SvdVectors::thin ? 'S' : 'A';
  Matrix a = M;
  Matrix u(m, vectors == SvdVectors::none ? 1 : ucols);
  Matrix vt(vectors == SvdVectors::none ? 1 : vrows, n);
  std::vector<double> superb(static_cast<size_t>(std::max<Index>(k - 1, 1)));
  const lapack_int info = LAPACKE_dgesvd(
      LAPACK_COL_MAJOR, job, job, static_cast<lapack_int>(m), static_cast<lapack_int>(n),
      a.data(), static_cast<lapack_int>(m), out.sigma.data(), u.data(),
      static_cast<lapack_int>(u.rows()), vt.data(), static_cast<lapack_int>(vt.rows()),
      superb.data());
  if (info > 0) throw Error(ErrorKind::non_convergence, "SVD iteration did not converge");
  if (info < 0) throw Error(ErrorKind::domain, "SVD rejected argument " + std::to_string(-info));
  if (vectors != SvdVectors::none) {
    out.U = u;
    out.V = vt.transpose();
  }
  return out;
}

double default_rank_tol(Index rows, Index cols) {
  return static_cast<double>(std::max<Index>(std::max(rows, cols), 1)) *
         std::numeric_limits<double>::epsilon();
}

Index numerical_rank(const Matrix& M, std::optional<double> rel_tol) {
  if (M.size() == 0) return 0;
  const double tol = rel_tol.value_or(default_rank_tol(M.rows(), M.cols()));
  const Vector sv = svd(M).sigma;
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double cut = tol * sv(0);
  return static_cast<Index>((sv.array() > cut).count());
}

Matrix pinv(const Matrix& M, Index rank) {
  Matrix out = Matrix::Zero(M.cols(), M.rows());
  if (rank == 0 || M.size() == 0) return out;
  const Svd f = svd(M, SvdVectors::thin);
  const Index r = std::min<Index>(rank, f.sigma.size());
  const Vector inv = f.sigma.head(r).cwiseInverse();
  out.noalias() = f.V.leftCols(r) * inv.asDiagonal() * f.U.leftCols(r).transpose();
  return out;
}

Matrix null_basis(const Matrix& M, Index rank) {
  const Index n = M.cols();
  if (M.rows() == 0 || rank == 0) return Matrix::Identity(n, n);
  return svd(M, SvdVectors::full).V.rightCols(n - rank);
}

double spectral_norm(const Matrix& M) {
  if (M.size() == 0) return 0.0;
  return svd(M).sigma(0);
}

double symmetric_norm(const Matrix& C) {
  if (C.size() == 0) return 0.0;
  const Matrix sym = 0.5 * (C + C.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

double symmetric_min_eigenvalue(const Matrix& C) {
  if (C.size() == 0) return 0.0;
  const Matrix sym = 0.5 * (C + C.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0);
}

Matrix kron(const Matrix& X, const Matrix& Y) {
  Matrix out(X.rows() * Y.rows(), X.cols() * Y.cols());
  for (Index j = 0; j < X.cols(); ++j)
    for (Index i = 0; i < X.rows(); ++i)
      out.block(i * Y.rows(), j * Y.cols(), Y.rows(), Y.cols()) = X(i, j) * Y;
  return out;
}

Matrix times_vec_permutation(const Matrix& K, Index p, Index q) {
  // Pi has a one at (row j + i q, column i + j p) for 0 <= i < p, 0 <= j < q.
  Matrix out(K.rows(), p * q);
  for (Index j = 0; j < q; ++j)
    for (Index i = 0; i < p; ++i) out.col(i + j * p) = K.col(j + i * q);
  return out;
}

}  // namespace lsecond::dense
