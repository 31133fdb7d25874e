// Copyright The lse-cond Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/linalg.hpp"

#include <lapacke.h>

#include <algorithm>
#include <numeric>
#include <vector>

#include "core/dense.hpp"

namespace lsecond {

AssumptionDiagnostic check_assumptions(const Matrix& A, const Matrix& B,
                                       std::optional<double> rel_tol) {
  if (A.cols() != B.cols())
    throw Error(ErrorKind::shape, "A and B must have the same number of columns");
  AssumptionDiagnostic diag;
  diag.rank_B = dense::numerical_rank(B, rel_tol);
  Matrix stacked(A.rows() + B.rows(), A.cols());
  stacked << A, B;
  diag.rank_stacked = dense::numerical_rank(stacked, rel_tol);
  diag.ok = diag.rank_B == B.rows() && diag.rank_stacked == A.cols();
  return diag;
}

Matrix GsvdFactors::sigma() const {
  const Index k = n() - s();
  Matrix out = Matrix::Zero(m(), n());
  out.topLeftCorner(k, k).diagonal() = sigma1;
  out.block(k, k, t, t).diagonal() = alpha;
  return out;
}

Matrix GsvdFactors::lambda() const {
  const Index k = n() - s();
  Matrix out = Matrix::Zero(s(), n());
  out.block(0, k, t, t).diagonal() = beta;
  out.block(t, k + t, s() - t, s() - t).setIdentity();
  return out;
}

Matrix GsvdFactors::Y1() const {
  return X.leftCols(n() - s()) * sigma1.cwiseInverse().asDiagonal();
}

Vector GsvdFactors::lambda1_inv() const {
  Vector out = Vector::Ones(s());
  out.head(t) = beta.cwiseInverse();
  return out;
}

Matrix GsvdFactors::Z2() const {
  return X.rightCols(s()) * lambda1_inv().asDiagonal();
}

namespace {

GsvdFactors svd_factors(const Matrix& A) {
  const Index m = A.rows(), n = A.cols();
  const dense::Svd svd = dense::svd(A, dense::SvdVectors::full);
  GsvdFactors f;
  f.U = svd.U;
  f.V = Matrix(0, 0);
  f.X = svd.V;
  f.X_inv = f.X.transpose();
  f.sigma1 = svd.sigma.head(std::min(m, n));
  f.alpha = Vector(0);
  f.beta = Vector(0);
  f.t = 0;
  return f;
}

}  // namespace

GsvdFactors gsvd(const Matrix& A, const Matrix& B) {
  const Index m = A.rows(), n = A.cols(), s = B.rows();
  const AssumptionDiagnostic diag = check_assumptions(A, B);
  if (!diag.ok) throw RankDeficiencyError(diag.rank_B, diag.rank_stacked, s, n);
  if (s == 0) return svd_factors(A);

  const lapack_int lm = static_cast<lapack_int>(m);
  const lapack_int ln = static_cast<lapack_int>(n);
  const lapack_int ls = static_cast<lapack_int>(s);
  const lapack_int lda = std::max<lapack_int>(1, lm);
  const lapack_int ldb = std::max<lapack_int>(1, ls);
  const lapack_int ldq = std::max<lapack_int>(1, ln);

  std::vector<double> a(static_cast<size_t>(lda * ln), 0.0);
  std::vector<double> b(static_cast<size_t>(ldb * ln), 0.0);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < m; ++i) a[static_cast<size_t>(i + j * lda)] = A(i, j);
    for (Index i = 0; i < s; ++i) b[static_cast<size_t>(i + j * ldb)] = B(i, j);
  }
  std::vector<double> alpha(static_cast<size_t>(n)), beta(static_cast<size_t>(n));
  std::vector<double> u(static_cast<size_t>(lda * std::max<lapack_int>(1, lm)));
  std::vector<double> v(static_cast<size_t>(ldb * ls));
  std::vector<double> q(static_cast<size_t>(ldq * ln));
  std::vector<lapack_int> iwork(static_cast<size_t>(n));
  lapack_int k = 0, l = 0;

  const lapack_int info = LAPACKE_dggsvd3(
      LAPACK_COL_MAJOR, 'U', 'V', 'Q', lm, ln, ls, &k, &l, a.data(), lda, b.data(),
      ldb, alpha.data(), beta.data(), u.data(), lda, v.data(), ldb, q.data(), ldq,
      iwork.data());
  if (info > 0)
    throw Error(ErrorKind::non_convergence, "generalized SVD iteration did not converge");
  if (info < 0)
    throw Error(ErrorKind::domain,
                "generalized SVD rejected argument " + std::to_string(-info));
  if (k != ln - ls || l != ls)
    throw RankDeficiencyError(diag.rank_B, diag.rank_stacked, s, n,
                              "generalized SVD found k = " + std::to_string(k) +
                                  ", l = " + std::to_string(l));

  const auto A_at = [&](Index i, Index j) { return a[static_cast<size_t>(i + j * lda)]; };
  const auto B_at = [&](Index i, Index j) { return b[static_cast<size_t>(i + j * ldb)]; };

  // (0 R) = R since k + l = n. When m < n the trailing rows of R live in B.
  Matrix R = Matrix::Zero(n, n);
  const Index r_rows_in_a = std::min(m, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i <= std::min(j, r_rows_in_a - 1); ++i) R(i, j) = A_at(i, j);
  if (m < n) {
    const Index off = m - k;
    for (Index j = m; j < n; ++j)
      for (Index i = m; i <= j; ++i) R(i, j) = B_at(off + (i - m), j);
  }

  Matrix U(m, m), V(s, s), Q(n, n);
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i < m; ++i) U(i, j) = u[static_cast<size_t>(i + j * lda)];
  for (Index j = 0; j < s; ++j)
    for (Index i = 0; i < s; ++i) V(i, j) = v[static_cast<size_t>(i + j * ldb)];
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) Q(i, j) = q[static_cast<size_t>(i + j * ldq)];

  const Matrix X_raw = R.triangularView<Eigen::Upper>().solve<Eigen::OnTheRight>(Q);
  const Matrix X_inv_raw = R.triangularView<Eigen::Upper>() * Q.transpose();

  // Reorder the s-block: pairs (alpha > 0) first by decreasing alpha, then the
  // null(A) directions with alpha = 0, beta = 1.
  const Index kk = k;
  const double zero_tol = dense::default_rank_tol(m + s, n);
  std::vector<Index> pairs, nulls;
  for (Index j = 0; j < s; ++j) {
    const double aj = alpha[static_cast<size_t>(kk + j)];
    (aj > zero_tol ? pairs : nulls).push_back(j);
  }
  std::stable_sort(pairs.begin(), pairs.end(), [&](Index x, Index y) {
    return alpha[static_cast<size_t>(kk + x)] > alpha[static_cast<size_t>(kk + y)];
  });
  std::vector<Index> order = pairs;
  order.insert(order.end(), nulls.begin(), nulls.end());
  const Index t = static_cast<Index>(pairs.size());

  GsvdFactors f;
  f.t = t;
  f.alpha.resize(t);
  f.beta.resize(t);
  f.sigma1 = Vector::Ones(n - s);
  f.X = X_raw;
  f.X_inv = X_inv_raw;
  f.U.resize(m, m);
  f.V.resize(s, s);
  f.U.leftCols(kk) = U.leftCols(kk);

  std::vector<bool> used(static_cast<size_t>(m), false);
  for (Index p = 0; p < s; ++p) {
    const Index j = order[static_cast<size_t>(p)];
    f.V.col(p) = V.col(j);
    f.X.col(kk + p) = X_raw.col(kk + j);
    f.X_inv.row(kk + p) = X_inv_raw.row(kk + j);
    if (p < t) {
      f.alpha(p) = alpha[static_cast<size_t>(kk + j)];
      f.beta(p) = beta[static_cast<size_t>(kk + j)];
      f.U.col(kk + p) = U.col(kk + j);
      used[static_cast<size_t>(kk + j)] = true;
    }
  }
  Index next = kk + t;
  for (Index c = kk; c < m; ++c) {
    if (used[static_cast<size_t>(c)]) continue;
    f.U.col(next++) = U.col(c);
  }
  return f;
}

Matrix null_projector(const Matrix& B) {
  const Index n = B.cols();
  Matrix P = Matrix::Identity(n, n);
  if (B.rows() == 0) return P;
  const Index r = dense::numerical_rank(B);
  if (r == 0) return P;
  const Matrix Vr = dense::svd(B, dense::SvdVectors::thin).V.leftCols(r);
  P.noalias() -= Vr * Vr.transpose();
  return P;
}

Vector apply_ap_pinv(const GsvdFactors& f, const Vector& y) {
  const Index k = f.n() - f.s();
  const Vector coeffs = f.U.leftCols(k).transpose() * y;
  return f.X.leftCols(k) * coeffs.cwiseQuotient(f.sigma1);
}

Matrix ap_pinv(const GsvdFactors& f) {
  const Index k = f.n() - f.s();
  return f.Y1() * f.U.leftCols(k).transpose();
}

Vector apply_ba_pinv(const GsvdFactors& f, const Vector& y) {
  if (f.s() == 0) return Vector::Zero(f.n());
  const Vector coeffs = f.V.transpose() * y;
  return f.X.rightCols(f.s()) * coeffs.cwiseProduct(f.lambda1_inv());
}

Matrix ba_pinv(const GsvdFactors& f) {
  if (f.s() == 0) return Matrix::Zero(f.n(), 0);
  return f.Z2() * f.V.transpose();
}

LseSolution solve_lse(const LseProblem& problem) {
  LseSolution sol;
  sol.factors = gsvd(problem.A(), problem.B());
  sol.x = apply_ap_pinv(sol.factors, problem.b()) + apply_ba_pinv(sol.factors, problem.d());
  sol.r = problem.b() - problem.A() * sol.x;
  return sol;
}

Matrix dense_ap_pinv(const Matrix& A, const Matrix& B) {
  const Index n = A.cols(), s = B.rows();
  const Matrix AP = A * null_projector(B);
  return dense::pinv(AP, n - s);
}

Matrix dense_ba_pinv(const Matrix& A, const Matrix& B, const Matrix& ap_pinv) {
  const Index n = A.cols(), s = B.rows();
  if (s == 0) return Matrix::Zero(n, 0);
  const Matrix I_minus = Matrix::Identity(n, n) - ap_pinv * A;
  return I_minus * dense::pinv(B, s);
}

}  // namespace lsecond
