// Copyright The lse-cond Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/condition.hpp"

#include <cmath>

#include "core/dense.hpp"

namespace lsecond {

namespace {

using Clock = std::chrono::steady_clock;

struct Stopwatch {
  Clock::time_point start = Clock::now();
  std::chrono::duration<double, std::milli> elapsed() const { return Clock::now() - start; }
};

ConditionReport from_C(const Matrix& C, ConditionMethod method, const Stopwatch& watch) {
  ConditionReport report;
  report.method = method;
  const double norm = dense::symmetric_norm(C);
  report.c_norm = norm;
  report.kappa = std::sqrt(norm);
  report.elapsed = watch.elapsed();
  return report;
}

void require_full_column_rank(const Matrix& A) {
  const Index rank = dense::numerical_rank(A);
  if (rank != A.cols()) throw RankDeficiencyError(0, rank, 0, A.cols(), "A must have full column rank");
}

}  // namespace

std::string_view to_string(ConditionMethod method) {
  switch (method) {
    case ConditionMethod::kron_oracle: return "kron_oracle";
    case ConditionMethod::closed: return "closed";
    case ConditionMethod::gsvd: return "gsvd";
    case ConditionMethod::lls_closed: return "lls_closed";
    case ConditionMethod::lls_svd: return "lls_svd";
    case ConditionMethod::upper_bound: return "upper_bound";
    case ConditionMethod::structured: return "structured";
    case ConditionMethod::structured_lls: return "structured_lls";
  }
  return "unknown";
}

Matrix KroneckerBlocks::assembled() const {
  Matrix out(M3.rows(), M1.cols() + M2.cols() + M3.cols() + M4.cols());
  out << M1, M2, M3, M4;
  return out;
}

DenseOperators dense_operators(const LseProblem& problem) {
  const Matrix& A = problem.A();
  const Matrix& B = problem.B();
  const AssumptionDiagnostic diag = check_assumptions(A, B);
  if (!diag.ok) throw RankDeficiencyError(diag.rank_B, diag.rank_stacked, problem.s(), problem.n());

  DenseOperators ops;
  ops.ap_pinv = dense_ap_pinv(A, B);
  ops.ba_pinv = dense_ba_pinv(A, B, ops.ap_pinv);
  ops.G = ops.ap_pinv * ops.ap_pinv.transpose();
  ops.H = ops.ba_pinv * ops.ba_pinv.transpose();
  ops.x = ops.ap_pinv * problem.b() + ops.ba_pinv * problem.d();
  ops.r = problem.b() - A * ops.x;
  ops.y = (A * ops.ba_pinv).transpose() * ops.r;
  return ops;
}

KroneckerBlocks kron_oracle(const LseProblem& problem, const ConditionWeights& weights,
                            Index max_columns) {
  const Index m = problem.m(), n = problem.n(), s = problem.s();
  weights.validate(n);
  if (m * n + s * n > max_columns)
    throw Error(ErrorKind::oracle_too_large,
                "Kronecker oracle needs " + std::to_string(m * n + s * n) +
                    " columns (limit " + std::to_string(max_columns) +
                    "); use the closed or gsvd route");

  const DenseOperators ops = dense_operators(problem);
  const Matrix L = weights.projector(n);
  const Matrix LG = L.transpose() * ops.G;
  const Matrix LAp = L.transpose() * ops.ap_pinv;
  const Matrix LBa = L.transpose() * ops.ba_pinv;

  KroneckerBlocks blocks;
  blocks.M1 = (dense::times_vec_permutation(dense::kron(ops.r.transpose(), LG), m, n) -
               dense::kron(ops.x.transpose(), LAp)) /
              weights.alpha_A;
  blocks.M2 = -(dense::times_vec_permutation(dense::kron(ops.y.transpose(), LG), s, n) +
                dense::kron(ops.x.transpose(), LBa)) /
              weights.alpha_B;
  blocks.M3 = LAp / weights.alpha_b;
  blocks.M4 = LBa / weights.alpha_d;
  return blocks;
}

ConditionReport cond_exact_kron(const LseProblem& problem, const ConditionWeights& weights,
                                Index max_columns) {
  const Stopwatch watch;
  const KroneckerBlocks blocks = kron_oracle(problem, weights, max_columns);
  ConditionReport report;
  report.method = ConditionMethod::kron_oracle;
  report.kappa = blocks.M3.rows() == 0 ? 0.0 : dense::spectral_norm(blocks.assembled());
  report.c_norm = report.kappa * report.kappa;
  report.elapsed = watch.elapsed();
  return report;
}

Matrix closed_form_C(const LseProblem& problem, const ConditionWeights& weights) {
  const Index n = problem.n();
  weights.validate(n);
  const DenseOperators ops = dense_operators(problem);
  const Matrix L = weights.projector(n);

  const double aA2 = weights.alpha_A * weights.alpha_A;
  const double aB2 = weights.alpha_B * weights.alpha_B;
  const double c1 = ops.r.squaredNorm() / aA2 + ops.y.squaredNorm() / aB2;
  const double c2 = ops.x.squaredNorm() / aA2 + 1.0 / (weights.alpha_b * weights.alpha_b);
  const double c3 = ops.x.squaredNorm() / aB2 + 1.0 / (weights.alpha_d * weights.alpha_d);

  const Matrix GL = ops.G * L;
  const Vector Lg = L.transpose() * (ops.G * ops.x);
  const Vector Lh = L.transpose() * (ops.H * (problem.A().transpose() * ops.r));

  Matrix C = c1 * GL.transpose() * GL + c2 * L.transpose() * GL +
             c3 * L.transpose() * ops.H * L;
  C += (Lg * Lh.transpose() + Lh * Lg.transpose()) / aB2;
  return 0.5 * (C + C.transpose());
}

ConditionReport cond_exact_closed(const LseProblem& problem, const ConditionWeights& weights) {
  const Stopwatch watch;
  if (weights.k(problem.n()) == 0) return from_C(Matrix(0, 0), ConditionMethod::closed, watch);
  return from_C(closed_form_C(problem, weights), ConditionMethod::closed, watch);
}

Matrix gsvd_form_C(const LseProblem& problem, const LseSolution& solution,
                   const ConditionWeights& weights) {
  const Index n = problem.n(), s = problem.s();
  weights.validate(n);
  const GsvdFactors& f = solution.factors;
  const Matrix L = weights.projector(n);
  const Index t = f.t;

  const Matrix Y1 = f.Y1();
  const Matrix W = Y1.transpose() * L;        // (n-s)×k
  const Matrix gram = Y1.transpose() * Y1;
  const Matrix Q2 = f.Z2().transpose() * L;   // s×k

  // U2^T r restricted to the S_A rows.
  const Vector ur = f.U.middleCols(n - s, t).transpose() * solution.r;
  const Vector ratio = f.alpha.cwiseQuotient(f.beta);
  const Vector w = ratio.cwiseProduct(ur);                     // ||r^T A B_A^+|| = ||w||
  const Vector u = ratio.cwiseQuotient(f.beta).cwiseProduct(ur);
  const Vector Lh = L.transpose() * (f.X.middleCols(n - s, t) * u);
  const Vector Lg = W.transpose() * (Y1.transpose() * solution.x);

  const double aA2 = weights.alpha_A * weights.alpha_A;
  const double aB2 = weights.alpha_B * weights.alpha_B;
  const double xx = solution.x.squaredNorm();
  const double c1 = solution.r.squaredNorm() / aA2 + w.squaredNorm() / aB2;
  const double c2 = xx / aA2 + 1.0 / (weights.alpha_b * weights.alpha_b);
  const double c3 = xx / aB2 + 1.0 / (weights.alpha_d * weights.alpha_d);

  Matrix C = c1 * W.transpose() * gram * W + c2 * W.transpose() * W + c3 * Q2.transpose() * Q2;
  C += (Lg * Lh.transpose() + Lh * Lg.transpose()) / aB2;
  return 0.5 * (C + C.transpose());
}

ConditionReport cond_exact_gsvd(const LseProblem& problem, const LseSolution& solution,
                                const ConditionWeights& weights) {
  const Stopwatch watch;
  if (weights.k(problem.n()) == 0) return from_C(Matrix(0, 0), ConditionMethod::gsvd, watch);
  return from_C(gsvd_form_C(problem, solution, weights), ConditionMethod::gsvd, watch);
}

ConditionReport cond_exact_gsvd(const LseProblem& problem, const ConditionWeights& weights) {
  const Stopwatch watch;
  weights.validate(problem.n());
  const LseSolution solution = solve_lse(problem);
  ConditionReport report = cond_exact_gsvd(problem, solution, weights);
  report.elapsed = watch.elapsed();
  return report;
}

ConditionReport cond_lls_closed(const Matrix& A, const Vector& b,
                                const ConditionWeights& weights) {
  const Stopwatch watch;
  const Index n = A.cols();
  weights.validate(n);
  if (b.size() != A.rows()) throw Error(ErrorKind::shape, "b must have A.rows() entries");
  require_full_column_rank(A);

  const Eigen::HouseholderQR<Matrix> qr(A);
  const auto R = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  const Vector x = qr.solve(b);
  const Vector r = b - A * x;
  const Matrix L = weights.projector(n);
  const Matrix N = R.transpose().solve(L);  // R^{-T} L, so L^T (A^T A)^{-1} L = N^T N
  const Matrix F = R.solve(N);              // (A^T A)^{-1} L

  const double aA2 = weights.alpha_A * weights.alpha_A;
  const Matrix C = (r.squaredNorm() / aA2) * F.transpose() * F +
                   (x.squaredNorm() / aA2 + 1.0 / (weights.alpha_b * weights.alpha_b)) *
                       N.transpose() * N;
  return from_C(C, ConditionMethod::lls_closed, watch);
}

ConditionReport cond_lls_svd(const Matrix& A, const Vector& b, const ConditionWeights& weights) {
  const Stopwatch watch;
  const Index n = A.cols();
  weights.validate(n);
  if (b.size() != A.rows()) throw Error(ErrorKind::shape, "b must have A.rows() entries");
  require_full_column_rank(A);

  const dense::Svd svd = dense::svd(A, dense::SvdVectors::thin);
  const Vector& sigma = svd.sigma;
  const Vector x = svd.V * (svd.U.transpose() * b).cwiseQuotient(sigma);
  const Vector r = b - A * x;

  const double aA2 = weights.alpha_A * weights.alpha_A;
  const double inv_ab2 = 1.0 / (weights.alpha_b * weights.alpha_b);
  Vector S(n);
  for (Index i = 0; i < n; ++i) {
    const double si = sigma(i);
    S(i) = std::sqrt((r.squaredNorm() / (si * si) + x.squaredNorm()) / aA2 + inv_ab2) / si;
  }
  const Matrix SXtL = S.asDiagonal() * (svd.V.transpose() * weights.projector(n));
  ConditionReport report;
  report.method = ConditionMethod::lls_svd;
  report.kappa = dense::spectral_norm(SXtL);
  report.c_norm = report.kappa * report.kappa;
  report.elapsed = watch.elapsed();
  return report;
}

double cond_lls_single(const Matrix& A, const Vector& b, const ConditionWeights& weights) {
  const Index n = A.cols();
  weights.validate(n);
  if (weights.k(n) != 1) throw Error(ErrorKind::domain, "scalar LLS form needs a single-column L");
  require_full_column_rank(A);
  const Matrix A_pinv = dense::pinv(A, n);
  const Matrix AtA_inv = A_pinv * A_pinv.transpose();
  const Vector x = A_pinv * b;
  const Vector r = b - A * x;
  const Matrix L = weights.projector(n);
  const double aA2 = weights.alpha_A * weights.alpha_A;
  const double t1 = (L.transpose() * AtA_inv).norm();
  const double t2 = (L.transpose() * A_pinv).norm();
  return std::sqrt(r.squaredNorm() / aA2 * t1 * t1 +
                   (x.squaredNorm() / aA2 + 1.0 / (weights.alpha_b * weights.alpha_b)) * t2 * t2);
}

ConditionReport cond_upper_bound(const LseProblem& problem, const ConditionWeights& weights) {
  const Stopwatch watch;
  const Index n = problem.n();
  if (!weights.identity_L(n) || !weights.unit_weights())
    throw Error(ErrorKind::domain, "the upper bound is defined for L = I and unit weights");
  const DenseOperators ops = dense_operators(problem);

  // ||M1||_2 and ||M2||_2 through M_i M_i^T; the cross terms of M1 vanish
  // because (AP)^+ r = 0.
  const Vector g = ops.G * ops.x;
  const Vector h = ops.H * (problem.A().transpose() * ops.r);
  const Matrix G2 = ops.G * ops.G;
  const double m1 = std::sqrt(dense::symmetric_norm(ops.r.squaredNorm() * G2 +
                                                    ops.x.squaredNorm() * ops.G));
  const double m2 = std::sqrt(dense::symmetric_norm(
      ops.y.squaredNorm() * G2 + ops.x.squaredNorm() * ops.H + g * h.transpose() +
      h * g.transpose()));

  ConditionReport report;
  report.method = ConditionMethod::upper_bound;
  report.kappa = m1 + m2 + dense::spectral_norm(ops.ap_pinv) + dense::spectral_norm(ops.ba_pinv);
  report.elapsed = watch.elapsed();
  return report;
}

}  // namespace lsecond
