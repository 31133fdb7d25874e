// Copyright The lse-cond Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/estimators.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/constants/constants.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/rng.hpp"

namespace lsecond {

double wallis(Index q, WallisMode mode) {
  if (q < 1) throw Error(ErrorKind::domain, "Wallis factor needs q >= 1");
  const double pi = boost::math::constants::pi<double>();
  if (mode == WallisMode::approx) return std::sqrt(2.0 / (pi * (static_cast<double>(q) - 0.5)));
  // odd q: (1*3*...*(q-2)) / (2*4*...*(q-1)); even q: (2/pi) (2*4*...*(q-2)) / (1*3*...*(q-1)).
  double w = (q % 2 == 1) ? 1.0 : 2.0 / pi;
  for (Index i = (q % 2 == 1) ? 1 : 2; i + 1 < q; i += 2)
    w *= static_cast<double>(i) / static_cast<double>(i + 1);
  return w;
}

GsvdConditionOperator::GsvdConditionOperator(const LseProblem& problem,
                                             const LseSolution& solution,
                                             const ConditionWeights& weights) {
  const Index n = problem.n(), s = problem.s();
  weights.validate(n);
  const GsvdFactors& f = solution.factors;
  const Matrix L = weights.projector(n);
  const Index t = f.t;

  const Matrix Y1 = f.Y1();
  W_ = Y1.transpose() * L;
  gram_ = Y1.transpose() * Y1;
  Q2_ = f.Z2().transpose() * L;

  const Vector ur = f.U.middleCols(n - s, t).transpose() * solution.r;
  const Vector ratio = f.alpha.cwiseQuotient(f.beta);
  const Vector w = ratio.cwiseProduct(ur);
  const Vector u = ratio.cwiseQuotient(f.beta).cwiseProduct(ur);
  Lh_ = L.transpose() * (f.X.middleCols(n - s, t) * u);
  Lg_ = W_.transpose() * (Y1.transpose() * solution.x);

  const double aA2 = weights.alpha_A * weights.alpha_A;
  const double aB2 = weights.alpha_B * weights.alpha_B;
  const double xx = solution.x.squaredNorm();
  c1_ = solution.r.squaredNorm() / aA2 + w.squaredNorm() / aB2;
  c2_ = xx / aA2 + 1.0 / (weights.alpha_b * weights.alpha_b);
  c3_ = xx / aB2 + 1.0 / (weights.alpha_d * weights.alpha_d);
  cross_ = 1.0 / aB2;
}

Vector GsvdConditionOperator::apply(const Vector& v) const {
  const Vector Wv = W_ * v;
  Vector out = W_.transpose() * (c1_ * (gram_ * Wv) + c2_ * Wv);
  out += c3_ * (Q2_.transpose() * (Q2_ * v));
  out += cross_ * (Lg_ * Lh_.dot(v) + Lh_ * Lg_.dot(v));
  return out;
}

Matrix GsvdConditionOperator::materialize() const {
  Matrix C = c1_ * W_.transpose() * gram_ * W_ + c2_ * W_.transpose() * W_ +
             c3_ * Q2_.transpose() * Q2_;
  C += cross_ * (Lg_ * Lh_.transpose() + Lh_ * Lg_.transpose());
  return 0.5 * (C + C.transpose());
}

double kappa_dir_sq(const GsvdConditionOperator& op, const Vector& z) {
  if (z.size() != op.dim()) throw Error(ErrorKind::shape, "direction has the wrong length");
  if (std::abs(z.norm() - 1.0) > 1e-10) throw Error(ErrorKind::domain, "direction must be a unit vector");
  return z.dot(op.apply(z));
}

double kappa_dir_sq(const LseProblem& problem, const ConditionWeights& weights, const Vector& z) {
  ConditionWeights full = weights;
  full.L.reset();
  return kappa_dir_sq(GsvdConditionOperator(problem, solve_lse(problem), full), z);
}

SsceReport ssce_estimate(const LseProblem& problem, const LseSolution& solution,
                         const ConditionWeights& weights, Index q, std::uint64_t seed,
                         WallisMode mode) {
  const Index n = problem.n();
  if (!weights.identity_L(n))
    throw Error(ErrorKind::domain, "SSCE estimates the full solution and needs L = I");
  if (q < 1 || q > n) throw Error(ErrorKind::domain, "SSCE needs 1 <= q <= n");

  const GsvdConditionOperator op(problem, solution, weights);
  Rng rng = make_rng(seed, {1});
  const Matrix Z = gaussian_matrix(rng, n, q);
  const Eigen::HouseholderQR<Matrix> qr(Z);
  Matrix Q = qr.householderQ() * Matrix::Identity(n, q);
  for (Index j = 0; j < q; ++j)
    if (qr.matrixQR()(j, j) < 0.0) Q.col(j) = -Q.col(j);

  SsceReport report;
  report.q = q;
  report.wallis_q = wallis(q, mode);
  report.wallis_n = wallis(n, mode);
  double sum = 0.0;
  for (Index j = 0; j < q; ++j) {
    const double v = kappa_dir_sq(op, Q.col(j));
    report.kappa_i_sq.push_back(v);
    sum += v;
  }
  report.kappa_hat = report.wallis_q / report.wallis_n * std::sqrt(std::max(sum, 0.0));
  return report;
}

SsceReport ssce_estimate(const LseProblem& problem, const ConditionWeights& weights, Index q,
                         std::uint64_t seed, WallisMode mode) {
  if (!weights.identity_L(problem.n()))
    throw Error(ErrorKind::domain, "SSCE estimates the full solution and needs L = I");
  return ssce_estimate(problem, solve_lse(problem), weights, q, seed, mode);
}

namespace {

// log p_{j+1}(t) for t above every root, from a_0..a_j and b_0..b_j.
double log_lanczos_poly(const std::vector<double>& a, const std::vector<double>& b, double t) {
  double log_p = 0.0;
  double rho = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double prev = i == 0 ? 0.0 : b[i - 1] / rho;
    rho = ((t - a[i]) - prev) / b[i];
    if (!(rho > 0.0)) return -std::numeric_limits<double>::infinity();
    log_p += std::log(rho);
  }
  return log_p;
}

double upper_root(const std::vector<double>& a, const std::vector<double>& b, double theta,
                  double log_target) {
  const auto f = [&](double t) { return log_lanczos_poly(a, b, t) - log_target; };
  const double scale = std::max({std::abs(theta), b.back(), std::numeric_limits<double>::min()});
  double lo = theta, step = scale, hi = theta + step;
  while (f(hi) < 0.0) {
    lo = hi;
    step *= 2.0;
    hi = theta + step;
  }
  for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return hi;
}

}  // namespace

PceReport pce_estimate(const SymmetricOperator& op, double eps, double delta, std::uint64_t seed,
                       Index cap) {
  if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorKind::domain, "eps must lie in (0, 1)");
  if (!(delta > 0.0)) throw Error(ErrorKind::domain, "delta must be positive");
  const Index N = op.dim;
  PceReport report;
  report.eps = eps;
  report.delta = delta;
  if (N == 0) {
    report.converged = true;
    return report;
  }
  if (cap <= 0) cap = std::min<Index>(2 * N, 200);
  cap = std::min(cap, N);

  const double delta_sq =
      N == 1 ? 1.0 : boost::math::ibeta_inv(0.5, 0.5 * static_cast<double>(N - 1), eps);
  const double log_target = -0.5 * std::log(delta_sq);

  Rng rng = make_rng(seed, {2});
  Matrix V(N, cap);
  V.col(0) = unit_vector(rng, N);
  std::vector<double> a, b;
  double alpha1 = 0.0, alpha2 = std::numeric_limits<double>::infinity();

  for (Index j = 0; j < cap; ++j) {
    Vector w = op.apply(V.col(j));
    a.push_back(V.col(j).dot(w));
    w -= a.back() * V.col(j);
    if (j > 0) w -= b.back() * V.col(j - 1);
    for (int pass = 0; pass < 2; ++pass)
      w -= V.leftCols(j + 1) * (V.leftCols(j + 1).transpose() * w);
    b.push_back(w.norm());

    const Index size = j + 1;
    Vector diag = Eigen::Map<const Vector>(a.data(), size);
    Vector sub = Eigen::Map<const Vector>(b.data(), size).head(size - 1);
    double theta = diag(0);
    if (size > 1) {
      Eigen::SelfAdjointEigenSolver<Matrix> eig;
      eig.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
      theta = eig.eigenvalues().maxCoeff();
    }
    alpha1 = std::max(alpha1, theta);
    report.iterations = size;

    const double tnorm = std::max(std::abs(theta), std::abs(diag.minCoeff()));
    const bool breakdown = b.back() <= 64.0 * std::numeric_limits<double>::epsilon() * tnorm;
    if (breakdown || size == N) {
      alpha2 = alpha1;
      break;
    }
    alpha2 = std::max(alpha1, upper_root(a, b, theta, log_target));
    if (alpha2 <= (1.0 + delta) * alpha1) break;
    if (j + 1 < cap) V.col(j + 1) = w / b.back();
  }

  report.alpha1 = alpha1;
  report.alpha2 = alpha2;
  report.converged = alpha2 <= (1.0 + delta) * alpha1;
  report.kappa_hat = std::sqrt(0.5 * (alpha1 + alpha2));
  return report;
}

PceReport estimate_condition_pce(const LseProblem& problem, const LseSolution& solution,
                                 const ConditionWeights& weights, double eps, double delta,
                                 std::uint64_t seed, PceMode mode) {
  const GsvdConditionOperator op(problem, solution, weights);
  if (mode == PceMode::materialized) {
    const Matrix C = op.materialize();
    return pce_estimate({C.rows(), [&C](const Vector& v) -> Vector { return C * v; }}, eps,
                        delta, seed);
  }
  return pce_estimate({op.dim(), [&op](const Vector& v) { return op.apply(v); }}, eps, delta,
                      seed);
}

PceReport estimate_condition_pce(const LseProblem& problem, const ConditionWeights& weights,
                                 double eps, double delta, std::uint64_t seed, PceMode mode) {
  weights.validate(problem.n());
  return estimate_condition_pce(problem, solve_lse(problem), weights, eps, delta, seed, mode);
}

PceReport estimate_structured_pce(const LseProblem& problem, const ConditionWeights& weights,
                                  const StructureSpec& spec_A, const StructureSpec& spec_B,
                                  double eps, double delta, std::uint64_t seed) {
  weights.validate(problem.n());
  const StructureMatrix structure_A(spec_A);
  const StructureMatrix structure_B(spec_B);
  extract_params(structure_A, problem.A());
  extract_params(structure_B, problem.B());
  const LseSolution solution = solve_lse(problem);
  const StructuredDerivative D(problem, solution, weights, structure_A, structure_B);
  return pce_estimate(
      {D.rows(), [&D](const Vector& v) { return D.apply(D.apply_transpose(v)); }}, eps, delta,
      seed);
}

}  // namespace lsecond
