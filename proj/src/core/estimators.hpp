// Copyright The lse-cond Authors
// SPDX-License-Identifier: Apache-2.0

// Statistical estimates of the partial condition number:
//   PCE   Lanczos on the symmetric operator C with a probabilistic upper
//         bound, returning an interval [alpha1, alpha2] around ||C||_2;
//   SSCE  small-sample statistical condition estimation from q random
//         orthonormal directions.

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "core/structured.hpp"

namespace lsecond {

enum class WallisMode { exact, approx };

// omega_q: exact product formula or sqrt(2 / (pi (q - 1/2))).
double wallis(Index q, WallisMode mode);

// C = L^T K L applied implicitly from the GSVD factors, where K is the n×n
// matrix of the closed formula with L = I. Each product costs O(nk).
class GsvdConditionOperator {
 public:
  GsvdConditionOperator(const LseProblem& problem, const LseSolution& solution,
                        const ConditionWeights& weights);

  Index dim() const { return W_.cols(); }
  Vector apply(const Vector& v) const;
  Matrix materialize() const;

 private:
  Matrix W_;     // Y1^T L, (n-s)×k
  Matrix gram_;  // Y1^T Y1
  Matrix Q2_;    // Z2^T L, s×k
  Vector Lg_, Lh_;
  double c1_ = 0.0, c2_ = 0.0, c3_ = 0.0, cross_ = 0.0;
};

// z^T C z for unit z, C taken with L = I (any L in `weights` is ignored).
double kappa_dir_sq(const LseProblem& problem, const ConditionWeights& weights, const Vector& z);
double kappa_dir_sq(const GsvdConditionOperator& op, const Vector& z);

struct SsceReport {
  Index q = 0;
  std::vector<double> kappa_i_sq;
  double kappa_hat = 0.0;
  double wallis_q = 0.0;
  double wallis_n = 0.0;
};

inline constexpr Index kDefaultSsceSamples = 2;

SsceReport ssce_estimate(const LseProblem& problem, const ConditionWeights& weights, Index q,
                         std::uint64_t seed, WallisMode mode = WallisMode::approx);
SsceReport ssce_estimate(const LseProblem& problem, const LseSolution& solution,
                         const ConditionWeights& weights, Index q, std::uint64_t seed,
                         WallisMode mode = WallisMode::approx);

struct SymmetricOperator {
  Index dim = 0;
  std::function<Vector(const Vector&)> apply;
};

struct PceReport {
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double kappa_hat = 0.0;
  double eps = 0.0;
  double delta = 0.0;
  Index iterations = 0;
  bool converged = false;
};

inline constexpr double kDefaultPceEps = 1e-3;
inline constexpr double kDefaultPceDelta = 1e-2;

// Lanczos with full reorthogonalization from a random unit start vector.
// alpha1 is the largest Ritz value. With v0 = sum_i gamma_i u_i and p_j the
// Lanczos polynomials, ||v_j|| = 1 forces |p_j(lambda_max)| <= 1/|gamma_1|,
// and gamma_1^2 ~ Beta(1/2, (N-1)/2) for uniform v0. alpha2 is the largest
// root of p_j(t) = 1/delta' with P(gamma_1^2 < delta'^2) = eps, so
// ||C||_2 <= alpha2 for every j simultaneously with probability >= 1 - eps.
// Iterates until alpha2 <= (1 + delta) alpha1 or `cap` steps
// (default min(2N, 200), never above N).
PceReport pce_estimate(const SymmetricOperator& op, double eps, double delta, std::uint64_t seed,
                       Index cap = 0);

enum class PceMode { matvec, materialized };

PceReport estimate_condition_pce(const LseProblem& problem, const ConditionWeights& weights,
                                 double eps, double delta, std::uint64_t seed,
                                 PceMode mode = PceMode::matvec);
PceReport estimate_condition_pce(const LseProblem& problem, const LseSolution& solution,
                                 const ConditionWeights& weights, double eps, double delta,
                                 std::uint64_t seed, PceMode mode = PceMode::matvec);

// The same estimate for the structured operator Ms Ms^T.
PceReport estimate_structured_pce(const LseProblem& problem, const ConditionWeights& weights,
                                  const StructureSpec& spec_A, const StructureSpec& spec_B,
                                  double eps, double delta, std::uint64_t seed);

}  // namespace lsecond
