// Copyright The lse-cond Authors
// SPDX-License-Identifier: Apache-2.0

// Linear matrix structures vec(A) = Phi s and the structured partial
// condition number ||M blockdiag(Phi_A D_A^{-1}, Phi_B D_B^{-1}, I_m, I_s)||_2.

#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "core/condition.hpp"

namespace lsecond {

enum class StructureKind { toeplitz, hankel, symmetric, full };

std::string_view to_string(StructureKind kind);
std::optional<StructureKind> structure_kind_from_string(std::string_view name);

struct StructureSpec {
  StructureKind kind = StructureKind::full;
  Index rows = 0;
  Index cols = 0;

  // Number of independent parameters k.
  Index params() const;
};

// Phi stored column-sparsely: support[j] lists the vec(A) indices (column-major)
// bound to parameter j. Every Phi entry is 0 or 1 and supports are disjoint,
// so the column norms are d_j = sqrt(|support[j]|).
//
// Parameter order: toeplitz by diagonal offset (col - row) from bottom-left to
// top-right, hankel by anti-diagonal from top-left, symmetric by the lower
// triangle in column-major order, full by vec index.
class StructureMatrix {
 public:
  explicit StructureMatrix(const StructureSpec& spec);

  const StructureSpec& spec() const { return spec_; }
  Index params() const { return static_cast<Index>(support_.size()); }
  const std::vector<Index>& support(Index j) const { return support_[static_cast<size_t>(j)]; }
  const Vector& d() const { return d_; }

  Matrix dense_phi() const;

 private:
  StructureSpec spec_;
  std::vector<std::vector<Index>> support_;
  Vector d_;
};

StructureMatrix build_structure(const StructureSpec& spec);

// s with vec(A) = Phi s. Throws Error(structure_violation) when A is not in the
// structure subspace (relative residual above tol) and Error(shape) on a size
// mismatch.
Vector extract_params(const StructureMatrix& structure, const Matrix& A, double tol = 1e-12);

// The matrix with vec(A) = Phi s.
Matrix embed(const StructureMatrix& structure, const Vector& params);

// The derivative matrix M of L^T x restricted to structured perturbations,
//   Ms = M blockdiag(Phi_A D_A^{-1}, Phi_B D_B^{-1}, I_m, I_s),
// applied without forming M. Built from the GSVD factors.
class StructuredDerivative {
 public:
  StructuredDerivative(const LseProblem& problem, const LseSolution& solution,
                       const ConditionWeights& weights, const StructureMatrix& structure_A,
                       const StructureMatrix& structure_B);

  Index rows() const { return k_; }
  Index cols() const { return kA_ + kB_ + m_ + s_; }

  Vector apply(const Vector& w) const;            // Ms w
  Vector apply_transpose(const Vector& v) const;  // Ms^T v
  Matrix materialize() const;

 private:
  Index m_, n_, s_, k_, kA_, kB_;
  ConditionWeights weights_;
  StructureMatrix structure_A_, structure_B_;
  Matrix LG_;   // L^T ((AP)^T AP)^+, k×n
  Matrix LAp_;  // L^T (AP)^+, k×m
  Matrix LBa_;  // L^T B_A^+, k×s
  Vector x_, r_, y_;
};

// Structure specs must match the shapes of A and B.
ConditionReport cond_structured(const LseProblem& problem, const ConditionWeights& weights,
                                const StructureSpec& spec_A, const StructureSpec& spec_B);

struct StructuredLlsReport {
  double kappa_s = 0.0;
  double kappa_bound = 0.0;
};

// B = 0 case: the structured value and the unstructured value it is bounded by.
StructuredLlsReport cond_structured_lls(const Matrix& A, const Vector& b,
                                        const ConditionWeights& weights,
                                        const StructureSpec& spec_A);

}  // namespace lsecond
