// Copyright The lse-cond Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <optional>

#include "core/error.hpp"

namespace lsecond {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// min ||b - A x||_2 subject to B x = d, with A m×n and B s×n.
// s = 0 is represented by a 0×n B and an empty d.
class LseProblem {
 public:
  LseProblem() = default;
  LseProblem(Matrix A, Matrix B, Vector b, Vector d);

  // Unconstrained least squares: B is 0×n.
  static LseProblem least_squares(Matrix A, Vector b);

  const Matrix& A() const { return A_; }
  const Matrix& B() const { return B_; }
  const Vector& b() const { return b_; }
  const Vector& d() const { return d_; }

  Index m() const { return A_.rows(); }
  Index n() const { return A_.cols(); }
  Index s() const { return B_.rows(); }

 private:
  Matrix A_;
  Matrix B_;
  Vector b_;
  Vector d_;
};

// Parameters of the weighted Frobenius norm on the data and the projector L
// selecting L^T x. An absent L means L = I_n.
struct ConditionWeights {
  double alpha_A = 1.0;
  double alpha_B = 1.0;
  double alpha_b = 1.0;
  double alpha_d = 1.0;
  std::optional<Matrix> L;

  bool unit_weights() const {
    return alpha_A == 1.0 && alpha_B == 1.0 && alpha_b == 1.0 && alpha_d == 1.0;
  }
  bool identity_L(Index n) const;

  // Number of columns k of L for a solution of dimension n.
  Index k(Index n) const { return L ? L->cols() : n; }

  // L materialized as an n×k matrix.
  Matrix projector(Index n) const;

  // Throws Error(domain) on non-positive weights, Error(shape) on a bad L.
  void validate(Index n) const;

  ConditionWeights scaled(double c) const {
    ConditionWeights w = *this;
    w.alpha_A *= c;
    w.alpha_B *= c;
    w.alpha_b *= c;
    w.alpha_d *= c;
    return w;
  }
};

}  // namespace lsecond
