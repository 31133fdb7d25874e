// Copyright The lse-cond Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/types.hpp"

#include <string>

namespace lsecond {

namespace {

std::string dims(Index r, Index c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

}  // namespace

LseProblem::LseProblem(Matrix A, Matrix B, Vector b, Vector d)
    : A_(std::move(A)), B_(std::move(B)), b_(std::move(b)), d_(std::move(d)) {
  if (B_.size() == 0 && B_.cols() != A_.cols()) B_.resize(0, A_.cols());
  if (A_.cols() != B_.cols())
    throw Error(ErrorKind::shape, "A is " + dims(A_.rows(), A_.cols()) +
                                      " but B is " + dims(B_.rows(), B_.cols()));
  if (b_.size() != A_.rows())
    throw Error(ErrorKind::shape, "b has length " + std::to_string(b_.size()) +
                                      ", expected " + std::to_string(A_.rows()));
  if (d_.size() != B_.rows())
    throw Error(ErrorKind::shape, "d has length " + std::to_string(d_.size()) +
                                      ", expected " + std::to_string(B_.rows()));
  const Index m = A_.rows(), n = A_.cols(), s = B_.rows();
  if (!(m + s >= n && n >= s))
    throw Error(ErrorKind::shape, "dimensions must satisfy m + s >= n >= s (m=" +
                                      std::to_string(m) + ", n=" + std::to_string(n) +
                                      ", s=" + std::to_string(s) + ")");
}

LseProblem LseProblem::least_squares(Matrix A, Vector b) {
  const Index n = A.cols();
  return LseProblem(std::move(A), Matrix(0, n), std::move(b), Vector(0));
}

bool ConditionWeights::identity_L(Index n) const {
  if (!L) return true;
  return L->rows() == n && L->cols() == n && L->isIdentity(0.0);
}

Matrix ConditionWeights::projector(Index n) const {
  if (L) return *L;
  return Matrix::Identity(n, n);
}

void ConditionWeights::validate(Index n) const {
  if (!(alpha_A > 0 && alpha_B > 0 && alpha_b > 0 && alpha_d > 0))
    throw Error(ErrorKind::domain, "all norm weights must be strictly positive");
  if (L) {
    if (L->rows() != n)
      throw Error(ErrorKind::shape, "L has " + std::to_string(L->rows()) +
                                        " rows, expected n = " + std::to_string(n));
    if (L->cols() > n)
      throw Error(ErrorKind::shape, "L has more columns than rows");
  }
}

}  // namespace lsecond
