// Copyright The lse-cond Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/structured.hpp"

#include <chrono>
#include <cmath>

#include "core/dense.hpp"

namespace lsecond {

std::string_view to_string(StructureKind kind) {
  switch (kind) {
    case StructureKind::toeplitz: return "toeplitz";
    case StructureKind::hankel: return "hankel";
    case StructureKind::symmetric: return "symmetric";
    case StructureKind::full: return "full";
  }
  return "unknown";
}

std::optional<StructureKind> structure_kind_from_string(std::string_view name) {
  if (name == "toeplitz") return StructureKind::toeplitz;
  if (name == "hankel") return StructureKind::hankel;
  if (name == "symmetric") return StructureKind::symmetric;
  if (name == "full") return StructureKind::full;
  return std::nullopt;
}

Index StructureSpec::params() const {
  if (rows == 0 || cols == 0) return 0;
  switch (kind) {
    case StructureKind::toeplitz:
    case StructureKind::hankel: return rows + cols - 1;
    case StructureKind::symmetric: return cols * (cols + 1) / 2;
    case StructureKind::full: return rows * cols;
  }
  return 0;
}

StructureMatrix::StructureMatrix(const StructureSpec& spec) : spec_(spec) {
  if (spec.rows < 0 || spec.cols < 0) throw Error(ErrorKind::shape, "negative structure size");
  if (spec.kind == StructureKind::symmetric && spec.rows != spec.cols)
    throw Error(ErrorKind::shape, "symmetric structure needs a square matrix");

  const Index m = spec.rows, n = spec.cols;
  support_.assign(static_cast<size_t>(spec.params()), {});

  // Parameter index of each lower-triangular entry for the symmetric kind.
  const auto sym_param = [n](Index i, Index c) {
    const Index lo = std::min(i, c), hi = std::max(i, c);
    return lo * n - lo * (lo - 1) / 2 + (hi - lo);
  };

  for (Index c = 0; c < n; ++c) {
    for (Index i = 0; i < m; ++i) {
      Index j = 0;
      switch (spec.kind) {
        case StructureKind::toeplitz: j = c - i + (m - 1); break;
        case StructureKind::hankel: j = i + c; break;
        case StructureKind::symmetric: j = sym_param(i, c); break;
        case StructureKind::full: j = i + c * m; break;
      }
      support_[static_cast<size_t>(j)].push_back(i + c * m);
    }
  }

  d_.resize(params());
  for (Index j = 0; j < params(); ++j)
    d_(j) = std::sqrt(static_cast<double>(support_[static_cast<size_t>(j)].size()));
}

Matrix StructureMatrix::dense_phi() const {
  Matrix phi = Matrix::Zero(spec_.rows * spec_.cols, params());
  for (Index j = 0; j < params(); ++j)
    for (const Index idx : support(j)) phi(idx, j) = 1.0;
  return phi;
}

StructureMatrix build_structure(const StructureSpec& spec) { return StructureMatrix(spec); }

Vector extract_params(const StructureMatrix& structure, const Matrix& A, double tol) {
  const StructureSpec& spec = structure.spec();
  if (A.rows() != spec.rows || A.cols() != spec.cols)
    throw Error(ErrorKind::shape, "matrix shape does not match the structure");
  const Eigen::Map<const Vector> vec(A.data(), A.size());
  Vector params(structure.params());
  for (Index j = 0; j < structure.params(); ++j) {
    const auto& support = structure.support(j);
    const double first = vec(support.front());
    bool constant = true;
    double sum = 0.0;
    for (const Index idx : support) {
      sum += vec(idx);
      constant = constant && vec(idx) == first;
    }
    params(j) = constant ? first : sum / static_cast<double>(support.size());
  }
  double residual = 0.0;
  for (Index j = 0; j < structure.params(); ++j)
    for (const Index idx : structure.support(j)) {
      const double e = vec(idx) - params(j);
      residual += e * e;
    }
  if (std::sqrt(residual) > tol * A.norm())
    throw Error(ErrorKind::structure_violation,
                "matrix is not " + std::string(to_string(spec.kind)) + " structured");
  return params;
}

Matrix embed(const StructureMatrix& structure, const Vector& params) {
  if (params.size() != structure.params())
    throw Error(ErrorKind::shape, "parameter vector has the wrong length");
  Matrix A(structure.spec().rows, structure.spec().cols);
  double* data = A.data();
  for (Index j = 0; j < structure.params(); ++j)
    for (const Index idx : structure.support(j)) data[idx] = params(j);
  return A;
}

StructuredDerivative::StructuredDerivative(const LseProblem& problem, const LseSolution& solution,
                                           const ConditionWeights& weights,
                                           const StructureMatrix& structure_A,
                                           const StructureMatrix& structure_B)
    : m_(problem.m()),
      n_(problem.n()),
      s_(problem.s()),
      k_(weights.k(problem.n())),
      kA_(structure_A.params()),
      kB_(structure_B.params()),
      weights_(weights),
      structure_A_(structure_A),
      structure_B_(structure_B),
      x_(solution.x),
      r_(solution.r) {
  weights.validate(n_);
  if (structure_A.spec().rows != m_ || structure_A.spec().cols != n_ ||
      structure_B.spec().rows != s_ || structure_B.spec().cols != n_)
    throw Error(ErrorKind::shape, "structure sizes do not match A and B");

  const GsvdFactors& f = solution.factors;
  const Matrix L = weights.projector(n_);
  const Matrix LY1 = L.transpose() * f.Y1();
  LG_ = LY1 * f.Y1().transpose();
  LAp_ = LY1 * f.U.leftCols(n_ - s_).transpose();
  LBa_ = s_ == 0 ? Matrix(k_, 0) : Matrix((L.transpose() * f.Z2()) * f.V.transpose());

  // y = (A B_A^+)^T r = V [S_A S_B^{-1}; 0] U2^T r.
  y_ = Vector::Zero(s_);
  if (f.t > 0) {
    const Vector ur = f.U.middleCols(n_ - s_, f.t).transpose() * r_;
    y_ = f.V.leftCols(f.t) * f.alpha.cwiseQuotient(f.beta).cwiseProduct(ur);
  }
}

Vector StructuredDerivative::apply(const Vector& w) const {
  Vector p = Vector::Zero(n_), qa = Vector::Zero(m_), qb = Vector::Zero(s_);
  for (Index j = 0; j < kA_; ++j) {
    const double coef = w(j) / (weights_.alpha_A * structure_A_.d()(j));
    for (const Index idx : structure_A_.support(j)) {
      const Index i = idx % m_, c = idx / m_;
      p(c) += coef * r_(i);
      qa(i) -= coef * x_(c);
    }
  }
  for (Index j = 0; j < kB_; ++j) {
    const double coef = -w(kA_ + j) / (weights_.alpha_B * structure_B_.d()(j));
    for (const Index idx : structure_B_.support(j)) {
      const Index i = idx % s_, c = idx / s_;
      p(c) += coef * y_(i);
      qb(i) += coef * x_(c);
    }
  }
  qa += w.segment(kA_ + kB_, m_) / weights_.alpha_b;
  qb += w.segment(kA_ + kB_ + m_, s_) / weights_.alpha_d;
  return LG_ * p + LAp_ * qa + LBa_ * qb;
}

Vector StructuredDerivative::apply_transpose(const Vector& v) const {
  const Vector a = LG_.transpose() * v;
  const Vector e = LAp_.transpose() * v;
  const Vector f = LBa_.transpose() * v;
  Vector out(cols());
  for (Index j = 0; j < kA_; ++j) {
    double sum = 0.0;
    for (const Index idx : structure_A_.support(j)) {
      const Index i = idx % m_, c = idx / m_;
      sum += r_(i) * a(c) - x_(c) * e(i);
    }
    out(j) = sum / (weights_.alpha_A * structure_A_.d()(j));
  }
  for (Index j = 0; j < kB_; ++j) {
    double sum = 0.0;
    for (const Index idx : structure_B_.support(j)) {
      const Index i = idx % s_, c = idx / s_;
      sum += y_(i) * a(c) + x_(c) * f(i);
    }
    out(kA_ + j) = -sum / (weights_.alpha_B * structure_B_.d()(j));
  }
  out.segment(kA_ + kB_, m_) = e / weights_.alpha_b;
  out.segment(kA_ + kB_ + m_, s_) = f / weights_.alpha_d;
  return out;
}

Matrix StructuredDerivative::materialize() const {
  Matrix Ms = Matrix::Zero(k_, cols());
  for (Index j = 0; j < kA_; ++j) {
    auto col = Ms.col(j);
    for (const Index idx : structure_A_.support(j)) {
      const Index i = idx % m_, c = idx / m_;
      col += r_(i) * LG_.col(c) - x_(c) * LAp_.col(i);
    }
    col /= weights_.alpha_A * structure_A_.d()(j);
  }
  for (Index j = 0; j < kB_; ++j) {
    auto col = Ms.col(kA_ + j);
    for (const Index idx : structure_B_.support(j)) {
      const Index i = idx % s_, c = idx / s_;
      col += y_(i) * LG_.col(c) + x_(c) * LBa_.col(i);
    }
    col /= -weights_.alpha_B * structure_B_.d()(j);
  }
  Ms.middleCols(kA_ + kB_, m_) = LAp_ / weights_.alpha_b;
  Ms.rightCols(s_) = LBa_ / weights_.alpha_d;
  return Ms;
}

ConditionReport cond_structured(const LseProblem& problem, const ConditionWeights& weights,
                                const StructureSpec& spec_A, const StructureSpec& spec_B) {
  const auto start = std::chrono::steady_clock::now();
  weights.validate(problem.n());
  const StructureMatrix structure_A(spec_A);
  const StructureMatrix structure_B(spec_B);
  if (spec_A.rows != problem.m() || spec_A.cols != problem.n() || spec_B.rows != problem.s() ||
      spec_B.cols != problem.n())
    throw Error(ErrorKind::shape, "structure sizes do not match A and B");
  extract_params(structure_A, problem.A());
  extract_params(structure_B, problem.B());

  const LseSolution solution = solve_lse(problem);
  const StructuredDerivative derivative(problem, solution, weights, structure_A, structure_B);

  ConditionReport report;
  report.method = ConditionMethod::structured;
  report.kappa = derivative.rows() == 0 ? 0.0 : dense::spectral_norm(derivative.materialize());
  report.c_norm = report.kappa * report.kappa;
  report.elapsed = std::chrono::steady_clock::now() - start;
  return report;
}

StructuredLlsReport cond_structured_lls(const Matrix& A, const Vector& b,
                                        const ConditionWeights& weights,
                                        const StructureSpec& spec_A) {
  const Index n = A.cols();
  weights.validate(n);
  const Index rank = dense::numerical_rank(A);
  if (rank != n) throw RankDeficiencyError(0, rank, 0, n, "A must have full column rank");

  const LseProblem problem = LseProblem::least_squares(A, b);
  const StructureMatrix structure_A(spec_A);
  extract_params(structure_A, A);
  const StructureMatrix empty_B(StructureSpec{StructureKind::full, 0, n});
  const StructureMatrix full_A(StructureSpec{StructureKind::full, A.rows(), n});

  const LseSolution solution = solve_lse(problem);
  StructuredLlsReport report;
  if (weights.k(n) == 0) return report;
  report.kappa_s = dense::spectral_norm(
      StructuredDerivative(problem, solution, weights, structure_A, empty_B).materialize());
  report.kappa_bound = dense::spectral_norm(
      StructuredDerivative(problem, solution, weights, full_A, empty_B).materialize());
  return report;
}

}  // namespace lsecond
