// Copyright The lse-cond Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "core/harness.hpp"
#include "core/structured.hpp"
#include "support/oracles.hpp"
#include "support/random_problems.hpp"

using namespace lsecond;
using namespace lsecond::testing;

namespace {

double relerr(double got, double want) { return std::abs(got - want) / std::abs(want); }

Matrix scaled_phi(const StructureMatrix& S) {
  return S.dense_phi() * S.d().cwiseInverse().asDiagonal();
}

std::vector<Matrix> hankel_directions(Index rows, Index cols) {
  std::vector<Matrix> out;
  for (Index sum = 0; sum <= rows + cols - 2; ++sum) {
    Matrix E = Matrix::Zero(rows, cols);
    for (Index i = 0; i < rows; ++i)
      if (sum - i >= 0 && sum - i < cols) E(i, sum - i) = 1.0;
    out.push_back(E / E.norm());
  }
  return out;
}

std::vector<Matrix> symmetric_directions(Index n) {
  std::vector<Matrix> out;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j <= i; ++j) {
      Matrix E = Matrix::Zero(n, n);
      E(i, j) = E(j, i) = 1.0;
      out.push_back(E / E.norm());
    }
  return out;
}

std::vector<Matrix> full_directions(Index rows, Index cols) {
  std::vector<Matrix> out;
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) {
      Matrix E = Matrix::Zero(rows, cols);
      E(i, j) = 1.0;
      out.push_back(E);
    }
  return out;
}

Matrix toeplitz(const Vector& first_col, const Vector& first_row) {
  Matrix T(first_col.size(), first_row.size());
  for (Index i = 0; i < T.rows(); ++i)
    for (Index j = 0; j < T.cols(); ++j) T(i, j) = j >= i ? first_row(j - i) : first_col(i - j);
  return T;
}

}  // namespace

TEST_CASE("structure kinds round-trip through their names") {
  for (const auto kind : {StructureKind::toeplitz, StructureKind::hankel, StructureKind::symmetric,
                          StructureKind::full})
    CHECK(structure_kind_from_string(to_string(kind)) == kind);
  CHECK_FALSE(structure_kind_from_string("circulant").has_value());
}

TEST_CASE("parameter counts") {
  CHECK(StructureSpec{StructureKind::toeplitz, 4, 3}.params() == 6);
  CHECK(StructureSpec{StructureKind::hankel, 4, 3}.params() == 6);
  CHECK(StructureSpec{StructureKind::symmetric, 5, 5}.params() == 15);
  CHECK(StructureSpec{StructureKind::full, 4, 3}.params() == 12);
  CHECK_THROWS_AS(StructureMatrix(StructureSpec{StructureKind::symmetric, 3, 4}), Error);
}

TEST_CASE("2x2 Toeplitz basis") {
  const StructureMatrix S(StructureSpec{StructureKind::toeplitz, 2, 2});
  CHECK(S.params() == 3);
  CHECK(S.dense_phi().rows() == 4);
  CHECK(S.dense_phi().cols() == 3);
  CHECK(S.d()(0) == 1.0);
  CHECK(S.d()(1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(S.d()(2) == 1.0);
}

TEST_CASE("full basis is the identity") {
  const StructureMatrix S(StructureSpec{StructureKind::full, 3, 4});
  CHECK(S.dense_phi() == Matrix::Identity(12, 12));
  CHECK(S.d() == Vector::Ones(12));
}

TEST_CASE("Toeplitz entries partition the matrix") {
  for (Index n = 1; n <= 7; ++n) {
    const StructureMatrix S(StructureSpec{StructureKind::toeplitz, n, n});
    CHECK(S.params() == 2 * n - 1);
    CHECK(S.d().squaredNorm() == doctest::Approx(static_cast<double>(n * n)));
  }
}

TEST_CASE("scaled bases have orthonormal columns") {
  for (const StructureSpec& spec :
       {StructureSpec{StructureKind::toeplitz, 6, 4}, StructureSpec{StructureKind::hankel, 3, 7},
        StructureSpec{StructureKind::symmetric, 6, 6}, StructureSpec{StructureKind::full, 5, 2}}) {
    const StructureMatrix S(spec);
    const Matrix Q = scaled_phi(S);
    const Index k = S.params();
    CHECK((Q.transpose() * Q - Matrix::Identity(k, k)).norm() <= 1e-13 * k);
  }
}

TEST_CASE("extract_params recovers Toeplitz generators") {
  Vector c(3), r(4);
  c << 1.0, 2.0, 3.0;
  r << 1.0, -1.0, -2.0, -3.0;
  const Matrix T = toeplitz(c, r);
  const StructureMatrix S(StructureSpec{StructureKind::toeplitz, 3, 4});
  Vector want(6);
  want << 3.0, 2.0, 1.0, -1.0, -2.0, -3.0;
  CHECK(extract_params(S, T) == want);
  CHECK(embed(S, want) == T);

  Matrix broken = T;
  broken(0, 0) += 1.0;
  try {
    extract_params(S, broken);
    FAIL("expected structure_violation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::structure_violation);
  }
  CHECK_THROWS_AS(extract_params(S, Matrix::Zero(4, 4)), Error);
}

TEST_CASE("embed and extract are inverse on structure members") {
  std::mt19937_64 rng(5);
  for (const StructureSpec& spec :
       {StructureSpec{StructureKind::toeplitz, 5, 5}, StructureSpec{StructureKind::hankel, 4, 6},
        StructureSpec{StructureKind::symmetric, 5, 5}}) {
    const StructureMatrix S(spec);
    const Vector p = gaussian(rng, S.params(), 1);
    const Matrix A = embed(S, p);
    CHECK(embed(S, extract_params(S, A)) == A);
    CHECK((extract_params(S, A) - p).norm() <= 1e-15 * p.norm());
  }
}

TEST_CASE("full structures give the unstructured value") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const LseProblem p = random_problem(seed);
    const StructureSpec fa{StructureKind::full, p.m(), p.n()}, fb{StructureKind::full, p.s(), p.n()};
    const double kappa = cond_exact_gsvd(p, {}).kappa;
    CHECK(relerr(cond_structured(p, {}, fa, fb).kappa, kappa) <= 1e-12);
  }
}

TEST_CASE("structured values match finite differences") {
  const ConditionWeights w;
  SUBCASE("Toeplitz pair") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const GeneratedProblem g = gen_toeplitz_pair(6, 1.0, seed);
      const StructureSpec t{StructureKind::toeplitz, 6, 6};
      const double want = fd_structured_condition(g.problem, w, toeplitz_directions(6, 6),
                                                  toeplitz_directions(6, 6));
      CHECK(relerr(cond_structured(g.problem, w, t, t).kappa, want) <= 1e-6);
    }
  }
  SUBCASE("Hankel A, full B") {
    std::mt19937_64 rng(3);
    const StructureMatrix H(StructureSpec{StructureKind::hankel, 7, 5});
    const LseProblem p(embed(H, gaussian(rng, H.params(), 1)), gaussian(rng, 2, 5),
                       gaussian(rng, 7, 1), gaussian(rng, 2, 1));
    const double want =
        fd_structured_condition(p, w, hankel_directions(7, 5), full_directions(2, 5));
    const double got = cond_structured(p, w, H.spec(), StructureSpec{StructureKind::full, 2, 5}).kappa;
    CHECK(relerr(got, want) <= 1e-6);
  }
  SUBCASE("symmetric A, Toeplitz B, weighted, single-column L") {
    std::mt19937_64 rng(4);
    const StructureMatrix Sy(StructureSpec{StructureKind::symmetric, 5, 5});
    const StructureMatrix T(StructureSpec{StructureKind::toeplitz, 2, 5});
    const LseProblem p(embed(Sy, gaussian(rng, Sy.params(), 1)), embed(T, gaussian(rng, T.params(), 1)),
                       gaussian(rng, 5, 1), gaussian(rng, 2, 1));
    ConditionWeights wl;
    wl.alpha_A = 2.0;
    wl.alpha_d = 0.5;
    wl.L = gaussian(rng, 5, 1);
    const double want =
        fd_structured_condition(p, wl, symmetric_directions(5), toeplitz_directions(2, 5));
    CHECK(relerr(cond_structured(p, wl, Sy.spec(), T.spec()).kappa, want) <= 1e-6);
  }
}

TEST_CASE("structured never exceeds unstructured") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const GeneratedProblem g = gen_toeplitz_pair(10, 1.0, seed);
    const StructureSpec t{StructureKind::toeplitz, 10, 10};
    const double ks = cond_structured(g.problem, {}, t, t).kappa;
    CHECK(ks <= cond_exact_gsvd(g.problem, {}).kappa * (1 + 1e-12));
  }
}

TEST_CASE("matrix-free derivative is consistent with its materialization") {
  const GeneratedProblem g = gen_toeplitz_pair(8, 1.0, 2);
  const LseSolution sol = solve_lse(g.problem);
  const StructureMatrix T(StructureSpec{StructureKind::toeplitz, 8, 8});
  const StructuredDerivative D(g.problem, sol, {}, T, T);
  const Matrix M = D.materialize();
  CHECK(M.rows() == D.rows());
  CHECK(M.cols() == D.cols());
  std::mt19937_64 rng(1);
  const Vector w = gaussian(rng, D.cols(), 1);
  const Vector v = gaussian(rng, D.rows(), 1);
  CHECK((D.apply(w) - M * w).norm() <= 1e-12 * (M * w).norm());
  CHECK((D.apply_transpose(v) - M.transpose() * v).norm() <= 1e-12 * (M.transpose() * v).norm());
  CHECK(std::abs(v.dot(D.apply(w)) - D.apply_transpose(v).dot(w)) <= 1e-12 * M.norm() * w.norm() * v.norm());
}

TEST_CASE("structured least squares") {
  std::mt19937_64 rng(12);
  const StructureMatrix T(StructureSpec{StructureKind::toeplitz, 8, 5});
  const Matrix A = embed(T, gaussian(rng, T.params(), 1));
  const Vector b = gaussian(rng, 8, 1);

  const StructuredLlsReport full = cond_structured_lls(A, b, {}, StructureSpec{StructureKind::full, 8, 5});
  CHECK(relerr(full.kappa_s, full.kappa_bound) <= 1e-12);

  const StructuredLlsReport r = cond_structured_lls(A, b, {}, T.spec());
  CHECK(std::isfinite(r.kappa_s));
  CHECK(r.kappa_s <= r.kappa_bound * (1 + 1e-12));
  CHECK(relerr(r.kappa_bound, cond_lls_closed(A, b, {}).kappa) <= 1e-12);

  const double want = fd_structured_condition(LseProblem::least_squares(A, b), {},
                                              toeplitz_directions(8, 5), {});
  CHECK(relerr(r.kappa_s, want) <= 1e-6);
}

TEST_CASE("specs must match the problem") {
  const LseProblem p = identity_problem();
  try {
    cond_structured(p, {}, StructureSpec{StructureKind::toeplitz, 3, 3},
                    StructureSpec{StructureKind::full, 1, 2});
    FAIL("expected a shape error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::shape);
  }
  try {
    cond_structured(p, {}, StructureSpec{StructureKind::toeplitz, 2, 2},
                    StructureSpec{StructureKind::toeplitz, 1, 2});
  } catch (const Error&) {
    FAIL("identity fixture is Toeplitz");
  }
  const LseProblem q((Matrix(2, 2) << 1, 2, 3, 4).finished(), (Matrix(1, 2) << 1, 0).finished(),
                     Vector::Ones(2), Vector::Ones(1));
  try {
    cond_structured(q, {}, StructureSpec{StructureKind::toeplitz, 2, 2},
                    StructureSpec{StructureKind::full, 1, 2});
    FAIL("expected structure_violation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::structure_violation);
  }
}
