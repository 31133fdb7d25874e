// Copyright The lse-cond Authors
// SPDX-License-Identifier: Apache-2.0

// Seeded problem generators for property tests.

#pragma once

#include <algorithm>
#include <cstdint>
#include <random>

#include "core/types.hpp"

namespace lsecond::testing {

struct Dims {
  Index m, n, s;
};

// m + s >= n >= s, n >= 1, s <= max_s; m >= n - s so that [A; B] can have rank n.
inline Dims random_dims(std::mt19937_64& rng, Index max_m, Index max_n, Index max_s,
                        Index min_s = 0) {
  std::uniform_int_distribution<Index> dn(1, max_n);
  for (;;) {
    const Index n = dn(rng);
    const Index s_hi = std::min(max_s, n);
    if (s_hi < min_s) continue;
    const Index s = std::uniform_int_distribution<Index>(min_s, s_hi)(rng);
    const Index m_lo = std::max<Index>(n - s, 1);
    if (m_lo > max_m) continue;
    const Index m = std::uniform_int_distribution<Index>(m_lo, max_m)(rng);
    return {m, n, s};
  }
}

inline Matrix gaussian(std::mt19937_64& rng, Index rows, Index cols) {
  std::normal_distribution<double> g;
  Matrix M(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) M(i, j) = g(rng);
  return M;
}

inline LseProblem random_problem(std::mt19937_64& rng, const Dims& d) {
  Matrix A = gaussian(rng, d.m, d.n);
  Matrix B = gaussian(rng, d.s, d.n);
  Vector b = gaussian(rng, d.m, 1);
  Vector d_vec = gaussian(rng, d.s, 1);
  return LseProblem(std::move(A), std::move(B), std::move(b), std::move(d_vec));
}

inline LseProblem random_problem(std::uint64_t seed, Index max_m = 12, Index max_n = 8,
                                 Index max_s = 4) {
  std::mt19937_64 rng(seed);
  return random_problem(rng, random_dims(rng, max_m, max_n, max_s));
}

// A = I_2, B = [1 0], b = (3, 4), d = (7): x = (7, 4), r = (-4, 0).
inline LseProblem identity_problem() {
  Matrix B(1, 2);
  B << 1.0, 0.0;
  Vector b(2);
  b << 3.0, 4.0;
  Vector d(1);
  d << 7.0;
  return LseProblem(Matrix::Identity(2, 2), B, b, d);
}

}  // namespace lsecond::testing
