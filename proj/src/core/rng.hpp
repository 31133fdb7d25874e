// Copyright The lse-cond Authors
// SPDX-License-Identifier: Apache-2.0

// Seeded random streams. Every consumer derives its own stream from
// (seed, ids...) so results never depend on scheduling.

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "core/types.hpp"

namespace lsecond {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> ids) {
  std::uint64_t h = splitmix64(seed);
  for (const std::uint64_t id : ids) h = splitmix64(h ^ splitmix64(id + 0x632be59bd9b4e019ULL));
  return h;
}

inline Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> ids = {}) {
  return Rng(derive_seed(seed, ids));
}

// Standard normal entries. std::normal_distribution output is implementation
// defined, so results are reproducible for a given standard library.
inline Matrix gaussian_matrix(Rng& rng, Index rows, Index cols) {
  std::normal_distribution<double> normal;
  Matrix out(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) out(i, j) = normal(rng);
  return out;
}

inline Vector gaussian_vector(Rng& rng, Index n) { return gaussian_matrix(rng, n, 1); }

inline Vector unit_vector(Rng& rng, Index n) {
  Vector v = gaussian_vector(rng, n);
  while (v.norm() == 0.0) v = gaussian_vector(rng, n);
  return v / v.norm();
}

}  // namespace lsecond
