// Copyright The lse-cond Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lsecond {

enum class ErrorKind {
  shape,
  rank_deficiency,
  domain,
  oracle_too_large,
  structure_violation,
  io,
  non_convergence,
  generator,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::shape: return "shape";
    case ErrorKind::rank_deficiency: return "assumptions";
    case ErrorKind::domain: return "domain";
    case ErrorKind::oracle_too_large: return "oracle_too_large";
    case ErrorKind::structure_violation: return "structure_violation";
    case ErrorKind::io: return "io";
    case ErrorKind::non_convergence: return "non_convergence";
    case ErrorKind::generator: return "generator";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Raised when rank(B) = s or rank([A; B]) = n fails; carries what was measured.
class RankDeficiencyError : public Error {
 public:
  RankDeficiencyError(long rank_B, long rank_stacked, long s, long n,
                      const std::string& detail = {})
      : Error(ErrorKind::rank_deficiency,
              "rank assumptions violated: rank(B) = " + std::to_string(rank_B) +
                  " (need " + std::to_string(s) + "), rank([A;B]) = " +
                  std::to_string(rank_stacked) + " (need " + std::to_string(n) +
                  ")" + (detail.empty() ? "" : "; " + detail)),
        rank_B_(rank_B),
        rank_stacked_(rank_stacked) {}

  long rank_B() const noexcept { return rank_B_; }
  long rank_stacked() const noexcept { return rank_stacked_; }

 private:
  long rank_B_;
  long rank_stacked_;
};

}  // namespace lsecond
