// Copyright The lse-cond Authors
// SPDX-License-Identifier: Apache-2.0

// Matrix Market I/O and problem bundles.
//
// A bundle is either a directory holding A.mtx, b.mtx and optionally B.mtx,
// d.mtx, or a JSON manifest {"A": path, "B": path, "b": path, "d": path}
// with paths relative to the manifest. A missing B means s = 0.

#pragma once

#include <filesystem>
#include <string>

#include "core/types.hpp"

namespace lsecond::mmio {

// Reads coordinate or array files with real or integer entries and general
// or symmetric symmetry. Throws Error(io) on unreadable or malformed input.
Matrix read_matrix(const std::filesystem::path& path);
Matrix parse_matrix(const std::string& text, const std::string& name = "<string>");
// n×1 or 1×n.
Vector read_vector(const std::filesystem::path& path);

// Array format, %.17g.
std::string format_matrix(const Matrix& M);
void write_matrix(const std::filesystem::path& path, const Matrix& M);

// Writes through a temporary file in the same directory and renames it.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

LseProblem load_problem(const std::filesystem::path& path);
// Writes a bundle directory (A.mtx, B.mtx, b.mtx, d.mtx).
void save_problem(const std::filesystem::path& dir, const LseProblem& problem);

}  // namespace lsecond::mmio
