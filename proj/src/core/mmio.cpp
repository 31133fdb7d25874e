// Copyright The lse-cond Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/mmio.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <unistd.h>

namespace lsecond::mmio {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void fail(const std::string& name, const std::string& what) {
  throw Error(ErrorKind::io, name + ": " + what);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path.string(), "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Next line that is neither a comment nor blank.
bool next_data_line(std::istringstream& in, std::string& line) {
  while (std::getline(in, line)) {
    const auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '%') continue;
    return true;
  }
  return false;
}

}  // namespace

Matrix parse_matrix(const std::string& text, const std::string& name) {
  std::istringstream in(text);
  std::string header;
  if (!std::getline(in, header)) fail(name, "empty file");
  std::istringstream hs(header);
  std::string banner, object, format, field, symmetry;
  hs >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket" || lower(object) != "matrix")
    fail(name, "missing %%MatrixMarket matrix header");
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (format != "coordinate" && format != "array") fail(name, "unsupported format " + format);
  if (field != "real" && field != "integer" && field != "double")
    fail(name, "unsupported field " + field);
  if (symmetry != "general" && symmetry != "symmetric")
    fail(name, "unsupported symmetry " + symmetry);
  const bool symmetric = symmetry == "symmetric";

  std::string line;
  if (!next_data_line(in, line)) fail(name, "missing size line");
  std::istringstream sizes(line);
  long rows = -1, cols = -1, nnz = -1;
  sizes >> rows >> cols;
  if (format == "coordinate") sizes >> nnz;
  if (sizes.fail() || rows < 0 || cols < 0 || (format == "coordinate" && nnz < 0))
    fail(name, "bad size line");
  if (symmetric && rows != cols) fail(name, "symmetric matrix must be square");

  Matrix M = Matrix::Zero(rows, cols);
  if (format == "coordinate") {
    for (long e = 0; e < nnz; ++e) {
      if (!next_data_line(in, line)) fail(name, "expected " + std::to_string(nnz) + " entries");
      std::istringstream es(line);
      long i = 0, j = 0;
      double v = 0.0;
      es >> i >> j >> v;
      if (es.fail() || i < 1 || i > rows || j < 1 || j > cols)
        fail(name, "bad entry line: " + line);
      M(i - 1, j - 1) += v;
      if (symmetric && i != j) M(j - 1, i - 1) += v;
    }
  } else {
    for (long j = 0; j < cols; ++j) {
      for (long i = symmetric ? j : 0; i < rows; ++i) {
        if (!next_data_line(in, line)) fail(name, "too few array entries");
        std::istringstream es(line);
        double v = 0.0;
        es >> v;
        if (es.fail()) fail(name, "bad array entry: " + line);
        M(i, j) = v;
        if (symmetric) M(j, i) = v;
      }
    }
  }
  return M;
}

Matrix read_matrix(const fs::path& path) { return parse_matrix(read_text(path), path.string()); }

Vector read_vector(const fs::path& path) {
  const Matrix M = read_matrix(path);
  if (M.cols() == 1) return M.col(0);
  if (M.rows() == 1) return M.row(0).transpose();
  if (M.size() == 0) return Vector(0);
  fail(path.string(), "expected a vector, got " + std::to_string(M.rows()) + "x" +
                          std::to_string(M.cols()));
}

std::string format_matrix(const Matrix& M) {
  std::string out = "%%MatrixMarket matrix array real general\n";
  out += std::to_string(M.rows()) + " " + std::to_string(M.cols()) + "\n";
  char buf[32];
  for (Index j = 0; j < M.cols(); ++j)
    for (Index i = 0; i < M.rows(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g\n", M(i, j));
      out += buf;
    }
  return out;
}

void write_file_atomic(const fs::path& path, const std::string& contents) {
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  const fs::path tmp = dir / ("." + path.filename().string() + ".tmp" + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(path.string(), "cannot write file");
    out << contents;
    out.flush();
    if (!out) fail(path.string(), "write failed");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    fail(path.string(), "cannot rename into place: " + ec.message());
  }
}

void write_matrix(const fs::path& path, const Matrix& M) { write_file_atomic(path, format_matrix(M)); }

LseProblem load_problem(const fs::path& path) {
  fs::path A_path, B_path, b_path, d_path;
  std::error_code ec;
  if (fs::is_directory(path, ec)) {
    A_path = path / "A.mtx";
    b_path = path / "b.mtx";
    if (fs::exists(path / "B.mtx")) B_path = path / "B.mtx";
    if (fs::exists(path / "d.mtx")) d_path = path / "d.mtx";
  } else {
    nlohmann::json manifest;
    try {
      manifest = nlohmann::json::parse(read_text(path));
    } catch (const nlohmann::json::exception& e) {
      fail(path.string(), std::string("bad manifest: ") + e.what());
    }
    if (!manifest.is_object()) fail(path.string(), "manifest must be a JSON object");
    const fs::path base = path.parent_path();
    const auto entry = [&](const char* key, bool required) -> fs::path {
      if (!manifest.contains(key) || manifest[key].is_null()) {
        if (required) fail(path.string(), std::string("manifest lacks \"") + key + "\"");
        return {};
      }
      if (!manifest[key].is_string()) fail(path.string(), std::string("\"") + key + "\" must be a path");
      const fs::path p = manifest[key].get<std::string>();
      return p.is_absolute() ? p : base / p;
    };
    A_path = entry("A", true);
    b_path = entry("b", true);
    B_path = entry("B", false);
    d_path = entry("d", false);
  }

  Matrix A = read_matrix(A_path);
  Vector b = read_vector(b_path);
  Matrix B = B_path.empty() ? Matrix(0, A.cols()) : read_matrix(B_path);
  Vector d = d_path.empty() ? Vector(0) : read_vector(d_path);
  if (B.size() == 0) B.resize(0, A.cols());
  return LseProblem(std::move(A), std::move(B), std::move(b), std::move(d));
}

void save_problem(const fs::path& dir, const LseProblem& problem) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(dir.string(), "cannot create directory: " + ec.message());
  write_matrix(dir / "A.mtx", problem.A());
  write_matrix(dir / "B.mtx", problem.B());
  write_matrix(dir / "b.mtx", problem.b());
  write_matrix(dir / "d.mtx", problem.d());
}

}  // namespace lsecond::mmio
