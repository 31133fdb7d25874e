// Copyright The lse-cond Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Result {
  int code = -1;
  std::string out;
  json doc() const { return json::parse(out); }
};

Result run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + LSE_COND_BIN + " " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

struct Workspace {
  fs::path root;
  Workspace() {
    root = fs::temp_directory_path() / ("lsecond-cli-" + std::to_string(::getpid()));
    fs::remove_all(root);
    fs::create_directories(root / "identity");
    fs::create_directories(root / "deficient");
    write(root / "identity/A.mtx", "%%MatrixMarket matrix array real general\n2 2\n1\n0\n0\n1\n");
    write(root / "identity/B.mtx", "%%MatrixMarket matrix array real general\n1 2\n1\n0\n");
    write(root / "identity/b.mtx", "%%MatrixMarket matrix array real general\n2 1\n3\n4\n");
    write(root / "identity/d.mtx", "%%MatrixMarket matrix array real general\n1 1\n7\n");
    write(root / "deficient/A.mtx", "%%MatrixMarket matrix array real general\n2 2\n1\n0\n0\n0\n");
    write(root / "deficient/B.mtx", "%%MatrixMarket matrix coordinate real general\n1 2 0\n");
    write(root / "deficient/b.mtx", "%%MatrixMarket matrix array real general\n2 1\n1\n1\n");
    write(root / "deficient/d.mtx", "%%MatrixMarket matrix array real general\n1 1\n1\n");
  }
  ~Workspace() { fs::remove_all(root); }
  std::string path(const std::string& rel) const { return (root / rel).string(); }
};

const Workspace& ws() {
  static const Workspace w;
  return w;
}

double kappa_of(const Result& r) { return r.doc()["report"]["kappa"].get<double>(); }

}  // namespace

TEST_CASE("solve writes x and r") {
  const Result r = run("solve " + ws().path("identity") + " --out " + ws().path("sol"));
  REQUIRE(r.code == 0);
  const json j = r.doc();
  CHECK(j["x"][0].get<double>() == doctest::Approx(7.0));
  CHECK(j["x"][1].get<double>() == doctest::Approx(4.0));
  CHECK(j["manifest"]["command"] == "solve");
  std::istringstream x(slurp(ws().path("sol/x.mtx")));
  std::string header;
  std::getline(x, header);
  CHECK(header == "%%MatrixMarket matrix array real general");
  int rows = 0, cols = 0;
  double x0 = 0.0, x1 = 0.0;
  x >> rows >> cols >> x0 >> x1;
  CHECK(rows == 2);
  CHECK(cols == 1);
  CHECK(x0 == doctest::Approx(7.0).epsilon(1e-14));
  CHECK(x1 == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(fs::exists(ws().path("sol/r.mtx")));
}

TEST_CASE("error kinds and exit codes") {
  Result r = run("solve " + ws().path("nothing"));
  CHECK(r.code == 2);
  CHECK(r.doc()["error"]["kind"] == "io");

  r = run("cond " + ws().path("deficient"));
  CHECK(r.code == 3);
  CHECK(r.doc()["error"]["kind"] == "assumptions");

  r = run("cond " + ws().path("identity") + " --method nope");
  CHECK(r.code == 5);
  r = run("cond " + ws().path("identity") + " --weights 1,1");
  CHECK(r.code == 5);
  r = run("cond " + ws().path("identity") + " --L e3");
  CHECK(r.code == 5);
  r = run("cond " + ws().path("identity") + " --method lls_svd");
  CHECK(r.code == 5);
  CHECK(r.doc()["error"]["kind"] == "domain");
  r = run("frobnicate");
  CHECK(r.code == 5);
  CHECK(r.doc()["error"]["kind"] == "usage");
  r = run("bench --experiment ratio --n 6 --trials 1 --seed 1 --out " + ws().path("b0"),
          "LSE_COND_THREADS=many");
  CHECK(r.code == 5);
}

TEST_CASE("cond routes and options") {
  const std::string p = ws().path("identity");
  const double closed = kappa_of(run("cond " + p + " --method closed"));
  const double gsvd = kappa_of(run("cond " + p + " --method gsvd"));
  const double kron = kappa_of(run("exact " + p + " --method kron"));
  CHECK(std::abs(closed - gsvd) <= 1e-9 * gsvd);
  CHECK(std::abs(kron - gsvd) <= 1e-9 * gsvd);
  CHECK(gsvd == doctest::Approx(10.228754420650128).epsilon(1e-12));

  const Result r = run("cond " + p + " --weights 1,1,1,1");
  REQUIRE(r.code == 0);
  CHECK(kappa_of(r) == gsvd);
  CHECK(r.doc()["report"]["method"] == "gsvd");
  CHECK(r.doc()["report"].contains("elapsed_ms"));
  CHECK(kappa_of(run("cond " + p + " --weights 2,2,2,2")) == doctest::Approx(gsvd / 2));

  const double e1 = kappa_of(run("cond " + p + " --L e1"));
  CHECK(e1 <= gsvd);
  write(ws().root / "L.mtx", "%%MatrixMarket matrix array real general\n2 1\n1\n0\n");
  CHECK(kappa_of(run("cond " + p + " --L " + ws().path("L.mtx"))) == e1);
}

TEST_CASE("structured") {
  const std::string p = ws().path("identity");
  const Result r = run("structured " + p + " --struct-a toeplitz --struct-b toeplitz");
  REQUIRE(r.code == 0);
  const json j = r.doc()["report"];
  CHECK(j["kappa"].get<double>() <= j["kappa_unstructured"].get<double>() * (1 + 1e-12));
  CHECK(run("structured " + p + " --struct-a circulant").code == 5);
}

TEST_CASE("estimate") {
  const std::string g = ws().path("paige");
  REQUIRE(run("generate --kind paige --dims 40,30,10 --seed 3 --out " + g).code == 0);

  const Result a = run("estimate " + g + " --method pce --eps 0.001 --delta 0.01 --seed 4 --exact");
  const Result b = run("estimate " + g + " --method pce --eps 0.001 --delta 0.01 --seed 4 --exact");
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const json pce = a.doc()["report"];
  CHECK(pce["converged"] == true);
  CHECK(pce["ratio"].get<double>() == doctest::Approx(1.0).epsilon(1e-2));
  CHECK(pce["kappa_interval"].size() == 2);

  const Result s = run("estimate " + g + " --method ssce --seed 4");
  REQUIRE(s.code == 0);
  CHECK(s.doc()["report"]["q"] == 2);
  CHECK(s.doc()["manifest"]["seed"] == 4);
  CHECK(s.out == run("estimate " + g + " --method ssce --seed 4").out);

  const Result unseeded = run("estimate " + g + " --method ssce");
  REQUIRE(unseeded.code == 0);
  CHECK(unseeded.doc()["manifest"]["seed"].is_number_unsigned());
}

TEST_CASE("bench table1 covers the full grid") {
  const Result r = run("bench --experiment table1 --trials 2 --seed 5 --out " + ws().path("t1"));
  REQUIRE(r.code == 0);
  std::istringstream csv(slurp(ws().path("t1/table1.csv")));
  int rows = 0;
  for (std::string line; std::getline(csv, line);) ++rows;
  CHECK(rows == 1 + 27 * 2);
  CHECK(fs::exists(ws().path("t1/table1.csv.manifest.json")));
}

TEST_CASE("bench dimsweep and ratio are reproducible") {
  const std::string args = "bench --experiment dimsweep --trials 1 --seed 9 --out ";
  REQUIRE(run(args + ws().path("d1")).code == 0);
  REQUIRE(run(args + ws().path("d2"), "LSE_COND_THREADS=2").code == 0);
  const std::string a = slurp(ws().path("d1/dimsweep.csv"));
  CHECK(a == slurp(ws().path("d2/dimsweep.csv")));
  std::istringstream in(a);
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == 12);

  const std::string rargs = "bench --experiment ratio --n 12 --trials 3 --seed 2 --out ";
  REQUIRE(run(rargs + ws().path("r1")).code == 0);
  REQUIRE(run(rargs + ws().path("r2")).code == 0);
  CHECK(slurp(ws().path("r1/ratio_n12.csv")) == slurp(ws().path("r2/ratio_n12.csv")));
  CHECK(slurp(ws().path("r1/ratio_n12.csv.manifest.json")) ==
        slurp(ws().path("r2/ratio_n12.csv.manifest.json")));
}
