// Copyright The lse-cond Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include <unistd.h>

#include "lsecond/lsecond.h"

namespace fs = std::filesystem;

namespace {

// A = I_2, B = [1 0], b = (3, 4), d = (7).
lsec_problem* identity_problem() {
  const double A[] = {1, 0, 0, 1};
  const double B[] = {1, 0};
  const double b[] = {3, 4};
  const double d[] = {7};
  lsec_problem* p = nullptr;
  REQUIRE(lsec_problem_create(2, 2, 1, A, B, b, d, &p) == LSEC_OK);
  return p;
}

fs::path temp_dir(const char* tag) {
  const fs::path dir = fs::temp_directory_path() / (std::string("lsecond-capi-") + tag + "-" +
                                                    std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::strlen(lsec_version()) > 0);
  CHECK(std::string(lsec_status_name(LSEC_OK)) == "ok");
  CHECK(std::string(lsec_status_name(LSEC_ERR_ASSUMPTIONS)) == "assumptions");
  CHECK(std::string(lsec_status_name(LSEC_ERR_STRUCTURE)) == "structure_violation");
  CHECK(std::string(lsec_status_name(LSEC_ERR_IO)) == "io");
}

TEST_CASE("solve the identity fixture") {
  lsec_problem* p = identity_problem();
  int64_t m = 0, n = 0, s = 0;
  CHECK(lsec_problem_dims(p, &m, &n, &s) == LSEC_OK);
  CHECK(m == 2);
  CHECK(n == 2);
  CHECK(s == 1);

  lsec_diagnostic diag{};
  CHECK(lsec_check_assumptions(p, 0.0, &diag) == LSEC_OK);
  CHECK(diag.ok == 1);

  lsec_solution* sol = nullptr;
  REQUIRE(lsec_solve(p, &sol) == LSEC_OK);
  double x[2], r[2];
  CHECK(lsec_solution_x(sol, x, 2) == LSEC_OK);
  CHECK(lsec_solution_r(sol, r, 2) == LSEC_OK);
  CHECK(x[0] == doctest::Approx(7.0));
  CHECK(x[1] == doctest::Approx(4.0));
  CHECK(r[0] == doctest::Approx(-4.0));
  CHECK(lsec_solution_x(sol, x, 3) == LSEC_ERR_SHAPE);
  int64_t t = -1;
  CHECK(lsec_solution_t(sol, &t) == LSEC_OK);
  CHECK(t == 1);
  lsec_solution_destroy(sol);
  lsec_problem_destroy(p);
}

TEST_CASE("condition routes through the C API") {
  lsec_problem* p = identity_problem();
  double kappa[3];
  const lsec_method methods[] = {LSEC_METHOD_KRON, LSEC_METHOD_CLOSED, LSEC_METHOD_GSVD};
  for (int i = 0; i < 3; ++i) {
    lsec_cond_report rep{};
    REQUIRE(lsec_cond(p, nullptr, methods[i], &rep) == LSEC_OK);
    CHECK(rep.has_c_norm == 1);
    kappa[i] = rep.kappa;
  }
  CHECK(kappa[0] == doctest::Approx(10.228754420650128).epsilon(1e-12));
  CHECK(kappa[1] == doctest::Approx(kappa[0]).epsilon(1e-12));
  CHECK(kappa[2] == doctest::Approx(kappa[0]).epsilon(1e-12));

  lsec_cond_report bound{};
  CHECK(lsec_cond(p, nullptr, LSEC_METHOD_UPPER_BOUND, &bound) == LSEC_OK);
  CHECK(bound.kappa >= kappa[0]);
  CHECK(bound.has_c_norm == 0);

  lsec_cond_report lls{};
  CHECK(lsec_cond(p, nullptr, LSEC_METHOD_LLS_SVD, &lls) == LSEC_ERR_DOMAIN);
  CHECK(std::strlen(lsec_last_error()) > 0);

  const double L[] = {1.0, 0.0};
  lsec_weights w;
  lsec_weights_default(&w);
  w.L = L;
  w.L_cols = 1;
  lsec_cond_report e1{};
  CHECK(lsec_cond(p, &w, LSEC_METHOD_GSVD, &e1) == LSEC_OK);
  CHECK(e1.kappa == doctest::Approx(std::sqrt(66.0)).epsilon(1e-12));

  w.alpha_A = -1.0;
  CHECK(lsec_cond(p, &w, LSEC_METHOD_GSVD, &e1) == LSEC_ERR_DOMAIN);
  CHECK(std::string(lsec_method_name(LSEC_METHOD_KRON)) == "kron_oracle");
  lsec_problem_destroy(p);
}

TEST_CASE("argument and assumption errors") {
  CHECK(lsec_solve(nullptr, nullptr) == LSEC_ERR_INVALID_ARGUMENT);
  CHECK(std::strlen(lsec_last_error()) > 0);
  lsec_problem* p = nullptr;
  CHECK(lsec_problem_create(2, 2, 1, nullptr, nullptr, nullptr, nullptr, &p) ==
        LSEC_ERR_INVALID_ARGUMENT);
  CHECK(lsec_problem_create(1, 3, 1, nullptr, nullptr, nullptr, nullptr, &p) != LSEC_OK);

  const double A[] = {1, 0, 0, 0};
  const double B[] = {0, 0};
  const double b[] = {1, 1};
  const double d[] = {1};
  REQUIRE(lsec_problem_create(2, 2, 1, A, B, b, d, &p) == LSEC_OK);
  lsec_solution* sol = nullptr;
  CHECK(lsec_solve(p, &sol) == LSEC_ERR_ASSUMPTIONS);
  CHECK(sol == nullptr);
  lsec_diagnostic diag{};
  CHECK(lsec_check_assumptions(p, 0.0, &diag) == LSEC_OK);
  CHECK(diag.ok == 0);
  CHECK(diag.rank_B == 0);
  lsec_problem_destroy(p);
  lsec_problem_destroy(nullptr);
  lsec_solution_destroy(nullptr);
}

TEST_CASE("structures") {
  lsec_structure kind{};
  CHECK(lsec_structure_parse("hankel", &kind) == LSEC_OK);
  CHECK(kind == LSEC_STRUCT_HANKEL);
  CHECK(lsec_structure_parse("banded", &kind) == LSEC_ERR_DOMAIN);
  CHECK(std::string(lsec_structure_name(LSEC_STRUCT_TOEPLITZ)) == "toeplitz");

  lsec_problem* p = nullptr;
  REQUIRE(lsec_generate_toeplitz(10, 1.0, 4, &p) == LSEC_OK);
  lsec_cond_report full{}, st{};
  CHECK(lsec_cond(p, nullptr, LSEC_METHOD_GSVD, &full) == LSEC_OK);
  CHECK(lsec_cond_structured(p, nullptr, LSEC_STRUCT_TOEPLITZ, LSEC_STRUCT_TOEPLITZ, &st) == LSEC_OK);
  CHECK(st.kappa <= full.kappa * (1 + 1e-12));
  lsec_pce_report pce{};
  CHECK(lsec_estimate_pce_structured(p, nullptr, LSEC_STRUCT_TOEPLITZ, LSEC_STRUCT_TOEPLITZ, 1e-3,
                                     1e-2, 1, &pce) == LSEC_OK);
  CHECK(pce.kappa_hat / st.kappa == doctest::Approx(1.0).epsilon(1e-2));
  double ks = 0.0, kb = 0.0;
  CHECK(lsec_cond_structured_lls(p, nullptr, LSEC_STRUCT_TOEPLITZ, &ks, &kb) == LSEC_ERR_DOMAIN);
  lsec_problem_destroy(p);

  const double A[] = {1, 2, 3, 4};
  const double b[] = {1, 1};
  REQUIRE(lsec_problem_create(2, 2, 0, A, nullptr, b, nullptr, &p) == LSEC_OK);
  CHECK(lsec_cond_structured_lls(p, nullptr, LSEC_STRUCT_TOEPLITZ, &ks, &kb) == LSEC_ERR_STRUCTURE);
  CHECK(lsec_cond_structured_lls(p, nullptr, LSEC_STRUCT_FULL, &ks, &kb) == LSEC_OK);
  CHECK(ks == doctest::Approx(kb).epsilon(1e-12));
  lsec_problem_destroy(p);
}

TEST_CASE("estimators") {
  lsec_paige_config cfg;
  lsec_paige_config_default(&cfg);
  CHECK(cfg.m == 100);
  cfg.m = 40;
  cfg.n = 30;
  cfg.s = 10;
  cfg.seed = 5;
  lsec_problem* p = nullptr;
  REQUIRE(lsec_generate_paige(&cfg, &p) == LSEC_OK);
  lsec_cond_report exact{};
  REQUIRE(lsec_cond(p, nullptr, LSEC_METHOD_GSVD, &exact) == LSEC_OK);

  lsec_pce_report pce{};
  CHECK(lsec_estimate_pce(p, nullptr, 1e-3, 1e-2, 3, &pce) == LSEC_OK);
  CHECK(pce.converged == 1);
  CHECK(pce.kappa_hat / exact.kappa == doctest::Approx(1.0).epsilon(1e-2));
  CHECK(lsec_estimate_pce(p, nullptr, 2.0, 1e-2, 3, &pce) == LSEC_ERR_DOMAIN);

  lsec_ssce_report a{}, b{};
  double ka[2], kb[2];
  CHECK(lsec_estimate_ssce(p, nullptr, 2, 9, 0, &a, ka) == LSEC_OK);
  CHECK(lsec_estimate_ssce(p, nullptr, 2, 9, 0, &b, kb) == LSEC_OK);
  CHECK(a.kappa_hat == b.kappa_hat);
  CHECK(ka[1] == kb[1]);
  CHECK(a.q == 2);
  CHECK(lsec_estimate_ssce(p, nullptr, 0, 9, 0, &a, nullptr) == LSEC_ERR_DOMAIN);

  double w = 0.0;
  CHECK(lsec_wallis(2, 1, &w) == LSEC_OK);
  CHECK(w == doctest::Approx(2.0 / M_PI));
  CHECK(lsec_wallis(0, 1, &w) == LSEC_ERR_DOMAIN);
  lsec_problem_destroy(p);
}

TEST_CASE("files") {
  const fs::path dir = temp_dir("files");
  lsec_problem* p = identity_problem();
  CHECK(lsec_problem_save(p, dir.c_str()) == LSEC_OK);
  lsec_problem* q = nullptr;
  CHECK(lsec_problem_load(dir.c_str(), &q) == LSEC_OK);
  int64_t m = 0, n = 0, s = 0;
  CHECK(lsec_problem_dims(q, &m, &n, &s) == LSEC_OK);
  CHECK(s == 1);
  lsec_problem_destroy(q);
  CHECK(lsec_problem_load((dir / "missing").c_str(), &q) == LSEC_ERR_IO);

  const double M[] = {0.1, 0.2, 0.3, 1e-300, -5.0, 7.0};
  const fs::path mp = dir / "M.mtx";
  CHECK(lsec_matrix_save(mp.c_str(), 2, 3, M) == LSEC_OK);
  int64_t rows = 0, cols = 0;
  double* data = nullptr;
  REQUIRE(lsec_matrix_load(mp.c_str(), &rows, &cols, &data) == LSEC_OK);
  CHECK(rows == 2);
  CHECK(cols == 3);
  CHECK(std::memcmp(data, M, sizeof M) == 0);
  lsec_buffer_free(data);
  lsec_problem_destroy(p);
  fs::remove_all(dir);
}

TEST_CASE("bench entry points") {
  const double l[] = {3.0};
  const double rn[] = {1.0};
  lsec_table1_config cfg;
  lsec_table1_config_default(&cfg);
  CHECK(cfg.trials == 500);
  cfg.l1 = l;
  cfg.l1_count = 1;
  cfg.l2 = l;
  cfg.l2_count = 1;
  cfg.rnorms = rn;
  cfg.rnorm_count = 1;
  cfg.m = 30;
  cfg.n = 20;
  cfg.s = 10;
  cfg.trials = 3;
  cfg.seed = 1;
  char* csv = nullptr;
  char* summary = nullptr;
  REQUIRE(lsec_bench_table1(&cfg, &csv, &summary) == LSEC_OK);
  CHECK(std::string(csv).rfind("l1,l2,rnorm,estimator,mean,variance\n", 0) == 0);
  const auto js = nlohmann::json::parse(summary);
  CHECK(js.is_array());
  CHECK(js.size() == 1);
  lsec_string_free(csv);
  lsec_string_free(summary);

  lsec_ratio_config rc;
  lsec_ratio_config_default(&rc);
  CHECK(rc.n == 100);
  rc.n = 8;
  rc.trials = 2;
  REQUIRE(lsec_bench_ratio(&rc, &csv, nullptr) == LSEC_OK);
  CHECK(std::string(csv).rfind("trial,rnorm,ratio\n", 0) == 0);
  lsec_string_free(csv);

  lsec_dimsweep_config dc;
  lsec_dimsweep_config_default(&dc);
  CHECK(dc.size_count == 11);
  const int64_t sizes[] = {4, 6};
  dc.sizes = sizes;
  dc.size_count = 2;
  dc.trials = 2;
  REQUIRE(lsec_bench_dimsweep(&dc, &csv, nullptr) == LSEC_OK);
  CHECK(std::string(csv).rfind("n,mean,variance\n4,", 0) == 0);
  lsec_string_free(csv);

  dc.trials = 0;
  CHECK(lsec_bench_dimsweep(&dc, &csv, nullptr) == LSEC_ERR_DOMAIN);
}
