/* Copyright The lse-cond Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to lse-cond: equality-constrained least squares (LSE)
 *
 *     min ||b - A x||_2  subject to  B x = d,
 *
 * with A m×n, B s×n, and exact, structured and estimated partial condition
 * numbers of L^T x.
 *
 * Matrices are passed column-major. Every function returning lsec_status
 * records a message for lsec_last_error() on failure (per thread). Strings
 * returned through char** are owned by the caller and released with
 * lsec_string_free().
 */

#ifndef LSECOND_LSECOND_H
#define LSECOND_LSECOND_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define LSEC_API __declspec(dllexport)
#else
#define LSEC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  LSEC_OK = 0,
  LSEC_ERR_SHAPE = 1,
  LSEC_ERR_ASSUMPTIONS = 2, /* rank conditions on (A, B) violated */
  LSEC_ERR_DOMAIN = 3,
  LSEC_ERR_TOO_LARGE = 4, /* Kronecker oracle size guard */
  LSEC_ERR_STRUCTURE = 5,
  LSEC_ERR_IO = 6,
  LSEC_ERR_NON_CONVERGENCE = 7,
  LSEC_ERR_GENERATOR = 8,
  LSEC_ERR_INVALID_ARGUMENT = 9, /* null handle or pointer */
  LSEC_ERR_INTERNAL = 10
} lsec_status;

typedef struct lsec_problem lsec_problem;
typedef struct lsec_solution lsec_solution;

LSEC_API const char* lsec_version(void);
LSEC_API const char* lsec_last_error(void);
/* "shape", "assumptions", "domain", "oracle_too_large", "structure_violation", "io",
 * "non_convergence", "generator", "invalid_argument", "internal" or "ok". */
LSEC_API const char* lsec_status_name(lsec_status status);
LSEC_API void lsec_string_free(char* s);

/* ---- Matrix Market files ---------------------------------------------- */

/* Reads any supported Matrix Market file into a column-major buffer released
 * with lsec_buffer_free(). */
LSEC_API lsec_status lsec_matrix_load(const char* path, int64_t* rows, int64_t* cols,
                                      double** data);
/* Writes array format with 17 significant digits, atomically. */
LSEC_API lsec_status lsec_matrix_save(const char* path, int64_t rows, int64_t cols,
                                      const double* data);
LSEC_API void lsec_buffer_free(double* data);

/* ---- problems ---------------------------------------------------------- */

/* B and d may be NULL when s = 0. */
LSEC_API lsec_status lsec_problem_create(int64_t m, int64_t n, int64_t s, const double* A,
                                         const double* B, const double* b, const double* d,
                                         lsec_problem** out);
/* Bundle directory (A.mtx, b.mtx, optional B.mtx, d.mtx) or JSON manifest. */
LSEC_API lsec_status lsec_problem_load(const char* path, lsec_problem** out);
LSEC_API lsec_status lsec_problem_save(const lsec_problem* problem, const char* dir);
LSEC_API void lsec_problem_destroy(lsec_problem* problem);
LSEC_API lsec_status lsec_problem_dims(const lsec_problem* problem, int64_t* m, int64_t* n,
                                       int64_t* s);

typedef struct {
  int64_t rank_B;
  int64_t rank_stacked;
  int ok;
} lsec_diagnostic;

/* rel_tol <= 0 selects the default max(rows, cols) * eps. */
LSEC_API lsec_status lsec_check_assumptions(const lsec_problem* problem, double rel_tol,
                                            lsec_diagnostic* out);

/* ---- solution ---------------------------------------------------------- */

LSEC_API lsec_status lsec_solve(const lsec_problem* problem, lsec_solution** out);
LSEC_API void lsec_solution_destroy(lsec_solution* solution);
/* Copy x (length n) or r (length m); len must match. */
LSEC_API lsec_status lsec_solution_x(const lsec_solution* solution, double* x, int64_t len);
LSEC_API lsec_status lsec_solution_r(const lsec_solution* solution, double* r, int64_t len);
/* t = rank(A) + s - n from the generalized SVD. */
LSEC_API lsec_status lsec_solution_t(const lsec_solution* solution, int64_t* t);

/* ---- condition numbers ------------------------------------------------- */

typedef struct {
  double alpha_A;
  double alpha_B;
  double alpha_b;
  double alpha_d;
  const double* L; /* n×L_cols column-major; NULL means L = I_n */
  int64_t L_cols;
} lsec_weights;

/* Unit weights, L = I. */
LSEC_API void lsec_weights_default(lsec_weights* w);

typedef enum {
  LSEC_METHOD_KRON = 0,
  LSEC_METHOD_CLOSED = 1,
  LSEC_METHOD_GSVD = 2,
  LSEC_METHOD_LLS_CLOSED = 3, /* s = 0 only */
  LSEC_METHOD_LLS_SVD = 4,    /* s = 0 only */
  LSEC_METHOD_UPPER_BOUND = 5 /* L = I, unit weights only */
} lsec_method;

LSEC_API const char* lsec_method_name(lsec_method method);

typedef struct {
  double kappa;
  double c_norm; /* valid when has_c_norm */
  int has_c_norm;
  double elapsed_ms;
} lsec_cond_report;

/* weights may be NULL for the defaults. */
LSEC_API lsec_status lsec_cond(const lsec_problem* problem, const lsec_weights* weights,
                               lsec_method method, lsec_cond_report* out);

typedef enum {
  LSEC_STRUCT_TOEPLITZ = 0,
  LSEC_STRUCT_HANKEL = 1,
  LSEC_STRUCT_SYMMETRIC = 2,
  LSEC_STRUCT_FULL = 3
} lsec_structure;

LSEC_API const char* lsec_structure_name(lsec_structure kind);
/* Returns LSEC_ERR_DOMAIN for unknown names. */
LSEC_API lsec_status lsec_structure_parse(const char* name, lsec_structure* out);

LSEC_API lsec_status lsec_cond_structured(const lsec_problem* problem,
                                          const lsec_weights* weights, lsec_structure struct_A,
                                          lsec_structure struct_B, lsec_cond_report* out);
/* s = 0 problems: structured value and its unstructured bound. */
LSEC_API lsec_status lsec_cond_structured_lls(const lsec_problem* problem,
                                              const lsec_weights* weights,
                                              lsec_structure struct_A, double* kappa_s,
                                              double* kappa_bound);

/* ---- estimators -------------------------------------------------------- */

typedef struct {
  double alpha1;
  double alpha2;
  double kappa_hat;
  double eps;
  double delta;
  int64_t iterations;
  int converged;
} lsec_pce_report;

LSEC_API lsec_status lsec_estimate_pce(const lsec_problem* problem, const lsec_weights* weights,
                                       double eps, double delta, uint64_t seed,
                                       lsec_pce_report* out);
LSEC_API lsec_status lsec_estimate_pce_structured(const lsec_problem* problem,
                                                  const lsec_weights* weights,
                                                  lsec_structure struct_A,
                                                  lsec_structure struct_B, double eps,
                                                  double delta, uint64_t seed,
                                                  lsec_pce_report* out);

typedef struct {
  int64_t q;
  double kappa_hat;
  double wallis_q;
  double wallis_n;
} lsec_ssce_report;

/* kappa_i_sq receives q values when not NULL. */
LSEC_API lsec_status lsec_estimate_ssce(const lsec_problem* problem, const lsec_weights* weights,
                                        int64_t q, uint64_t seed, int exact_wallis,
                                        lsec_ssce_report* out, double* kappa_i_sq);

LSEC_API lsec_status lsec_wallis(int64_t q, int exact, double* out);

/* ---- generators -------------------------------------------------------- */

typedef struct {
  int64_t m, n, s;
  double l1, l2;
  double rnorm;
  uint64_t seed;
} lsec_paige_config;

/* m = 100, n = 80, s = 50, l1 = l2 = 3, rnorm = 1, seed = 0. */
LSEC_API void lsec_paige_config_default(lsec_paige_config* cfg);
LSEC_API lsec_status lsec_generate_paige(const lsec_paige_config* cfg, lsec_problem** out);
LSEC_API lsec_status lsec_generate_toeplitz(int64_t n, double rnorm, uint64_t seed,
                                            lsec_problem** out);

/* ---- experiments ------------------------------------------------------- */

/* threads = 0 uses the hardware concurrency. Results never depend on it. */
typedef struct {
  const double* l1;
  size_t l1_count;
  const double* l2;
  size_t l2_count;
  const double* rnorms;
  size_t rnorm_count;
  int64_t trials;
  int64_t m, n, s;
  int64_t q;
  double eps, delta;
  uint64_t seed;
  unsigned threads;
} lsec_table1_config;

typedef struct {
  int64_t n;
  const double* rnorms;
  size_t rnorm_count;
  int64_t trials;
  uint64_t seed;
  unsigned threads;
} lsec_ratio_config;

typedef struct {
  const int64_t* sizes;
  size_t size_count;
  int64_t trials;
  double rnorm;
  uint64_t seed;
  unsigned threads;
} lsec_dimsweep_config;

/* Defaults: the full 3×3×3 grid with 500 trials; n = 100 with rnorms
 * {1e-4, 1, 1e4} and 200 trials; sizes 10, 30, ..., 210 with 50 trials. */
LSEC_API void lsec_table1_config_default(lsec_table1_config* cfg);
LSEC_API void lsec_ratio_config_default(lsec_ratio_config* cfg);
LSEC_API void lsec_dimsweep_config_default(lsec_dimsweep_config* cfg);

/* csv receives the table; summary (may be NULL) receives a JSON array of
 * per-cell statistics. */
LSEC_API lsec_status lsec_bench_table1(const lsec_table1_config* cfg, char** csv, char** summary);
LSEC_API lsec_status lsec_bench_ratio(const lsec_ratio_config* cfg, char** csv, char** summary);
LSEC_API lsec_status lsec_bench_dimsweep(const lsec_dimsweep_config* cfg, char** csv,
                                         char** summary);

#ifdef __cplusplus
}
#endif

#endif /* LSECOND_LSECOND_H */
