// Copyright The lse-cond Authors
// SPDX-License-Identifier: Apache-2.0

#include "lsecond/lsecond.h"

#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "core/estimators.hpp"
#include "core/harness.hpp"
#include "core/mmio.hpp"
#include "core/structured.hpp"

#ifndef LSECOND_VERSION
#define LSECOND_VERSION "0.0.0"
#endif

struct lsec_problem {
  lsecond::LseProblem value;
};

struct lsec_solution {
  lsecond::LseSolution value;
};

namespace {

using namespace lsecond;
using json = nlohmann::json;

thread_local std::string g_last_error;

lsec_status status_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::shape: return LSEC_ERR_SHAPE;
    case ErrorKind::rank_deficiency: return LSEC_ERR_ASSUMPTIONS;
    case ErrorKind::domain: return LSEC_ERR_DOMAIN;
    case ErrorKind::oracle_too_large: return LSEC_ERR_TOO_LARGE;
    case ErrorKind::structure_violation: return LSEC_ERR_STRUCTURE;
    case ErrorKind::io: return LSEC_ERR_IO;
    case ErrorKind::non_convergence: return LSEC_ERR_NON_CONVERGENCE;
    case ErrorKind::generator: return LSEC_ERR_GENERATOR;
  }
  return LSEC_ERR_INTERNAL;
}

lsec_status fail(lsec_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <class F>
lsec_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return LSEC_OK;
  } catch (const Error& e) {
    return fail(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(LSEC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(LSEC_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(LSEC_ERR_INTERNAL, "unknown error");
  }
}

template <class... Ptrs>
bool any_null(Ptrs... ptrs) {
  return ((ptrs == nullptr) || ...);
}

lsec_status null_argument() { return fail(LSEC_ERR_INVALID_ARGUMENT, "null argument"); }

ConditionWeights to_weights(const lsec_weights* w, Index n) {
  ConditionWeights out;
  if (w == nullptr) return out;
  out.alpha_A = w->alpha_A;
  out.alpha_B = w->alpha_B;
  out.alpha_b = w->alpha_b;
  out.alpha_d = w->alpha_d;
  if (w->L != nullptr) {
    if (w->L_cols < 0) throw Error(ErrorKind::shape, "L_cols must be nonnegative");
    out.L = Eigen::Map<const Matrix>(w->L, n, w->L_cols);
  }
  return out;
}

StructureSpec spec_of(lsec_structure kind, Index rows, Index cols) {
  switch (kind) {
    case LSEC_STRUCT_TOEPLITZ: return {StructureKind::toeplitz, rows, cols};
    case LSEC_STRUCT_HANKEL: return {StructureKind::hankel, rows, cols};
    case LSEC_STRUCT_SYMMETRIC: return {StructureKind::symmetric, rows, cols};
    case LSEC_STRUCT_FULL: return {StructureKind::full, rows, cols};
  }
  throw Error(ErrorKind::domain, "unknown structure kind");
}

void fill(lsec_cond_report* out, const ConditionReport& r) {
  out->kappa = r.kappa;
  out->has_c_norm = r.c_norm.has_value() ? 1 : 0;
  out->c_norm = r.c_norm.value_or(0.0);
  out->elapsed_ms = r.elapsed.count();
}

void fill(lsec_pce_report* out, const PceReport& r) {
  out->alpha1 = r.alpha1;
  out->alpha2 = r.alpha2;
  out->kappa_hat = r.kappa_hat;
  out->eps = r.eps;
  out->delta = r.delta;
  out->iterations = r.iterations;
  out->converged = r.converged ? 1 : 0;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

json stats_json(const ExperimentStats& st) {
  return {{"mean", st.mean},     {"variance", st.variance}, {"samples", st.samples},
          {"min", st.min},       {"median", st.median},     {"max", st.max}};
}

void require_s0(const LseProblem& p, const char* what) {
  if (p.s() != 0) throw Error(ErrorKind::domain, std::string(what) + " needs s = 0 (no constraints)");
}

constexpr double kDefaultGrid[] = {0.0, 3.0, 5.0};
constexpr double kDefaultRnorms[] = {1e-4, 1.0, 1e4};
constexpr int64_t kDefaultSizes[] = {10, 30, 50, 70, 90, 110, 130, 150, 170, 190, 210};

}  // namespace

extern "C" {

const char* lsec_version(void) { return LSECOND_VERSION; }

const char* lsec_last_error(void) { return g_last_error.c_str(); }

const char* lsec_status_name(lsec_status status) {
  switch (status) {
    case LSEC_OK: return "ok";
    case LSEC_ERR_SHAPE: return "shape";
    case LSEC_ERR_ASSUMPTIONS: return "assumptions";
    case LSEC_ERR_DOMAIN: return "domain";
    case LSEC_ERR_TOO_LARGE: return "oracle_too_large";
    case LSEC_ERR_STRUCTURE: return "structure_violation";
    case LSEC_ERR_IO: return "io";
    case LSEC_ERR_NON_CONVERGENCE: return "non_convergence";
    case LSEC_ERR_GENERATOR: return "generator";
    case LSEC_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case LSEC_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

void lsec_string_free(char* s) { std::free(s); }

lsec_status lsec_matrix_load(const char* path, int64_t* rows, int64_t* cols, double** data) {
  if (any_null(path, rows, cols, data)) return null_argument();
  *data = nullptr;
  return guarded([&] {
    const Matrix M = mmio::read_matrix(path);
    double* buf = static_cast<double*>(std::malloc(sizeof(double) * std::max<size_t>(M.size(), 1)));
    if (buf == nullptr) throw std::bad_alloc();
    std::copy(M.data(), M.data() + M.size(), buf);
    *rows = M.rows();
    *cols = M.cols();
    *data = buf;
  });
}

lsec_status lsec_matrix_save(const char* path, int64_t rows, int64_t cols, const double* data) {
  if (path == nullptr || (rows * cols > 0 && data == nullptr)) return null_argument();
  if (rows < 0 || cols < 0) return fail(LSEC_ERR_SHAPE, "negative dimension");
  return guarded([&] {
    const Matrix M = rows * cols > 0 ? Matrix(Eigen::Map<const Matrix>(data, rows, cols))
                                     : Matrix(rows, cols);
    mmio::write_matrix(path, M);
  });
}

void lsec_buffer_free(double* data) { std::free(data); }

lsec_status lsec_problem_create(int64_t m, int64_t n, int64_t s, const double* A,
                                const double* B, const double* b, const double* d,
                                lsec_problem** out) {
  if (out == nullptr || (m * n > 0 && A == nullptr) || (m > 0 && b == nullptr) ||
      (s > 0 && (B == nullptr || d == nullptr)))
    return null_argument();
  if (m < 0 || n < 0 || s < 0) return fail(LSEC_ERR_SHAPE, "negative dimension");
  *out = nullptr;
  return guarded([&] {
    Matrix Am = m * n > 0 ? Matrix(Eigen::Map<const Matrix>(A, m, n)) : Matrix(m, n);
    Matrix Bm = s * n > 0 ? Matrix(Eigen::Map<const Matrix>(B, s, n)) : Matrix(s, n);
    Vector bv = m > 0 ? Vector(Eigen::Map<const Vector>(b, m)) : Vector(0);
    Vector dv = s > 0 ? Vector(Eigen::Map<const Vector>(d, s)) : Vector(0);
    *out = new lsec_problem{LseProblem(std::move(Am), std::move(Bm), std::move(bv), std::move(dv))};
  });
}

lsec_status lsec_problem_load(const char* path, lsec_problem** out) {
  if (any_null(path, out)) return null_argument();
  *out = nullptr;
  return guarded([&] { *out = new lsec_problem{mmio::load_problem(path)}; });
}

lsec_status lsec_problem_save(const lsec_problem* problem, const char* dir) {
  if (any_null(problem, dir)) return null_argument();
  return guarded([&] { mmio::save_problem(dir, problem->value); });
}

void lsec_problem_destroy(lsec_problem* problem) { delete problem; }

lsec_status lsec_problem_dims(const lsec_problem* problem, int64_t* m, int64_t* n, int64_t* s) {
  if (any_null(problem, m, n, s)) return null_argument();
  *m = problem->value.m();
  *n = problem->value.n();
  *s = problem->value.s();
  return LSEC_OK;
}

lsec_status lsec_check_assumptions(const lsec_problem* problem, double rel_tol,
                                   lsec_diagnostic* out) {
  if (any_null(problem, out)) return null_argument();
  return guarded([&] {
    std::optional<double> tol;
    if (rel_tol > 0.0) tol = rel_tol;
    const AssumptionDiagnostic d = check_assumptions(problem->value.A(), problem->value.B(), tol);
    out->rank_B = d.rank_B;
    out->rank_stacked = d.rank_stacked;
    out->ok = d.ok ? 1 : 0;
  });
}

lsec_status lsec_solve(const lsec_problem* problem, lsec_solution** out) {
  if (any_null(problem, out)) return null_argument();
  *out = nullptr;
  return guarded([&] { *out = new lsec_solution{solve_lse(problem->value)}; });
}

void lsec_solution_destroy(lsec_solution* solution) { delete solution; }

lsec_status lsec_solution_x(const lsec_solution* solution, double* x, int64_t len) {
  if (any_null(solution, x)) return null_argument();
  if (len != solution->value.x.size()) return fail(LSEC_ERR_SHAPE, "x has length n");
  std::copy(solution->value.x.data(), solution->value.x.data() + len, x);
  return LSEC_OK;
}

lsec_status lsec_solution_r(const lsec_solution* solution, double* r, int64_t len) {
  if (solution == nullptr || (len > 0 && r == nullptr)) return null_argument();
  if (len != solution->value.r.size()) return fail(LSEC_ERR_SHAPE, "r has length m");
  std::copy(solution->value.r.data(), solution->value.r.data() + len, r);
  return LSEC_OK;
}

lsec_status lsec_solution_t(const lsec_solution* solution, int64_t* t) {
  if (any_null(solution, t)) return null_argument();
  *t = solution->value.factors.t;
  return LSEC_OK;
}

void lsec_weights_default(lsec_weights* w) {
  if (w == nullptr) return;
  *w = lsec_weights{1.0, 1.0, 1.0, 1.0, nullptr, 0};
}

const char* lsec_method_name(lsec_method method) {
  switch (method) {
    case LSEC_METHOD_KRON: return "kron_oracle";
    case LSEC_METHOD_CLOSED: return "closed";
    case LSEC_METHOD_GSVD: return "gsvd";
    case LSEC_METHOD_LLS_CLOSED: return "lls_closed";
    case LSEC_METHOD_LLS_SVD: return "lls_svd";
    case LSEC_METHOD_UPPER_BOUND: return "upper_bound";
  }
  return "unknown";
}

lsec_status lsec_cond(const lsec_problem* problem, const lsec_weights* weights,
                      lsec_method method, lsec_cond_report* out) {
  if (any_null(problem, out)) return null_argument();
  return guarded([&] {
    const LseProblem& p = problem->value;
    const ConditionWeights w = to_weights(weights, p.n());
    switch (method) {
      case LSEC_METHOD_KRON: fill(out, cond_exact_kron(p, w)); return;
      case LSEC_METHOD_CLOSED: fill(out, cond_exact_closed(p, w)); return;
      case LSEC_METHOD_GSVD: fill(out, cond_exact_gsvd(p, w)); return;
      case LSEC_METHOD_LLS_CLOSED:
        require_s0(p, "lls_closed");
        fill(out, cond_lls_closed(p.A(), p.b(), w));
        return;
      case LSEC_METHOD_LLS_SVD:
        require_s0(p, "lls_svd");
        fill(out, cond_lls_svd(p.A(), p.b(), w));
        return;
      case LSEC_METHOD_UPPER_BOUND: fill(out, cond_upper_bound(p, w)); return;
    }
    throw Error(ErrorKind::domain, "unknown method");
  });
}

const char* lsec_structure_name(lsec_structure kind) {
  switch (kind) {
    case LSEC_STRUCT_TOEPLITZ: return "toeplitz";
    case LSEC_STRUCT_HANKEL: return "hankel";
    case LSEC_STRUCT_SYMMETRIC: return "symmetric";
    case LSEC_STRUCT_FULL: return "full";
  }
  return "unknown";
}

lsec_status lsec_structure_parse(const char* name, lsec_structure* out) {
  if (any_null(name, out)) return null_argument();
  const auto kind = structure_kind_from_string(name);
  if (!kind) return fail(LSEC_ERR_DOMAIN, std::string("unknown structure kind: ") + name);
  switch (*kind) {
    case StructureKind::toeplitz: *out = LSEC_STRUCT_TOEPLITZ; break;
    case StructureKind::hankel: *out = LSEC_STRUCT_HANKEL; break;
    case StructureKind::symmetric: *out = LSEC_STRUCT_SYMMETRIC; break;
    case StructureKind::full: *out = LSEC_STRUCT_FULL; break;
  }
  return LSEC_OK;
}

lsec_status lsec_cond_structured(const lsec_problem* problem, const lsec_weights* weights,
                                 lsec_structure struct_A, lsec_structure struct_B,
                                 lsec_cond_report* out) {
  if (any_null(problem, out)) return null_argument();
  return guarded([&] {
    const LseProblem& p = problem->value;
    fill(out, cond_structured(p, to_weights(weights, p.n()), spec_of(struct_A, p.m(), p.n()),
                              spec_of(struct_B, p.s(), p.n())));
  });
}

lsec_status lsec_cond_structured_lls(const lsec_problem* problem, const lsec_weights* weights,
                                     lsec_structure struct_A, double* kappa_s,
                                     double* kappa_bound) {
  if (any_null(problem, kappa_s, kappa_bound)) return null_argument();
  return guarded([&] {
    const LseProblem& p = problem->value;
    require_s0(p, "structured LLS");
    const StructuredLlsReport r = cond_structured_lls(
        p.A(), p.b(), to_weights(weights, p.n()), spec_of(struct_A, p.m(), p.n()));
    *kappa_s = r.kappa_s;
    *kappa_bound = r.kappa_bound;
  });
}

lsec_status lsec_estimate_pce(const lsec_problem* problem, const lsec_weights* weights,
                              double eps, double delta, uint64_t seed, lsec_pce_report* out) {
  if (any_null(problem, out)) return null_argument();
  return guarded([&] {
    const LseProblem& p = problem->value;
    fill(out, estimate_condition_pce(p, to_weights(weights, p.n()), eps, delta, seed));
  });
}

lsec_status lsec_estimate_pce_structured(const lsec_problem* problem,
                                         const lsec_weights* weights, lsec_structure struct_A,
                                         lsec_structure struct_B, double eps, double delta,
                                         uint64_t seed, lsec_pce_report* out) {
  if (any_null(problem, out)) return null_argument();
  return guarded([&] {
    const LseProblem& p = problem->value;
    fill(out, estimate_structured_pce(p, to_weights(weights, p.n()),
                                      spec_of(struct_A, p.m(), p.n()),
                                      spec_of(struct_B, p.s(), p.n()), eps, delta, seed));
  });
}

lsec_status lsec_estimate_ssce(const lsec_problem* problem, const lsec_weights* weights,
                               int64_t q, uint64_t seed, int exact_wallis, lsec_ssce_report* out,
                               double* kappa_i_sq) {
  if (any_null(problem, out)) return null_argument();
  return guarded([&] {
    const LseProblem& p = problem->value;
    const SsceReport r = ssce_estimate(p, to_weights(weights, p.n()), q, seed,
                                       exact_wallis ? WallisMode::exact : WallisMode::approx);
    out->q = r.q;
    out->kappa_hat = r.kappa_hat;
    out->wallis_q = r.wallis_q;
    out->wallis_n = r.wallis_n;
    if (kappa_i_sq != nullptr) std::copy(r.kappa_i_sq.begin(), r.kappa_i_sq.end(), kappa_i_sq);
  });
}

lsec_status lsec_wallis(int64_t q, int exact, double* out) {
  if (out == nullptr) return null_argument();
  return guarded([&] { *out = wallis(q, exact ? WallisMode::exact : WallisMode::approx); });
}

void lsec_paige_config_default(lsec_paige_config* cfg) {
  if (cfg == nullptr) return;
  const PaigeConfig d;
  *cfg = lsec_paige_config{d.m, d.n, d.s, d.l1, d.l2, d.rnorm, d.seed};
}

lsec_status lsec_generate_paige(const lsec_paige_config* cfg, lsec_problem** out) {
  if (any_null(cfg, out)) return null_argument();
  *out = nullptr;
  return guarded([&] {
    const PaigeConfig pc{cfg->m, cfg->n, cfg->s, cfg->l1, cfg->l2, cfg->rnorm, cfg->seed};
    *out = new lsec_problem{gen_paige(pc).problem};
  });
}

lsec_status lsec_generate_toeplitz(int64_t n, double rnorm, uint64_t seed, lsec_problem** out) {
  if (out == nullptr) return null_argument();
  *out = nullptr;
  return guarded([&] { *out = new lsec_problem{gen_toeplitz_pair(n, rnorm, seed).problem}; });
}

void lsec_table1_config_default(lsec_table1_config* cfg) {
  if (cfg == nullptr) return;
  const Table1Config d;
  *cfg = lsec_table1_config{kDefaultGrid, 3,   kDefaultGrid, 3,       kDefaultRnorms, 3,
                            d.trials,     d.m, d.n,          d.s,     d.q,            d.eps,
                            d.delta,      d.seed, d.threads};
}

void lsec_ratio_config_default(lsec_ratio_config* cfg) {
  if (cfg == nullptr) return;
  const RatioConfig d;
  *cfg = lsec_ratio_config{d.n, kDefaultRnorms, 3, d.trials, d.seed, d.threads};
}

void lsec_dimsweep_config_default(lsec_dimsweep_config* cfg) {
  if (cfg == nullptr) return;
  const DimSweepConfig d;
  *cfg = lsec_dimsweep_config{kDefaultSizes, 11, d.trials, d.rnorm, d.seed, d.threads};
}

lsec_status lsec_bench_table1(const lsec_table1_config* cfg, char** csv, char** summary) {
  if (any_null(cfg, csv)) return null_argument();
  if ((cfg->l1_count > 0 && cfg->l1 == nullptr) || (cfg->l2_count > 0 && cfg->l2 == nullptr) ||
      (cfg->rnorm_count > 0 && cfg->rnorms == nullptr))
    return null_argument();
  *csv = nullptr;
  if (summary != nullptr) *summary = nullptr;
  return guarded([&] {
    Table1Config tc;
    tc.l1.assign(cfg->l1, cfg->l1 + cfg->l1_count);
    tc.l2.assign(cfg->l2, cfg->l2 + cfg->l2_count);
    tc.rnorms.assign(cfg->rnorms, cfg->rnorms + cfg->rnorm_count);
    tc.trials = cfg->trials;
    tc.m = cfg->m;
    tc.n = cfg->n;
    tc.s = cfg->s;
    tc.q = cfg->q;
    tc.eps = cfg->eps;
    tc.delta = cfg->delta;
    tc.seed = cfg->seed;
    tc.threads = cfg->threads;
    const auto cells = run_table1(tc);
    const std::string table = table1_csv(cells);
    if (summary != nullptr) {
      json arr = json::array();
      for (const auto& c : cells)
        arr.push_back({{"l1", c.l1},
                       {"l2", c.l2},
                       {"rnorm", c.rnorm},
                       {"ssce", stats_json(c.ssce)},
                       {"pce", stats_json(c.pce)},
                       {"pce_not_converged", c.pce_not_converged}});
      *summary = dup_string(arr.dump());
    }
    *csv = dup_string(table);
  });
}

lsec_status lsec_bench_ratio(const lsec_ratio_config* cfg, char** csv, char** summary) {
  if (any_null(cfg, csv) || (cfg->rnorm_count > 0 && cfg->rnorms == nullptr)) return null_argument();
  *csv = nullptr;
  if (summary != nullptr) *summary = nullptr;
  return guarded([&] {
    RatioConfig rc;
    rc.n = cfg->n;
    rc.rnorms.assign(cfg->rnorms, cfg->rnorms + cfg->rnorm_count);
    rc.trials = cfg->trials;
    rc.seed = cfg->seed;
    rc.threads = cfg->threads;
    const auto samples = run_ratio_experiment(rc);
    if (summary != nullptr) {
      json arr = json::array();
      for (const double rnorm : rc.rnorms) {
        std::vector<double> ratios;
        for (const auto& s : samples)
          if (s.rnorm == rnorm) ratios.push_back(s.ratio);
        arr.push_back({{"rnorm", rnorm}, {"ratio", stats_json(summarize(ratios))}});
      }
      *summary = dup_string(arr.dump());
    }
    *csv = dup_string(ratio_csv(samples));
  });
}

lsec_status lsec_bench_dimsweep(const lsec_dimsweep_config* cfg, char** csv, char** summary) {
  if (any_null(cfg, csv) || (cfg->size_count > 0 && cfg->sizes == nullptr)) return null_argument();
  *csv = nullptr;
  if (summary != nullptr) *summary = nullptr;
  return guarded([&] {
    DimSweepConfig dc;
    dc.sizes.assign(cfg->sizes, cfg->sizes + cfg->size_count);
    dc.trials = cfg->trials;
    dc.rnorm = cfg->rnorm;
    dc.seed = cfg->seed;
    dc.threads = cfg->threads;
    const auto rows = run_dimension_sweep(dc);
    if (summary != nullptr) {
      json arr = json::array();
      for (const auto& r : rows) arr.push_back({{"n", r.n}, {"ratio", stats_json(r.stats)}});
      *summary = dup_string(arr.dump());
    }
    *csv = dup_string(dimsweep_csv(rows));
  });
}

}  // extern "C"
