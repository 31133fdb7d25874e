// Copyright The lse-cond Authors
// SPDX-License-Identifier: Apache-2.0

// lse-cond: solve LSE problems and compute, estimate and benchmark their
// partial condition numbers. Every command prints one JSON document on
// stdout; failures print {"error": {"kind", "message"}} and exit nonzero.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lsecond/lsecond.h"

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

enum ExitCode { kOk = 0, kInternal = 1, kIo = 2, kAssumptions = 3, kNonConvergence = 4, kUsage = 5 };

class CliError : public std::runtime_error {
 public:
  CliError(std::string kind, const std::string& message, int code)
      : std::runtime_error(message), kind_(std::move(kind)), code_(code) {}
  const std::string& kind() const { return kind_; }
  int code() const { return code_; }

 private:
  std::string kind_;
  int code_;
};

int exit_code(lsec_status s) {
  switch (s) {
    case LSEC_OK: return kOk;
    case LSEC_ERR_IO: return kIo;
    case LSEC_ERR_SHAPE:
    case LSEC_ERR_ASSUMPTIONS:
    case LSEC_ERR_STRUCTURE:
    case LSEC_ERR_GENERATOR: return kAssumptions;
    case LSEC_ERR_NON_CONVERGENCE: return kNonConvergence;
    case LSEC_ERR_DOMAIN:
    case LSEC_ERR_TOO_LARGE:
    case LSEC_ERR_INVALID_ARGUMENT: return kUsage;
    case LSEC_ERR_INTERNAL: return kInternal;
  }
  return kInternal;
}

void check(lsec_status s) {
  if (s != LSEC_OK) throw CliError(lsec_status_name(s), lsec_last_error(), exit_code(s));
}

[[noreturn]] void usage_error(const std::string& message) { throw CliError("usage", message, kUsage); }

struct ProblemDeleter {
  void operator()(lsec_problem* p) const { lsec_problem_destroy(p); }
};
using ProblemPtr = std::unique_ptr<lsec_problem, ProblemDeleter>;

struct SolutionDeleter {
  void operator()(lsec_solution* p) const { lsec_solution_destroy(p); }
};
using SolutionPtr = std::unique_ptr<lsec_solution, SolutionDeleter>;

struct StringDeleter {
  void operator()(char* p) const { lsec_string_free(p); }
};
using CString = std::unique_ptr<char, StringDeleter>;

struct BufferDeleter {
  void operator()(double* p) const { lsec_buffer_free(p); }
};

struct Dims {
  int64_t m = 0, n = 0, s = 0;
};

ProblemPtr load(const std::string& path) {
  lsec_problem* p = nullptr;
  check(lsec_problem_load(path.c_str(), &p));
  return ProblemPtr(p);
}

Dims dims_of(const lsec_problem* p) {
  Dims d;
  check(lsec_problem_dims(p, &d.m, &d.n, &d.s));
  return d;
}

template <class T>
std::vector<T> parse_list(const std::string& text, const char* flag) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::istringstream is(item);
    T v{};
    is >> v;
    if (is.fail() || !(is >> std::ws).eof())
      usage_error(std::string(flag) + ": cannot parse \"" + item + "\"");
    out.push_back(v);
  }
  if (out.empty()) usage_error(std::string(flag) + " needs at least one value");
  return out;
}

unsigned thread_limit() {
  const char* env = std::getenv("LSE_COND_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 0) usage_error("LSE_COND_THREADS must be a nonnegative integer");
  return static_cast<unsigned>(v);
}

uint64_t resolve_seed(const std::optional<uint64_t>& seed) {
  if (seed) return *seed;
  std::random_device rd;
  return (static_cast<uint64_t>(rd()) << 32) ^ rd();
}

// Weights and the L matrix; the storage outlives the lsec_weights view.
struct WeightArgs {
  std::string weights = "1,1,1,1";
  std::string L = "identity";
  std::vector<double> L_data;
  lsec_weights view{};

  const lsec_weights* resolve(int64_t n) {
    const auto w = parse_list<double>(weights, "--weights");
    if (w.size() != 4) usage_error("--weights takes alpha_A,alpha_B,alpha_b,alpha_d");
    lsec_weights_default(&view);
    view.alpha_A = w[0];
    view.alpha_B = w[1];
    view.alpha_b = w[2];
    view.alpha_d = w[3];
    if (L == "identity") return &view;
    if (L.size() > 1 && L[0] == 'e' && L.find_first_not_of("0123456789", 1) == std::string::npos) {
      const long i = std::stol(L.substr(1));
      if (i < 1 || i > n) usage_error("--L e<i> needs 1 <= i <= n = " + std::to_string(n));
      L_data.assign(static_cast<size_t>(n), 0.0);
      L_data[static_cast<size_t>(i - 1)] = 1.0;
      view.L = L_data.data();
      view.L_cols = 1;
      return &view;
    }
    int64_t rows = 0, cols = 0;
    double* raw = nullptr;
    check(lsec_matrix_load(L.c_str(), &rows, &cols, &raw));
    const std::unique_ptr<double, BufferDeleter> owned(raw);
    if (rows != n) usage_error("--L file must have n = " + std::to_string(n) + " rows");
    L_data.assign(raw, raw + rows * cols);
    view.L = L_data.data();
    view.L_cols = cols;
    return &view;
  }

  json params() const { return {{"weights", weights}, {"L", L}}; }
};

lsec_structure parse_structure(const std::string& name) {
  lsec_structure kind{};
  if (lsec_structure_parse(name.c_str(), &kind) != LSEC_OK)
    usage_error("unknown structure kind \"" + name + "\"");
  return kind;
}

json manifest(const std::string& command, const std::vector<std::string>& inputs, json params,
              std::optional<uint64_t> seed) {
  json m;
  m["command"] = command;
  m["inputs"] = inputs;
  m["params"] = std::move(params);
  m["seed"] = seed ? json(*seed) : json(nullptr);
  m["version"] = lsec_version();
  return m;
}

json cond_json(const lsec_cond_report& r, const std::string& method) {
  json out;
  out["kappa"] = r.kappa;
  out["method"] = method;
  out["C_norm"] = r.has_c_norm ? json(r.c_norm) : json(nullptr);
  out["elapsed_ms"] = r.elapsed_ms;
  return out;
}

json pce_json(const lsec_pce_report& r) {
  json out;
  out["method"] = "pce";
  out["alpha1"] = r.alpha1;
  out["alpha2"] = r.alpha2;
  out["kappa_interval"] = {std::sqrt(r.alpha1), std::sqrt(r.alpha2)};
  out["kappa_hat"] = r.kappa_hat;
  out["eps"] = r.eps;
  out["delta"] = r.delta;
  out["iterations"] = r.iterations;
  out["converged"] = r.converged != 0;
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CliError("io", "cannot write " + path.string(), kIo);
    out << text;
    if (!out.flush()) throw CliError("io", "cannot write " + path.string(), kIo);
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw CliError("io", "cannot write " + path.string() + ": " + ec.message(), kIo);
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw CliError("io", "cannot create " + dir.string() + ": " + ec.message(), kIo);
}

// ---- commands ----------------------------------------------------------

struct SolveArgs {
  std::string problem;
  std::string out;
};

json cmd_solve(const SolveArgs& a) {
  const ProblemPtr p = load(a.problem);
  const Dims d = dims_of(p.get());
  lsec_solution* raw = nullptr;
  check(lsec_solve(p.get(), &raw));
  const SolutionPtr sol(raw);
  std::vector<double> x(static_cast<size_t>(d.n)), r(static_cast<size_t>(d.m));
  check(lsec_solution_x(sol.get(), x.data(), d.n));
  check(lsec_solution_r(sol.get(), r.data(), d.m));
  int64_t t = 0;
  check(lsec_solution_t(sol.get(), &t));

  json files = json::array();
  if (!a.out.empty()) {
    ensure_dir(a.out);
    const fs::path xp = fs::path(a.out) / "x.mtx", rp = fs::path(a.out) / "r.mtx";
    check(lsec_matrix_save(xp.c_str(), d.n, 1, x.data()));
    check(lsec_matrix_save(rp.c_str(), d.m, 1, r.data()));
    files = {xp.string(), rp.string()};
  }
  double rnorm = 0.0;
  for (const double v : r) rnorm += v * v;

  json out;
  out["manifest"] = manifest("solve", {a.problem}, {{"out", a.out}}, std::nullopt);
  out["dims"] = {{"m", d.m}, {"n", d.n}, {"s", d.s}};
  out["t"] = t;
  out["x"] = x;
  out["residual_norm"] = std::sqrt(rnorm);
  out["files"] = files;
  return out;
}

struct CondArgs {
  std::string problem;
  std::string method = "gsvd";
  WeightArgs weights;
};

lsec_method parse_method(const std::string& name) {
  if (name == "kron" || name == "kron_oracle") return LSEC_METHOD_KRON;
  if (name == "closed") return LSEC_METHOD_CLOSED;
  if (name == "gsvd") return LSEC_METHOD_GSVD;
  if (name == "lls_closed") return LSEC_METHOD_LLS_CLOSED;
  if (name == "lls_svd") return LSEC_METHOD_LLS_SVD;
  if (name == "upper_bound") return LSEC_METHOD_UPPER_BOUND;
  usage_error("unknown method \"" + name + "\"");
}

json cmd_cond(CondArgs& a, const std::string& command) {
  const ProblemPtr p = load(a.problem);
  const lsec_method method = parse_method(a.method);
  const lsec_weights* w = a.weights.resolve(dims_of(p.get()).n);
  lsec_cond_report r{};
  check(lsec_cond(p.get(), w, method, &r));
  json params = a.weights.params();
  params["method"] = a.method;
  json out;
  out["manifest"] = manifest(command, {a.problem}, params, std::nullopt);
  out["report"] = cond_json(r, lsec_method_name(method));
  return out;
}

struct StructuredArgs {
  std::string problem;
  std::string struct_a = "toeplitz";
  std::string struct_b = "toeplitz";
  bool lls = false;
  WeightArgs weights;
};

json cmd_structured(StructuredArgs& a) {
  const ProblemPtr p = load(a.problem);
  const lsec_structure sa = parse_structure(a.struct_a);
  const lsec_weights* w = a.weights.resolve(dims_of(p.get()).n);
  json params = a.weights.params();
  params["struct_a"] = a.struct_a;
  json report;
  if (a.lls) {
    double kappa_s = 0.0, bound = 0.0;
    check(lsec_cond_structured_lls(p.get(), w, sa, &kappa_s, &bound));
    params["lls"] = true;
    report = {{"kappa_s", kappa_s}, {"kappa_bound", bound}, {"method", "structured_lls"},
              {"struct_a", a.struct_a}};
  } else {
    const lsec_structure sb = parse_structure(a.struct_b);
    params["struct_b"] = a.struct_b;
    lsec_cond_report r{};
    check(lsec_cond_structured(p.get(), w, sa, sb, &r));
    lsec_cond_report full{};
    check(lsec_cond(p.get(), w, LSEC_METHOD_GSVD, &full));
    report = cond_json(r, "structured");
    report["struct_a"] = a.struct_a;
    report["struct_b"] = a.struct_b;
    report["kappa_unstructured"] = full.kappa;
    report["ratio"] = r.kappa > 0.0 ? json(full.kappa / r.kappa) : json(nullptr);
  }
  json out;
  out["manifest"] = manifest("structured", {a.problem}, params, std::nullopt);
  out["report"] = report;
  return out;
}

struct EstimateArgs {
  std::string problem;
  std::string method = "pce";
  double eps = 1e-3;
  double delta = 1e-2;
  int64_t q = 2;
  std::optional<uint64_t> seed;
  bool exact = false;
  bool exact_wallis = false;
  std::string struct_a;
  std::string struct_b;
  WeightArgs weights;
};

int cmd_estimate(EstimateArgs& a, json& out) {
  const ProblemPtr p = load(a.problem);
  const lsec_weights* w = a.weights.resolve(dims_of(p.get()).n);
  const uint64_t seed = resolve_seed(a.seed);
  const bool structured = !a.struct_a.empty() || !a.struct_b.empty();
  json params = a.weights.params();
  params["method"] = a.method;
  params["exact"] = a.exact;
  int code = kOk;
  json report;

  if (a.method == "pce") {
    params["eps"] = a.eps;
    params["delta"] = a.delta;
    lsec_pce_report r{};
    std::optional<double> exact;
    if (structured) {
      const lsec_structure sa = parse_structure(a.struct_a.empty() ? "full" : a.struct_a);
      const lsec_structure sb = parse_structure(a.struct_b.empty() ? "full" : a.struct_b);
      params["struct_a"] = lsec_structure_name(sa);
      params["struct_b"] = lsec_structure_name(sb);
      check(lsec_estimate_pce_structured(p.get(), w, sa, sb, a.eps, a.delta, seed, &r));
      if (a.exact) {
        lsec_cond_report c{};
        check(lsec_cond_structured(p.get(), w, sa, sb, &c));
        exact = c.kappa;
      }
    } else {
      check(lsec_estimate_pce(p.get(), w, a.eps, a.delta, seed, &r));
      if (a.exact) {
        lsec_cond_report c{};
        check(lsec_cond(p.get(), w, LSEC_METHOD_GSVD, &c));
        exact = c.kappa;
      }
    }
    report = pce_json(r);
    if (exact) {
      report["exact"] = *exact;
      report["ratio"] = *exact > 0.0 ? json(r.kappa_hat / *exact) : json(nullptr);
    }
    if (!r.converged) code = kNonConvergence;
  } else if (a.method == "ssce") {
    if (structured) usage_error("--struct-a/--struct-b apply to --method pce only");
    params["q"] = a.q;
    params["wallis"] = a.exact_wallis ? "exact" : "approx";
    lsec_ssce_report r{};
    std::vector<double> kis(static_cast<size_t>(std::max<int64_t>(a.q, 0)));
    check(lsec_estimate_ssce(p.get(), w, a.q, seed, a.exact_wallis ? 1 : 0, &r, kis.data()));
    report["method"] = "ssce";
    report["q"] = r.q;
    report["kappa_i_sq"] = kis;
    report["kappa_hat"] = r.kappa_hat;
    report["wallis_q"] = r.wallis_q;
    report["wallis_n"] = r.wallis_n;
    if (a.exact) {
      lsec_cond_report c{};
      check(lsec_cond(p.get(), w, LSEC_METHOD_GSVD, &c));
      report["exact"] = c.kappa;
      report["ratio"] = c.kappa > 0.0 ? json(r.kappa_hat / c.kappa) : json(nullptr);
    }
  } else {
    usage_error("unknown estimator \"" + a.method + "\" (pce or ssce)");
  }

  out["manifest"] = manifest("estimate", {a.problem}, params, seed);
  out["report"] = report;
  return code;
}

struct BenchArgs {
  std::string experiment;
  std::optional<int64_t> trials;
  std::optional<uint64_t> seed;
  std::string out = ".";
  int64_t n = 100;
  std::string dims = "100,80,50";
  std::string l1 = "0,3,5";
  std::string l2 = "0,3,5";
  std::string rnorms = "1e-4,1,1e4";
  std::string sizes = "10,30,50,70,90,110,130,150,170,190,210";
  double rnorm = 1.0;
  int64_t q = 2;
  double eps = 1e-3;
  double delta = 1e-2;
};

json cmd_bench(const BenchArgs& a) {
  const uint64_t seed = resolve_seed(a.seed);
  const unsigned threads = thread_limit();
  ensure_dir(a.out);
  json params;
  params["experiment"] = a.experiment;
  char* csv_raw = nullptr;
  char* summary_raw = nullptr;
  std::string file;

  if (a.experiment == "table1") {
    const auto dims = parse_list<int64_t>(a.dims, "--dims");
    if (dims.size() != 3) usage_error("--dims takes m,n,s");
    const auto l1 = parse_list<double>(a.l1, "--l1");
    const auto l2 = parse_list<double>(a.l2, "--l2");
    const auto rn = parse_list<double>(a.rnorms, "--rnorms");
    lsec_table1_config cfg{};
    lsec_table1_config_default(&cfg);
    cfg.l1 = l1.data();
    cfg.l1_count = l1.size();
    cfg.l2 = l2.data();
    cfg.l2_count = l2.size();
    cfg.rnorms = rn.data();
    cfg.rnorm_count = rn.size();
    cfg.m = dims[0];
    cfg.n = dims[1];
    cfg.s = dims[2];
    cfg.q = a.q;
    cfg.eps = a.eps;
    cfg.delta = a.delta;
    cfg.trials = a.trials.value_or(cfg.trials);
    cfg.seed = seed;
    cfg.threads = threads;
    params.update({{"trials", cfg.trials}, {"dims", a.dims}, {"l1", a.l1}, {"l2", a.l2},
                   {"rnorms", a.rnorms}, {"q", a.q}, {"eps", a.eps}, {"delta", a.delta}});
    check(lsec_bench_table1(&cfg, &csv_raw, &summary_raw));
    file = "table1.csv";
  } else if (a.experiment == "ratio") {
    const auto rn = parse_list<double>(a.rnorms, "--rnorms");
    lsec_ratio_config cfg{};
    lsec_ratio_config_default(&cfg);
    cfg.n = a.n;
    cfg.rnorms = rn.data();
    cfg.rnorm_count = rn.size();
    cfg.trials = a.trials.value_or(cfg.trials);
    cfg.seed = seed;
    cfg.threads = threads;
    params.update({{"trials", cfg.trials}, {"n", a.n}, {"rnorms", a.rnorms}});
    check(lsec_bench_ratio(&cfg, &csv_raw, &summary_raw));
    file = "ratio_n" + std::to_string(a.n) + ".csv";
  } else if (a.experiment == "dimsweep") {
    const auto sizes = parse_list<int64_t>(a.sizes, "--sizes");
    lsec_dimsweep_config cfg{};
    lsec_dimsweep_config_default(&cfg);
    cfg.sizes = sizes.data();
    cfg.size_count = sizes.size();
    cfg.rnorm = a.rnorm;
    cfg.trials = a.trials.value_or(cfg.trials);
    cfg.seed = seed;
    cfg.threads = threads;
    params.update({{"trials", cfg.trials}, {"sizes", a.sizes}, {"rnorm", a.rnorm}});
    check(lsec_bench_dimsweep(&cfg, &csv_raw, &summary_raw));
    file = "dimsweep.csv";
  } else {
    usage_error("unknown experiment \"" + a.experiment + "\" (table1, ratio or dimsweep)");
  }
  const CString csv(csv_raw), summary(summary_raw);

  const fs::path path = fs::path(a.out) / file;
  json m = manifest("bench", {}, params, seed);
  write_text(path, csv.get());
  write_text(path.string() + ".manifest.json", m.dump(2) + "\n");

  json out;
  out["manifest"] = m;
  out["files"] = {path.string()};
  out["summary"] = json::parse(summary.get());
  return out;
}

struct GenerateArgs {
  std::string kind = "paige";
  std::string out;
  std::string dims = "100,80,50";
  int64_t n = 100;
  double l1 = 3.0;
  double l2 = 3.0;
  double rnorm = 1.0;
  std::optional<uint64_t> seed;
};

json cmd_generate(const GenerateArgs& a) {
  const uint64_t seed = resolve_seed(a.seed);
  lsec_problem* raw = nullptr;
  json params{{"kind", a.kind}, {"out", a.out}, {"rnorm", a.rnorm}};
  if (a.kind == "paige") {
    const auto dims = parse_list<int64_t>(a.dims, "--dims");
    if (dims.size() != 3) usage_error("--dims takes m,n,s");
    lsec_paige_config cfg{};
    lsec_paige_config_default(&cfg);
    cfg.m = dims[0];
    cfg.n = dims[1];
    cfg.s = dims[2];
    cfg.l1 = a.l1;
    cfg.l2 = a.l2;
    cfg.rnorm = a.rnorm;
    cfg.seed = seed;
    params.update({{"dims", a.dims}, {"l1", a.l1}, {"l2", a.l2}});
    check(lsec_generate_paige(&cfg, &raw));
  } else if (a.kind == "toeplitz") {
    params["n"] = a.n;
    check(lsec_generate_toeplitz(a.n, a.rnorm, seed, &raw));
  } else {
    usage_error("unknown generator \"" + a.kind + "\" (paige or toeplitz)");
  }
  const ProblemPtr p(raw);
  check(lsec_problem_save(p.get(), a.out.c_str()));
  const Dims d = dims_of(p.get());
  json out;
  out["manifest"] = manifest("generate", {}, params, seed);
  out["dims"] = {{"m", d.m}, {"n", d.n}, {"s", d.s}};
  out["files"] = {(fs::path(a.out) / "A.mtx").string(), (fs::path(a.out) / "B.mtx").string(),
                  (fs::path(a.out) / "b.mtx").string(), (fs::path(a.out) / "d.mtx").string()};
  return out;
}

void add_weight_flags(CLI::App* cmd, WeightArgs& w) {
  cmd->add_option("--weights", w.weights, "alpha_A,alpha_B,alpha_b,alpha_d")->capture_default_str();
  cmd->add_option("--L", w.L, "identity, e<i> (1-based) or a Matrix Market file")
      ->capture_default_str();
}

void print(const json& j) { std::cout << j.dump(2) << "\n"; }

int print_error(const std::string& kind, const std::string& message, int code) {
  json err;
  err["error"] = {{"kind", kind}, {"message", message}};
  print(err);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Condition numbers of equality-constrained least squares problems", "lse-cond"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(lsec_version()));

  SolveArgs solve;
  auto* c_solve = app.add_subcommand("solve", "Solve the LSE problem; optionally write x and r");
  c_solve->add_option("problem", solve.problem, "bundle directory or JSON manifest")->required();
  c_solve->add_option("--out", solve.out, "directory for x.mtx and r.mtx");

  CondArgs cond;
  auto* c_cond = app.add_subcommand("cond", "Exact partial condition number");
  c_cond->alias("exact");
  c_cond->add_option("problem", cond.problem, "bundle directory or JSON manifest")->required();
  c_cond->add_option("--method", cond.method, "kron|closed|gsvd|lls_closed|lls_svd|upper_bound")
      ->capture_default_str();
  add_weight_flags(c_cond, cond.weights);

  StructuredArgs st;
  auto* c_st = app.add_subcommand("structured", "Structured partial condition number");
  c_st->add_option("problem", st.problem, "bundle directory or JSON manifest")->required();
  c_st->add_option("--struct-a", st.struct_a, "toeplitz|hankel|symmetric|full")->capture_default_str();
  c_st->add_option("--struct-b", st.struct_b, "toeplitz|hankel|symmetric|full")->capture_default_str();
  c_st->add_flag("--lls", st.lls, "ordinary least squares (s = 0): value and unstructured bound");
  add_weight_flags(c_st, st.weights);

  EstimateArgs est;
  auto* c_est = app.add_subcommand("estimate", "Statistical condition estimate");
  c_est->add_option("problem", est.problem, "bundle directory or JSON manifest")->required();
  c_est->add_option("--method", est.method, "pce|ssce")->capture_default_str();
  c_est->add_option("--eps", est.eps, "PCE failure probability")->capture_default_str();
  c_est->add_option("--delta", est.delta, "PCE relative gap")->capture_default_str();
  c_est->add_option("--q", est.q, "SSCE sample count")->capture_default_str();
  c_est->add_option("--seed", est.seed, "random seed (generated and reported when absent)");
  c_est->add_flag("--exact", est.exact, "also compute the exact value and the ratio");
  c_est->add_flag("--exact-wallis", est.exact_wallis, "SSCE with exact Wallis factors");
  c_est->add_option("--struct-a", est.struct_a, "PCE on the structured operator");
  c_est->add_option("--struct-b", est.struct_b, "PCE on the structured operator");
  add_weight_flags(c_est, est.weights);

  BenchArgs bench;
  auto* c_bench = app.add_subcommand("bench", "Reproduce the experiment tables as CSV");
  c_bench->add_option("--experiment", bench.experiment, "table1|ratio|dimsweep")->required();
  c_bench->add_option("--trials", bench.trials, "trials per cell (500, 200, 50 by default)");
  c_bench->add_option("--seed", bench.seed, "random seed (generated and reported when absent)");
  c_bench->add_option("--out", bench.out, "output directory")->capture_default_str();
  c_bench->add_option("--n", bench.n, "ratio: Toeplitz order")->capture_default_str();
  c_bench->add_option("--dims", bench.dims, "table1: m,n,s")->capture_default_str();
  c_bench->add_option("--l1", bench.l1, "table1: exponents for A")->capture_default_str();
  c_bench->add_option("--l2", bench.l2, "table1: exponents for B")->capture_default_str();
  c_bench->add_option("--rnorms", bench.rnorms, "table1, ratio: residual norms")->capture_default_str();
  c_bench->add_option("--sizes", bench.sizes, "dimsweep: orders")->capture_default_str();
  c_bench->add_option("--rnorm", bench.rnorm, "dimsweep: residual norm")->capture_default_str();
  c_bench->add_option("--q", bench.q, "table1: SSCE samples")->capture_default_str();
  c_bench->add_option("--eps", bench.eps, "table1: PCE eps")->capture_default_str();
  c_bench->add_option("--delta", bench.delta, "table1: PCE delta")->capture_default_str();

  GenerateArgs gen;
  auto* c_gen = app.add_subcommand("generate", "Write a generated test problem bundle");
  c_gen->add_option("--kind", gen.kind, "paige|toeplitz")->capture_default_str();
  c_gen->add_option("--out", gen.out, "bundle directory")->required();
  c_gen->add_option("--dims", gen.dims, "paige: m,n,s")->capture_default_str();
  c_gen->add_option("--n", gen.n, "toeplitz: order")->capture_default_str();
  c_gen->add_option("--l1", gen.l1, "paige: kappa(A) = n^l1")->capture_default_str();
  c_gen->add_option("--l2", gen.l2, "paige: kappa(B) = s^l2")->capture_default_str();
  c_gen->add_option("--rnorm", gen.rnorm, "residual norm")->capture_default_str();
  c_gen->add_option("--seed", gen.seed, "random seed (generated and reported when absent)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return print_error("usage", e.what(), kUsage);
  }

  try {
    if (*c_solve) {
      print(cmd_solve(solve));
    } else if (*c_cond) {
      print(cmd_cond(cond, c_cond->get_name()));
    } else if (*c_st) {
      print(cmd_structured(st));
    } else if (*c_est) {
      json out;
      const int code = cmd_estimate(est, out);
      print(out);
      return code;
    } else if (*c_bench) {
      print(cmd_bench(bench));
    } else if (*c_gen) {
      print(cmd_generate(gen));
    }
    return kOk;
  } catch (const CliError& e) {
    return print_error(e.kind(), e.what(), e.code());
  } catch (const std::exception& e) {
    return print_error("internal", e.what(), kInternal);
  }
}
