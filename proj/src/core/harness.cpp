// Copyright The lse-cond Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "core/dense.hpp"
#include "core/parallel.hpp"
#include "core/rng.hpp"

namespace lsecond {

namespace {

// (I - 2 u u^T) M for unit u.
Matrix reflect_rows(const Vector& u, Matrix M) {
  M.noalias() -= 2.0 * u * (u.transpose() * M);
  return M;
}

// M (I - 2 v v^T) for unit v.
Matrix reflect_cols(Matrix M, const Vector& v) {
  M.noalias() -= 2.0 * (M * v) * v.transpose();
  return M;
}

Vector planted_x(Index n) {
  Vector x(n);
  for (Index i = 0; i < n; ++i) x(i) = static_cast<double>((i + 1) * (i + 1));
  return x;
}

// Random residual of norm rnorm orthogonal to range(A P).
Vector planted_residual(Rng& rng, const Matrix& A, const Matrix& B, double rnorm) {
  const Index m = A.rows(), n = A.cols(), s = B.rows();
  Vector r = gaussian_vector(rng, m);
  if (rnorm == 0.0) return Vector::Zero(m);
  const Index rank = n - s;
  if (rank > 0) {
    const Matrix AP = A * null_projector(B);
    const Matrix Q = dense::svd(AP, dense::SvdVectors::thin).U.leftCols(rank);
    for (int pass = 0; pass < 2; ++pass) r -= Q * (Q.transpose() * r);
  }
  return r * (rnorm / r.norm());
}

GeneratedProblem assemble(Matrix A, Matrix B, Rng& rng, double rnorm) {
  GeneratedProblem out;
  out.x = planted_x(A.cols());
  out.r = planted_residual(rng, A, B, rnorm);
  Vector b = A * out.x + out.r;
  Vector d = B * out.x;
  out.problem = LseProblem(std::move(A), std::move(B), std::move(b), std::move(d));
  return out;
}

double mean_of(const std::vector<double>& v) {
  double sum = 0.0;
  for (const double x : v) sum += x;
  return v.empty() ? 0.0 : sum / static_cast<double>(v.size());
}

unsigned resolve_threads(unsigned threads) { return threads == 0 ? default_threads() : threads; }

}  // namespace

GeneratedProblem gen_paige(const PaigeConfig& cfg) {
  const Index m = cfg.m, n = cfg.n, s = cfg.s;
  if (!(m >= n && n >= s && s >= 1))
    throw Error(ErrorKind::shape, "generator needs m >= n >= s >= 1");
  if (cfg.rnorm < 0.0 || cfg.l1 < 0.0 || cfg.l2 < 0.0)
    throw Error(ErrorKind::domain, "generator needs nonnegative l1, l2 and rnorm");

  Rng rng = make_rng(cfg.seed);
  const Vector u1 = unit_vector(rng, m);
  const Vector v1 = unit_vector(rng, n);
  const Vector u2 = unit_vector(rng, s);
  const Vector v2 = unit_vector(rng, n);

  Matrix A = Matrix::Zero(m, n);
  for (Index i = 0; i < n; ++i)
    A(i, i) = std::pow(static_cast<double>(n - i) / static_cast<double>(n), cfg.l1);
  Matrix B = Matrix::Zero(s, n);
  for (Index i = 0; i < s; ++i)
    B(i, i) = std::pow(static_cast<double>(s - i) / static_cast<double>(s), cfg.l2);

  A = reflect_cols(reflect_rows(u1, std::move(A)), v1);
  B = reflect_cols(reflect_rows(u2, std::move(B)), v2);
  return assemble(std::move(A), std::move(B), rng, cfg.rnorm);
}

GeneratedProblem gen_toeplitz_pair(Index n, double rnorm, std::uint64_t seed) {
  if (n < 2) throw Error(ErrorKind::shape, "Toeplitz pair needs n >= 2");
  if (rnorm < 0.0) throw Error(ErrorKind::domain, "rnorm must be nonnegative");
  const StructureMatrix toeplitz(StructureSpec{StructureKind::toeplitz, n, n});
  constexpr int kMaxDraws = 11;
  for (int draw = 0; draw < kMaxDraws; ++draw) {
    Rng rng = make_rng(seed, {static_cast<std::uint64_t>(draw)});
    Matrix A = embed(toeplitz, gaussian_vector(rng, toeplitz.params()));
    Matrix B = embed(toeplitz, gaussian_vector(rng, toeplitz.params()));
    if (!check_assumptions(A, B).ok) continue;
    return assemble(std::move(A), std::move(B), rng, rnorm);
  }
  throw Error(ErrorKind::generator, "no Toeplitz pair satisfying the rank assumptions after " +
                                        std::to_string(kMaxDraws) + " draws");
}

ExperimentStats summarize(std::vector<double> values) {
  ExperimentStats st;
  st.samples = static_cast<Index>(values.size());
  if (values.empty()) return st;
  st.mean = mean_of(values);
  double ss = 0.0;
  for (const double v : values) ss += (v - st.mean) * (v - st.mean);
  st.variance = values.size() > 1 ? ss / static_cast<double>(values.size() - 1) : 0.0;
  std::sort(values.begin(), values.end());
  st.min = values.front();
  st.max = values.back();
  const size_t mid = values.size() / 2;
  st.median = values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
  return st;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<Table1Cell> run_table1(const Table1Config& cfg) {
  if (cfg.trials < 1) throw Error(ErrorKind::domain, "trials must be at least 1");
  std::vector<Table1Cell> cells;
  for (const double l1 : cfg.l1)
    for (const double l2 : cfg.l2)
      for (const double rnorm : cfg.rnorms) {
        Table1Cell cell;
        cell.l1 = l1;
        cell.l2 = l2;
        cell.rnorm = rnorm;
        cells.push_back(cell);
      }

  const size_t trials = static_cast<size_t>(cfg.trials);
  std::vector<double> ssce(cells.size() * trials), pce(cells.size() * trials);
  std::vector<char> converged(cells.size() * trials);
  const ConditionWeights weights;

  parallel_for(cells.size() * trials, resolve_threads(cfg.threads), [&](size_t idx) {
    const size_t c = idx / trials, t = idx % trials;
    const std::uint64_t trial_seed = derive_seed(cfg.seed, {c, t});
    PaigeConfig pc{cfg.m, cfg.n, cfg.s, cells[c].l1, cells[c].l2, cells[c].rnorm, trial_seed};
    const GeneratedProblem gen = gen_paige(pc);
    const LseSolution sol = solve_lse(gen.problem);
    const double exact = cond_exact_gsvd(gen.problem, sol, weights).kappa;
    const SsceReport s = ssce_estimate(gen.problem, sol, weights, cfg.q,
                                       derive_seed(trial_seed, {1}));
    const PceReport p = estimate_condition_pce(gen.problem, sol, weights, cfg.eps, cfg.delta,
                                               derive_seed(trial_seed, {2}));
    ssce[idx] = s.kappa_hat / exact;
    pce[idx] = p.kappa_hat / exact;
    converged[idx] = p.converged ? 1 : 0;
  });

  for (size_t c = 0; c < cells.size(); ++c) {
    auto& cell = cells[c];
    cell.ssce_ratios.assign(ssce.begin() + c * trials, ssce.begin() + (c + 1) * trials);
    cell.pce_ratios.assign(pce.begin() + c * trials, pce.begin() + (c + 1) * trials);
    cell.pce_not_converged = std::count(converged.begin() + c * trials,
                                        converged.begin() + (c + 1) * trials, 0);
    cell.ssce = summarize(cell.ssce_ratios);
    cell.pce = summarize(cell.pce_ratios);
  }
  return cells;
}

std::string table1_csv(const std::vector<Table1Cell>& cells) {
  std::ostringstream out;
  out << "l1,l2,rnorm,estimator,mean,variance\n";
  for (const auto& c : cells) {
    const std::string key =
        format_double(c.l1) + "," + format_double(c.l2) + "," + format_double(c.rnorm) + ",";
    out << key << "ssce," << format_double(c.ssce.mean) << "," << format_double(c.ssce.variance)
        << "\n";
    out << key << "pce," << format_double(c.pce.mean) << "," << format_double(c.pce.variance)
        << "\n";
  }
  return out.str();
}

namespace {

RatioSample ratio_trial(Index n, double rnorm, std::uint64_t seed) {
  const GeneratedProblem gen = gen_toeplitz_pair(n, rnorm, seed);
  const ConditionWeights weights;
  const StructureSpec toeplitz{StructureKind::toeplitz, n, n};
  RatioSample sample;
  sample.rnorm = rnorm;
  sample.kappa = cond_exact_gsvd(gen.problem, weights).kappa;
  sample.kappa_s = cond_structured(gen.problem, weights, toeplitz, toeplitz).kappa;
  sample.ratio = sample.kappa / sample.kappa_s;
  return sample;
}

}  // namespace

std::vector<RatioSample> run_ratio_experiment(const RatioConfig& cfg) {
  if (cfg.trials < 1) throw Error(ErrorKind::domain, "trials must be at least 1");
  const size_t trials = static_cast<size_t>(cfg.trials);
  std::vector<RatioSample> out(cfg.rnorms.size() * trials);
  parallel_for(out.size(), resolve_threads(cfg.threads), [&](size_t idx) {
    const size_t k = idx / trials, t = idx % trials;
    out[idx] = ratio_trial(cfg.n, cfg.rnorms[k], derive_seed(cfg.seed, {k, t}));
    out[idx].trial = static_cast<Index>(t);
  });
  return out;
}

std::string ratio_csv(const std::vector<RatioSample>& samples) {
  std::ostringstream out;
  out << "trial,rnorm,ratio\n";
  for (const auto& s : samples)
    out << s.trial << "," << format_double(s.rnorm) << "," << format_double(s.ratio) << "\n";
  return out.str();
}

std::vector<DimSweepRow> run_dimension_sweep(const DimSweepConfig& cfg) {
  if (cfg.trials < 1) throw Error(ErrorKind::domain, "trials must be at least 1");
  const size_t trials = static_cast<size_t>(cfg.trials);
  std::vector<double> ratios(cfg.sizes.size() * trials);
  parallel_for(ratios.size(), resolve_threads(cfg.threads), [&](size_t idx) {
    const size_t k = idx / trials, t = idx % trials;
    const Index n = cfg.sizes[k];
    ratios[idx] = ratio_trial(n, cfg.rnorm,
                              derive_seed(cfg.seed, {static_cast<std::uint64_t>(n), t}))
                      .ratio;
  });
  std::vector<DimSweepRow> rows;
  for (size_t k = 0; k < cfg.sizes.size(); ++k)
    rows.push_back({cfg.sizes[k], summarize(std::vector<double>(ratios.begin() + k * trials,
                                                                ratios.begin() + (k + 1) * trials))});
  return rows;
}

std::string dimsweep_csv(const std::vector<DimSweepRow>& rows) {
  std::ostringstream out;
  out << "n,mean,variance\n";
  for (const auto& r : rows)
    out << r.n << "," << format_double(r.stats.mean) << "," << format_double(r.stats.variance)
        << "\n";
  return out.str();
}

}  // namespace lsecond
