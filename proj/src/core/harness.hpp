// Copyright The lse-cond Authors
// SPDX-License-Identifier: Apache-2.0

// Seeded test-problem generators and the experiment runners behind
// `lse-cond bench`. Trials derive their random streams from (seed, cell,
// trial), so every table is identical for any thread count.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/estimators.hpp"

namespace lsecond {

struct PaigeConfig {
  Index m = 100;
  Index n = 80;
  Index s = 50;
  double l1 = 3.0;
  double l2 = 3.0;
  double rnorm = 1.0;
  std::uint64_t seed = 0;
};

struct GeneratedProblem {
  LseProblem problem;
  Vector x;  // planted solution (1, 4, 9, ..., n^2)
  Vector r;  // planted residual, orthogonal to range(AP)
};

// A = U1 [D1; 0] V1 and B = U2 [D2 0] V2 with Householder U_i, V_i and
// D1 = diag(((n - i) / n)^l1), D2 = diag(((s - i) / s)^l2), so
// kappa(A) = n^l1 and kappa(B) = s^l2.
GeneratedProblem gen_paige(const PaigeConfig& cfg);

// Square Gaussian Toeplitz A, B of order n (redrawn up to 10 times when the
// pair violates the rank assumptions).
GeneratedProblem gen_toeplitz_pair(Index n, double rnorm, std::uint64_t seed);

struct ExperimentStats {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  Index samples = 0;
  double min = 0.0;
  double median = 0.0;
  double max = 0.0;
};

ExperimentStats summarize(std::vector<double> values);

struct Table1Config {
  std::vector<double> l1 = {0, 3, 5};
  std::vector<double> l2 = {0, 3, 5};
  std::vector<double> rnorms = {1e-4, 1, 1e4};
  Index trials = 500;
  Index m = 100;
  Index n = 80;
  Index s = 50;
  Index q = kDefaultSsceSamples;
  double eps = kDefaultPceEps;
  double delta = kDefaultPceDelta;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct Table1Cell {
  double l1 = 0.0;
  double l2 = 0.0;
  double rnorm = 0.0;
  ExperimentStats ssce;
  ExperimentStats pce;
  std::vector<double> ssce_ratios;
  std::vector<double> pce_ratios;
  Index pce_not_converged = 0;
};

std::vector<Table1Cell> run_table1(const Table1Config& cfg);
// Columns l1,l2,rnorm,estimator,mean,variance; two rows per cell.
std::string table1_csv(const std::vector<Table1Cell>& cells);

struct RatioConfig {
  Index n = 100;
  std::vector<double> rnorms = {1e-4, 1, 1e4};
  Index trials = 200;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

struct RatioSample {
  Index trial = 0;
  double rnorm = 0.0;
  double kappa = 0.0;
  double kappa_s = 0.0;
  double ratio = 0.0;
};

// kappa / kappa^S for Toeplitz pairs with L = I and unit weights.
std::vector<RatioSample> run_ratio_experiment(const RatioConfig& cfg);
// Columns trial,rnorm,ratio.
std::string ratio_csv(const std::vector<RatioSample>& samples);

struct DimSweepConfig {
  std::vector<Index> sizes = {10, 30, 50, 70, 90, 110, 130, 150, 170, 190, 210};
  Index trials = 50;
  double rnorm = 1.0;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

struct DimSweepRow {
  Index n = 0;
  ExperimentStats stats;
};

std::vector<DimSweepRow> run_dimension_sweep(const DimSweepConfig& cfg);
// Columns n,mean,variance.
std::string dimsweep_csv(const std::vector<DimSweepRow>& rows);

// %.17g
std::string format_double(double v);

}  // namespace lsecond
