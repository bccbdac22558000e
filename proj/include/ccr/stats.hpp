// Copyright 2026 The ccrkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ccr::stats {

enum class CorrelationMethod { kPearson, kSpearman };

struct CorrelationResult {
  double r = 0.0;
  std::size_t n = 0;
  CorrelationMethod method = CorrelationMethod::kPearson;
  double p_value = 1.0;  // two-sided, t with n-2 df; NaN when n < 3
};

/// Product-moment correlation. Throws NumericError when either vector has
/// zero variance, InputError on length mismatch or fewer than two pairs.
CorrelationResult Pearson(std::span<const double> x, std::span<const double> y);

/// Pearson on average ranks (ties share the mean of their positions).
CorrelationResult Spearman(std::span<const double> x, std::span<const double> y);

/// Rank 1 = smallest value, or largest with `descending`; ties averaged.
std::vector<double> AverageRanks(std::span<const double> values, bool descending = false);

double Rmse(std::span<const double> a, std::span<const double> b);

struct IccResult {
  double icc = 0.0;
  std::size_t n = 0;  // subjects (conditions)
  std::size_t k = 0;  // raters (runs)
  double ms_rows = 0.0;
  double ms_columns = 0.0;
  double ms_error = 0.0;
};

/// ICC(A,1): single measure, absolute agreement, two-way model, computed
/// from the row/column/residual mean squares of an n x k matrix
/// (matrix[i][j] = score of condition i in run j).
IccResult IccA1(const std::vector<std::vector<double>>& matrix);

struct Observation {
  std::string a;
  std::string b;
  double value = 0.0;
};

struct AnovaRow {
  double ss = 0.0;
  double df = 0.0;
  double ms = 0.0;
  double f = 0.0;
  double p = 1.0;
};

struct AnovaTable {
  std::vector<std::string> levels_a;
  std::vector<std::string> levels_b;
  AnovaRow factor_a;
  AnovaRow factor_b;
  AnovaRow interaction;
  AnovaRow residual;
  double ss_total = 0.0;
  bool balanced = true;
};

/// Two-way fixed-effects ANOVA with interaction. Balanced designs use the
/// classical decomposition; unbalanced ones the unweighted-means method
/// (cell means weighted by the harmonic mean cell size), for which the SS
/// identity holds only approximately. Throws InputError naming an empty
/// cell, and NumericError when no residual degrees of freedom remain.
AnovaTable TwoWayAnova(std::span<const Observation> observations);

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;
};

WelchResult WelchTTest(std::span<const double> a, std::span<const double> b);

struct PairwiseTest {
  std::string a;
  std::string b;
  WelchResult test;
  bool significant = false;
};

struct SignificanceMatrix {
  std::vector<std::string> levels;
  // verdict[i][j] for i != j; the diagonal stays empty.
  std::vector<std::vector<std::optional<bool>>> verdict;
  std::vector<PairwiseTest> tests;
  double alpha = 0.05;
  double corrected_alpha = 0.05;
};

/// Welch t-test for every unordered pair of groups; a pair is significant
/// iff p < alpha / C(m, 2).
SignificanceMatrix BonferroniPairwise(const std::map<std::string, std::vector<double>>& groups,
                                      double alpha);

struct LinearMap {
  double slope = 1.0;
  double intercept = 0.0;
  double rmse_before = 0.0;
  double rmse_after = 0.0;

  double Apply(double x) const { return slope * x + intercept; }
};

/// Least-squares first-order mapping of `source` onto `target`.
LinearMap FitLinearMap(std::span<const double> source, std::span<const double> target);

/// Mean of the RMSEs over all unordered pairs of columns.
double MeanPairwiseRmse(const std::vector<std::vector<double>>& columns);

struct RankDelta {
  std::string condition_id;
  double rank_a = 0.0;
  double rank_b = 0.0;
  double delta = 0.0;  // rank_a - rank_b
};

/// Ranks both score maps with rank 1 = best (highest) quality, ties averaged.
/// Throws InputError when the condition sets differ.
std::vector<RankDelta> RankOrderDelta(const std::map<std::string, double>& scores_a,
                                      const std::map<std::string, double>& scores_b);

CorrelationResult DeltaDimensionCorrelation(const std::map<std::string, double>& deltas,
                                            const std::map<std::string, double>& dimension);

/// Fraction of level pairs on which every run reaches the same verdict.
double ConclusionAgreement(const std::vector<SignificanceMatrix>& runs);

}  // namespace ccr::stats
