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

#include "ccr/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "ccr/distributions.hpp"
#include "ccr/error.hpp"

namespace ccr::stats {

namespace {

void CheckPaired(std::span<const double> x, std::span<const double> y, std::size_t min_n) {
  if (x.size() != y.size())
    throw InputError(fmt::format("paired vectors differ in length ({} vs {})", x.size(), y.size()));
  if (x.size() < min_n)
    throw InputError(fmt::format("need at least {} pairs, got {}", min_n, x.size()));
}

double Mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double SampleVariance(std::span<const double> v) {
  double m = Mean(v), ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return ss / static_cast<double>(v.size() - 1);
}

double CorrelationPValue(double r, std::size_t n) {
  if (n < 3) return std::numeric_limits<double>::quiet_NaN();
  double df = static_cast<double>(n - 2);
  if (std::fabs(r) >= 1.0) return 0.0;
  double t = r * std::sqrt(df / (1.0 - r * r));
  return dist::StudentTTwoSidedP(t, df);
}

}  // namespace

CorrelationResult Pearson(std::span<const double> x, std::span<const double> y) {
  CheckPaired(x, y, 2);
  const double mx = Mean(x), my = Mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw NumericError("correlation undefined: a vector has zero variance");
  double r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  return {r, x.size(), CorrelationMethod::kPearson, CorrelationPValue(r, x.size())};
}

std::vector<double> AverageRanks(std::span<const double> values, bool descending) {
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return descending ? values[a] > values[b] : values[a] < values[b];
  });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && values[idx[j + 1]] == values[idx[i]]) ++j;
    double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

CorrelationResult Spearman(std::span<const double> x, std::span<const double> y) {
  CheckPaired(x, y, 2);
  auto rx = AverageRanks(x), ry = AverageRanks(y);
  auto result = Pearson(rx, ry);
  result.method = CorrelationMethod::kSpearman;
  return result;
}

double Rmse(std::span<const double> a, std::span<const double> b) {
  CheckPaired(a, b, 1);
  double ss = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) ss += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(ss / static_cast<double>(a.size()));
}

IccResult IccA1(const std::vector<std::vector<double>>& matrix) {
  const std::size_t n = matrix.size();
  if (n < 2) throw InputError(fmt::format("ICC needs at least 2 conditions, got {}", n));
  const std::size_t k = matrix.front().size();
  if (k < 2) throw InputError(fmt::format("ICC needs at least 2 runs, got {}", k));
  for (std::size_t i = 0; i < n; ++i) {
    if (matrix[i].size() != k)
      throw InputError(fmt::format("ICC matrix incomplete: row {} has {} of {} values", i,
                                   matrix[i].size(), k));
    for (double v : matrix[i])
      if (!std::isfinite(v)) throw InputError(fmt::format("ICC matrix row {} has a missing value", i));
  }

  const double nd = static_cast<double>(n), kd = static_cast<double>(k);
  std::vector<double> row_mean(n, 0.0), col_mean(k, 0.0);
  double grand = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      row_mean[i] += matrix[i][j] / kd;
      col_mean[j] += matrix[i][j] / nd;
      grand += matrix[i][j];
    }
  grand /= nd * kd;

  double ss_rows = 0.0, ss_cols = 0.0, ss_error = 0.0;
  for (double m : row_mean) ss_rows += kd * (m - grand) * (m - grand);
  for (double m : col_mean) ss_cols += nd * (m - grand) * (m - grand);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      double e = matrix[i][j] - row_mean[i] - col_mean[j] + grand;
      ss_error += e * e;
    }

  IccResult out;
  out.n = n;
  out.k = k;
  out.ms_rows = ss_rows / (nd - 1.0);
  out.ms_columns = ss_cols / (kd - 1.0);
  out.ms_error = ss_error / ((nd - 1.0) * (kd - 1.0));
  double denom = out.ms_rows + (kd - 1.0) * out.ms_error + kd / nd * (out.ms_columns - out.ms_error);
  if (denom == 0.0) throw NumericError("ICC undefined: matrix has no variance");
  out.icc = (out.ms_rows - out.ms_error) / denom;
  return out;
}

AnovaTable TwoWayAnova(std::span<const Observation> observations) {
  std::set<std::string> set_a, set_b;
  for (const auto& o : observations) {
    set_a.insert(o.a);
    set_b.insert(o.b);
  }
  AnovaTable table;
  table.levels_a.assign(set_a.begin(), set_a.end());
  table.levels_b.assign(set_b.begin(), set_b.end());
  const std::size_t a = table.levels_a.size(), b = table.levels_b.size();
  if (a < 2 || b < 2)
    throw InputError(fmt::format("two-way ANOVA needs >= 2 levels per factor (got {} x {})", a, b));

  auto index_of = [](const std::vector<std::string>& levels, const std::string& v) {
    return static_cast<std::size_t>(std::lower_bound(levels.begin(), levels.end(), v) -
                                    levels.begin());
  };
  std::vector<std::vector<double>> sum(a, std::vector<double>(b, 0.0));
  std::vector<std::vector<std::size_t>> count(a, std::vector<std::size_t>(b, 0));
  double grand_sum = 0.0;
  for (const auto& o : observations) {
    auto i = index_of(table.levels_a, o.a), j = index_of(table.levels_b, o.b);
    sum[i][j] += o.value;
    ++count[i][j];
    grand_sum += o.value;
  }
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t j = 0; j < b; ++j)
      if (count[i][j] == 0)
        throw InputError(fmt::format("ANOVA cell ({}, {}) is empty", table.levels_a[i],
                                     table.levels_b[j]));

  std::vector<std::vector<double>> cell(a, std::vector<double>(b));
  double inv_sum = 0.0;
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t j = 0; j < b; ++j) {
      cell[i][j] = sum[i][j] / static_cast<double>(count[i][j]);
      inv_sum += 1.0 / static_cast<double>(count[i][j]);
      if (count[i][j] != count[0][0]) table.balanced = false;
    }
  const double ad = static_cast<double>(a), bd = static_cast<double>(b);
  // Harmonic mean cell size; equals the common size for balanced data.
  const double nh = table.balanced ? static_cast<double>(count[0][0]) : ad * bd / inv_sum;

  std::vector<double> mean_a(a, 0.0), mean_b(b, 0.0);
  double grand = 0.0;
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t j = 0; j < b; ++j) {
      mean_a[i] += cell[i][j] / bd;
      mean_b[j] += cell[i][j] / ad;
      grand += cell[i][j] / (ad * bd);
    }

  double ss_a = 0.0, ss_b = 0.0, ss_ab = 0.0, ss_e = 0.0, ss_t = 0.0;
  for (double m : mean_a) ss_a += (m - grand) * (m - grand);
  for (double m : mean_b) ss_b += (m - grand) * (m - grand);
  ss_a *= nh * bd;
  ss_b *= nh * ad;
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t j = 0; j < b; ++j) {
      double e = cell[i][j] - mean_a[i] - mean_b[j] + grand;
      ss_ab += e * e;
    }
  ss_ab *= nh;

  const double overall = grand_sum / static_cast<double>(observations.size());
  for (const auto& o : observations) {
    auto i = index_of(table.levels_a, o.a), j = index_of(table.levels_b, o.b);
    ss_e += (o.value - cell[i][j]) * (o.value - cell[i][j]);
    ss_t += (o.value - overall) * (o.value - overall);
  }

  const double df_e = static_cast<double>(observations.size()) - ad * bd;
  if (df_e <= 0.0)
    throw NumericError("two-way ANOVA has no residual degrees of freedom (one observation per cell)");

  table.residual = {ss_e, df_e, ss_e / df_e, 0.0, 1.0};
  auto effect = [&](double ss, double df) {
    AnovaRow row{ss, df, ss / df, 0.0, 1.0};
    if (table.residual.ms > 0.0) {
      row.f = row.ms / table.residual.ms;
      row.p = dist::FSurvival(row.f, df, df_e);
    } else if (row.ms > 0.0) {
      row.f = std::numeric_limits<double>::infinity();
      row.p = 0.0;
    }
    return row;
  };
  table.factor_a = effect(ss_a, ad - 1.0);
  table.factor_b = effect(ss_b, bd - 1.0);
  table.interaction = effect(ss_ab, (ad - 1.0) * (bd - 1.0));
  table.ss_total = ss_t;
  return table;
}

WelchResult WelchTTest(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw InputError("Welch t-test needs >= 2 values per group");
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  const double va = SampleVariance(a) / na, vb = SampleVariance(b) / nb;
  const double diff = Mean(a) - Mean(b);
  const double se2 = va + vb;
  WelchResult out;
  if (se2 == 0.0) {
    out.df = na + nb - 2.0;
    if (diff == 0.0) {
      out.t = 0.0;
      out.p = 1.0;
    } else {
      out.t = std::copysign(std::numeric_limits<double>::infinity(), diff);
      out.p = 0.0;
    }
    return out;
  }
  out.t = diff / std::sqrt(se2);
  out.df = se2 * se2 / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
  out.p = dist::StudentTTwoSidedP(out.t, out.df);
  return out;
}

SignificanceMatrix BonferroniPairwise(const std::map<std::string, std::vector<double>>& groups,
                                      double alpha) {
  if (groups.size() < 2) throw InputError("pairwise comparison needs at least 2 groups");
  for (const auto& [level, values] : groups)
    if (values.size() < 2)
      throw InputError(fmt::format("group '{}' has {} values, need >= 2", level, values.size()));

  SignificanceMatrix m;
  for (const auto& [level, _] : groups) m.levels.push_back(level);
  const std::size_t g = m.levels.size();
  m.verdict.assign(g, std::vector<std::optional<bool>>(g));
  m.alpha = alpha;
  const double comparisons = static_cast<double>(g * (g - 1) / 2);
  m.corrected_alpha = alpha / comparisons;
  for (std::size_t i = 0; i < g; ++i)
    for (std::size_t j = i + 1; j < g; ++j) {
      auto test = WelchTTest(groups.at(m.levels[i]), groups.at(m.levels[j]));
      bool sig = test.p < m.corrected_alpha;
      m.verdict[i][j] = m.verdict[j][i] = sig;
      m.tests.push_back({m.levels[i], m.levels[j], test, sig});
    }
  return m;
}

LinearMap FitLinearMap(std::span<const double> source, std::span<const double> target) {
  CheckPaired(source, target, 2);
  const double mx = Mean(source), my = Mean(target);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < source.size(); ++i) {
    sxy += (source[i] - mx) * (target[i] - my);
    sxx += (source[i] - mx) * (source[i] - mx);
  }
  if (sxx == 0.0) throw NumericError("linear map undefined: source is constant");
  LinearMap map;
  map.slope = sxy / sxx;
  map.intercept = my - map.slope * mx;
  map.rmse_before = Rmse(source, target);
  std::vector<double> mapped(source.size());
  for (std::size_t i = 0; i < source.size(); ++i) mapped[i] = map.Apply(source[i]);
  map.rmse_after = Rmse(mapped, target);
  return map;
}

double MeanPairwiseRmse(const std::vector<std::vector<double>>& columns) {
  if (columns.size() < 2) throw InputError("pairwise RMSE needs at least 2 columns");
  double total = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < columns.size(); ++i)
    for (std::size_t j = i + 1; j < columns.size(); ++j) {
      total += Rmse(columns[i], columns[j]);
      ++pairs;
    }
  return total / static_cast<double>(pairs);
}

std::vector<RankDelta> RankOrderDelta(const std::map<std::string, double>& scores_a,
                                      const std::map<std::string, double>& scores_b) {
  if (scores_a.size() != scores_b.size() ||
      !std::equal(scores_a.begin(), scores_a.end(), scores_b.begin(),
                  [](const auto& x, const auto& y) { return x.first == y.first; }))
    throw InputError("rank-order delta needs identical condition sets");
  std::vector<double> a, b;
  for (const auto& [_, v] : scores_a) a.push_back(v);
  for (const auto& [_, v] : scores_b) b.push_back(v);
  auto ra = AverageRanks(a, true), rb = AverageRanks(b, true);
  std::vector<RankDelta> out;
  std::size_t i = 0;
  for (const auto& [id, _] : scores_a) {
    out.push_back({id, ra[i], rb[i], ra[i] - rb[i]});
    ++i;
  }
  return out;
}

CorrelationResult DeltaDimensionCorrelation(const std::map<std::string, double>& deltas,
                                            const std::map<std::string, double>& dimension) {
  std::vector<double> x, y;
  for (const auto& [id, d] : deltas) {
    auto it = dimension.find(id);
    if (it == dimension.end())
      throw InputError(fmt::format("dimension scores lack condition '{}'", id));
    x.push_back(d);
    y.push_back(it->second);
  }
  if (dimension.size() != deltas.size())
    throw InputError("dimension scores cover conditions without a rank delta");
  return Pearson(x, y);
}

double ConclusionAgreement(const std::vector<SignificanceMatrix>& runs) {
  if (runs.empty()) throw InputError("conclusion agreement needs at least one run");
  const auto& levels = runs.front().levels;
  for (const auto& r : runs)
    if (r.levels != levels) throw InputError("significance matrices cover different level sets");
  const std::size_t g = levels.size();
  if (g < 2) throw InputError("conclusion agreement needs at least 2 levels");
  std::size_t agree = 0, total = 0;
  for (std::size_t i = 0; i < g; ++i)
    for (std::size_t j = i + 1; j < g; ++j) {
      ++total;
      bool same = true;
      for (const auto& r : runs) same = same && r.verdict[i][j] == runs.front().verdict[i][j];
      if (same) ++agree;
    }
  return static_cast<double>(agree) / static_cast<double>(total);
}

}  // namespace ccr::stats
