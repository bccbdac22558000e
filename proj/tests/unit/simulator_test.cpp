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

#include <cmath>

#include <fmt/format.h>
#include <gtest/gtest.h>

#include "ccr/error.hpp"
#include "ccr/simulator.hpp"

namespace ccr::sim {
namespace {

// E[clamp(round(mu + Z))] for Z ~ N(0, s), rounding half away from zero.
double ExpectedVote(double mu, double s, int lo, int hi) {
  auto cdf = [&](double x) { return 0.5 * std::erfc(-(x - mu) / (s * std::sqrt(2.0))); };
  double e = 0.0;
  for (int k = lo; k <= hi; ++k) {
    double upper = k == hi ? 1.0 : cdf(k + 0.5);
    double lower = k == lo ? 0.0 : cdf(k - 0.5);
    e += k * (upper - lower);
  }
  return e;
}

std::map<std::string, double> Spread(int n, double top, double span) {
  std::map<std::string, double> out;
  for (int i = 0; i < n; ++i) out[fmt::format("C{:02d}", i + 1)] = top - span * i / (n - 1);
  return out;
}

TEST(Simulator, SameSeedSameVotes) {
  auto truth = Spread(10, -0.2, 1.4);
  RaterModel m{0.1, 0.7, 0.0};
  auto a = SimulateVotes(truth, 20, 30, m, 5);
  auto b = SimulateVotes(truth, 20, 30, m, 5);
  auto c = SimulateVotes(truth, 20, 30, m, 6);
  ASSERT_EQ(a.size(), 300u);
  bool same = true, differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    same = same && a[i].vote == b[i].vote && a[i].rater_id == b[i].rater_id;
    differs = differs || a[i].vote != c[i].vote;
  }
  EXPECT_TRUE(same);
  EXPECT_TRUE(differs);
}

TEST(Simulator, VotesStayOnScaleAndRotateRaters) {
  auto truth = Spread(4, 3.0, 6.0);
  auto votes = SimulateVotes(truth, 7, 50, {1.0, 2.0, 0.0}, 1);
  std::map<std::string, int> per_rater;
  for (const auto& v : votes) {
    EXPECT_GE(v.vote, -3);
    EXPECT_LE(v.vote, 3);
    ++per_rater[v.rater_id];
  }
  EXPECT_EQ(per_rater.size(), 7u);
  for (const auto& [_, n] : per_rater) EXPECT_TRUE(n == 28 || n == 29);
}

TEST(Simulator, MeanConvergesToExactExpectation) {
  std::map<std::string, double> truth = {{"a", -2.7}, {"b", -1.25}, {"c", 0.4}, {"d", 2.9}};
  const double bias_sd = 0.3, vote_sd = 0.7;
  const int votes = 40000;
  auto sim = SimulateVotes(truth, 4000, votes, {bias_sd, vote_sd, 0.0}, 99);
  auto scores = ScoreSimulated(sim);
  const double s = std::sqrt(bias_sd * bias_sd + vote_sd * vote_sd);
  for (const auto& score : scores) {
    double want = ExpectedVote(truth.at(score.condition_id), s, -3, 3);
    // Five standard errors of a mean of values with sd <= s.
    EXPECT_NEAR(score.mean, want, 5 * s / std::sqrt(votes)) << score.condition_id;
  }
}

TEST(Simulator, NoiseFreeVotesAreRoundedTruth) {
  std::map<std::string, double> truth = {{"a", -2.5}, {"b", -0.4}, {"c", 1.5}, {"d", 0.5}};
  for (const auto& v : SimulateVotes(truth, 3, 5, {0.0, 0.0, 0.0}, 0)) {
    int want = static_cast<int>(std::round(truth.at(v.condition_id)));
    EXPECT_EQ(v.vote, want);
  }
}

TEST(Simulator, RejectsBadInput) {
  auto truth = Spread(3, 0.0, 1.0);
  EXPECT_THROW(SimulateVotes(truth, 0, 10, {}, 0), InputError);
  EXPECT_THROW(SimulateVotes(truth, 3, 0, {}, 0), InputError);
  EXPECT_THROW(SimulateVotes({{"x", 4.0}}, 3, 10, {}, 0), InputError);
  EXPECT_THROW(RunReplicationExperiment(truth, {RaterModel{}}, 3, 10, 0), InputError);
}

TEST(Replication, OffsetIsRemovedByMapping) {
  auto truth = Spread(40, -0.2, 1.436);
  RaterModel base{0.1, 0.7, 0.0}, shifted{0.1, 0.7, 0.3};
  auto r = RunReplicationExperiment(truth, {base, base, shifted}, 60, 60, 4);
  ASSERT_EQ(r.scores.size(), 3u);
  EXPECT_EQ(r.pearson.size(), 3u);
  EXPECT_DOUBLE_EQ(r.pearson[1][1], 1.0);
  EXPECT_GT(r.icc, 0.5);
  EXPECT_LT(r.mean_pairwise_rmse_mapped, r.mean_pairwise_rmse);
  EXPECT_GT(r.last_run_map.intercept, -0.5);
}

TEST(Replication, IdenticalRunsAgreePerfectly) {
  auto truth = Spread(8, -0.2, 1.4);
  auto one = ScoreSimulated(SimulateVotes(truth, 10, 30, {0.1, 0.7, 0.0}, 1));
  auto r = CompareRuns({one, one, one});
  EXPECT_NEAR(r.icc, 1.0, 1e-12);
  EXPECT_NEAR(r.mean_pairwise_rmse, 0.0, 1e-12);
}

}  // namespace
}  // namespace ccr::sim
