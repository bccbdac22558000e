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
#include <random>

#include <gtest/gtest.h>

#include "ccr/csv.hpp"
#include "ccr/error.hpp"
#include "ccr/rng.hpp"
#include "ccr/scoring.hpp"
#include "oracles.hpp"

namespace ccr {
namespace {

constexpr auto kR = PresentationOrder::kReferenceFirst;
constexpr auto kP = PresentationOrder::kProcessedFirst;

TEST(CorrectVote, ExhaustiveProperties) {
  for (int v = -3; v <= 3; ++v) {
    EXPECT_EQ(CorrectVote(v, kR), v);
    EXPECT_EQ(CorrectVote(v, kP), -v);
    for (auto o : {kR, kP}) EXPECT_EQ(CorrectVote(CorrectVote(v, o), o), v);
  }
  EXPECT_EQ(CorrectVote(0, kP), 0);
  EXPECT_THROW(CorrectVote(1, std::nullopt), UsageError);
  EXPECT_THROW(CorrectVote(4, kR), InputError);
}

TEST(Aggregate, SpecExamples) {
  std::vector<int> two = {-3, -1};
  auto s = AggregateCondition(two, "c");
  EXPECT_DOUBLE_EQ(s.mean, -2.0);
  EXPECT_NEAR(s.sd, std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(s.ci95, 12.706 * std::sqrt(2.0) / std::sqrt(2.0), 1e-3);

  std::vector<int> one = {2};
  auto single = AggregateCondition(one, "c");
  EXPECT_EQ(single.n, 1);
  EXPECT_EQ(single.sd, 0.0);
  EXPECT_EQ(single.ci95, 0.0);
  EXPECT_THROW(AggregateCondition(std::span<const int>(), "c"), InputError);
}

TEST(Aggregate, CiShrinksWithMoreVotesAtFixedSd) {
  // Alternating -1, +1 keeps sd close to 1; compare against the exact
  // t-quantile-over-root-n sequence.
  double previous = 1e9;
  for (int n = 2; n <= 200; n += 2) {
    std::vector<int> v;
    for (int i = 0; i < n; ++i) v.push_back(i % 2 ? 1 : -1);
    auto s = AggregateCondition(v, "c");
    double per_sd = s.ci95 / s.sd;
    EXPECT_LT(per_sd, previous) << n;
    previous = per_sd;
  }
}

TEST(Aggregate, MomentsMergeLikeOnePass) {
  Rng rng(5);
  std::vector<int> all;
  VoteMoments left, right;
  for (int i = 0; i < 101; ++i) {
    int v = static_cast<int>(rng.Index(7)) - 3;
    all.push_back(v);
    (i % 3 ? left : right).Add(v);
  }
  auto merged = ScoreFromMoments(left.Merge(right), "c");
  auto direct = AggregateCondition(all, "c");
  EXPECT_NEAR(merged.mean, direct.mean, 1e-12);
  EXPECT_NEAR(merged.sd, direct.sd, 1e-12);
  std::vector<double> as_double(all.begin(), all.end());
  EXPECT_NEAR(direct.mean, oracle::Mean(as_double), 1e-12);
}

TEST(Normalize, MapsBoundsToUnitInterval) {
  EXPECT_DOUBLE_EQ(NormalizeMeanScore(-3, -3, 0), 0.0);
  EXPECT_DOUBLE_EQ(NormalizeMeanScore(0, -3, 0), 1.0);
  EXPECT_DOUBLE_EQ(NormalizeMeanScore(3, 1, 5), 0.5);
  auto b = ScaleBounds(RatingScale::Ccr(), Orientation::kDegradation);
  EXPECT_EQ(b, std::make_pair(-3.0, 0.0));
  EXPECT_EQ(ScaleBounds(RatingScale::Acr(), Orientation::kProcessedVsReference),
            std::make_pair(1.0, 5.0));
}

TEST(Sos, RecoversPlantedParameterExactly) {
  std::vector<std::pair<double, double>> data;
  for (double x = 1.1; x < 5.0; x += 0.3) data.emplace_back(x, std::sqrt(0.2 * (x - 1) * (5 - x)));
  auto fit = FitSos(data, 1, 5);
  EXPECT_NEAR(fit.a, 0.2, 1e-12);
  EXPECT_NEAR(fit.rmse, 0.0, 1e-12);
}

TEST(Sos, MatchesGridOracleOnNoisyData) {
  Rng rng(77);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<std::pair<double, double>> data;
    for (int i = 0; i < 30; ++i) {
      double x = -3 + 3 * rng.Uniform01();
      double sd2 = std::max(0.0, 0.25 * (x + 3) * (0 - x) + 0.1 * rng.Normal());
      data.emplace_back(x, std::sqrt(sd2));
    }
    auto fit = FitSos(data, -3, 0);
    double grid = oracle::SosGridOracle(data, -3, 0, 2.0);
    EXPECT_NEAR(fit.a, grid, 1e-6);
    EXPECT_LE(SosObjective(data, -3, 0, fit.a), SosObjective(data, -3, 0, grid) + 1e-12);
  }
}

TEST(Sos, LocallyOptimalAndRejectsDegenerateInput) {
  std::vector<std::pair<double, double>> data = {{1.1, 1.5}, {3.0, 0.2}, {4.9, 1.5}, {2.0, 0.9}};
  auto fit = FitSos(data, 1, 5);
  for (double d : {-1e-3, -1e-6, 1e-6, 1e-3})
    EXPECT_LT(SosObjective(data, 1, 5, fit.a), SosObjective(data, 1, 5, fit.a + d));
  std::vector<std::pair<double, double>> flat = {{2.0, 0.0}, {3.0, 0.0}};
  EXPECT_EQ(FitSos(flat, 1, 5).a, 0.0);
  std::vector<std::pair<double, double>> edge = {{1.0, 0.0}, {5.0, 0.0}, {3.0, 1.0}};
  EXPECT_THROW(FitSos(edge, 1, 5), NumericError);
}

TEST(ScoreVotes, CorrectsPoolsAndFilters) {
  std::vector<VoteRow> votes = {
      {"w1", "a1", "t1", "c1", -2, kR}, {"w1", "a1", "t2", "c1", 2, kP},
      {"w2", "a2", "t1", "c1", 1, kP},  {"w3", "a3", "t3", "c2", 0, kR},
      {"w4", "a4", "t3", "c2", 3, kR}};
  auto all = ScoreVotes(votes, ScaleKind::kCcr);
  ASSERT_EQ(all.conditions.size(), 2u);
  EXPECT_EQ(all.conditions[0].condition_id, "c1");
  EXPECT_DOUBLE_EQ(all.conditions[0].mean, (-2 - 2 - 1) / 3.0);
  EXPECT_EQ(all.trials.size(), 3u);

  std::set<std::pair<std::string, std::string>> accepted = {{"w1", "a1"}, {"w3", "a3"}};
  auto some = ScoreVotes(votes, ScaleKind::kCcr, &accepted);
  EXPECT_EQ(some.conditions[0].n, 2);
  EXPECT_EQ(some.conditions[1].n, 1);

  std::vector<VoteRow> unordered = {{"w", "a", "t", "c", 1, std::nullopt}};
  EXPECT_THROW(ScoreVotes(unordered, ScaleKind::kCcr), InputError);
  auto acr = ScoreVotes(unordered, ScaleKind::kAcr);
  EXPECT_DOUBLE_EQ(acr.conditions[0].mean, 1.0);
}

TEST(ScoreVotes, CsvRoundTrip) {
  std::vector<VoteRow> votes = {{"w1", "a1", "t1", "c1", -2, kR}, {"w2", "a2", "t2", "c1", 3, kP}};
  auto back = ParseVotes(csv::Parse(VotesCsv(votes)));
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].order, kP);
  EXPECT_EQ(back[1].rating, 3);

  auto scores = ScoreVotes(votes, ScaleKind::kCcr).conditions;
  auto parsed = ParseConditionScores(csv::Parse(ConditionScoresCsv(scores)));
  ASSERT_EQ(parsed.size(), 1u);
  EXPECT_NEAR(parsed[0].mean, scores[0].mean, 1e-6);
  EXPECT_EQ(parsed[0].n, 2);

  auto minimal = ParseConditionScores(csv::Parse("condition_id,mean\nx,1.5\n"));
  EXPECT_DOUBLE_EQ(minimal[0].mean, 1.5);
  EXPECT_THROW(ParseConditionScores(csv::Parse("condition,mean\nx,1\n")), InputError);
  EXPECT_THROW(ParseVotes(csv::Parse("worker_id,assignment_id,trial_id,condition_id,rating,order\n"
                                     "w,a,t,c,seven,R_FIRST\n")),
               InputError);
}

}  // namespace
}  // namespace ccr
