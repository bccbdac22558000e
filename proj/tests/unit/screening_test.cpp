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

#include <algorithm>

#include <gtest/gtest.h>

#include "ccr/csv.hpp"
#include "ccr/error.hpp"
#include "ccr/rng.hpp"
#include "ccr/screening.hpp"
#include "test_util.hpp"

namespace ccr {
namespace {

AnswerKeys Keys(const StudyConfig& config) {
  return ParseAnswerKeys(csv::Parse("test_id,item_id,expected\n"
                                    "device,d1,left\n"
                                    "environment,e1,3\nenvironment,e2,5\nenvironment,e3,1\n"
                                    "environment,e4,4\nenvironment,e5,2\n"
                                    "hearing,h1,2\nhearing,h2,7\nhearing,h3,4\n"
                                    "hearing,h4,1\nhearing,h5,9\nhearing,h6,3\n",
                                    "keys.csv"),
                         config);
}

// A submission that passes every rule for `study`.
Submission Clean(const Study& study) {
  Submission s;
  s.worker_id = "W1";
  s.assignment_id = "A1";
  s.session_timestamp = "2021-01-01T10:00:00Z";
  s.device_check_answers = {{"d1", "left"}};
  s.environment_test_answers = {{"e1", "3"}, {"e2", "5"}, {"e3", "1"}, {"e4", "4"}, {"e5", "2"}};
  s.hearing_test_answers = TokenAnswers{{"h1", "2"}, {"h2", "7"}, {"h3", "4"},
                                        {"h4", "1"}, {"h5", "9"}, {"h6", "3"}};
  s.gold_answers = {{"G0", 0}};
  auto rated = study.RatedTrials();
  for (int i = 0; i < study.config.section_size; ++i)
    s.votes.push_back({rated[static_cast<std::size_t>(i)].trial_id, 1,
                       PresentationOrder::kReferenceFirst, true, ""});
  return s;
}

bool Has(const ScreeningOutcome& o, RejectReason r) {
  return std::find(o.reasons.begin(), o.reasons.end(), r) != o.reasons.end();
}

class Screening : public ::testing::Test {
 protected:
  Study study_ = testing::MakeStudy(2, 5, 2, 2);
  AnswerKeys keys_ = Keys(study_.config);
};

TEST_F(Screening, CleanSubmissionIsAccepted) {
  auto o = ScreenSubmission(Clean(study_), keys_, study_);
  EXPECT_TRUE(o.accepted);
  EXPECT_TRUE(o.reasons.empty());
}

TEST_F(Screening, GoldToleranceBoundary) {
  // Tolerance 1 around 0: {-1, 0, 1} pass, everything else fails.
  for (int answer = -3; answer <= 3; ++answer) {
    auto s = Clean(study_);
    s.gold_answers[0].rating = answer;
    auto o = ScreenSubmission(s, keys_, study_);
    EXPECT_EQ(o.accepted, std::abs(answer) <= 1) << answer;
    EXPECT_EQ(Has(o, RejectReason::kGoldFailed), std::abs(answer) > 1) << answer;
  }
}

TEST_F(Screening, HearingThresholdIsInclusive) {
  auto s = Clean(study_);
  (*s.hearing_test_answers)["h6"] = "0";  // 5 of 6 correct
  EXPECT_TRUE(ScreenSubmission(s, keys_, study_).accepted);
  (*s.hearing_test_answers)["h5"] = "0";  // 4 of 6
  EXPECT_TRUE(Has(ScreenSubmission(s, keys_, study_), RejectReason::kHearingFailed));
}

TEST_F(Screening, EnvironmentAndDevice) {
  auto s = Clean(study_);
  s.environment_test_answers["e5"] = "9";  // 4 of 5 = 0.8
  EXPECT_TRUE(ScreenSubmission(s, keys_, study_).accepted);
  s.environment_test_answers.erase("e4");  // missing counts as wrong
  EXPECT_TRUE(Has(ScreenSubmission(s, keys_, study_), RejectReason::kEnvironmentFailed));

  auto d = Clean(study_);
  d.device_check_answers["d1"] = "right";
  EXPECT_TRUE(Has(ScreenSubmission(d, keys_, study_), RejectReason::kDeviceCheckFailed));
}

TEST_F(Screening, HearingSkippedWhenNotCollected) {
  auto s = Clean(study_);
  s.hearing_test_answers.reset();
  EXPECT_TRUE(ScreenSubmission(s, keys_, study_).accepted);
}

TEST_F(Screening, IncompleteSections) {
  auto s = Clean(study_);
  s.votes.pop_back();
  EXPECT_TRUE(Has(ScreenSubmission(s, keys_, study_), RejectReason::kIncomplete));
  auto t = Clean(study_);
  t.votes[3].listen_complete = false;
  EXPECT_TRUE(Has(ScreenSubmission(t, keys_, study_), RejectReason::kIncomplete));
  auto g = Clean(study_);
  g.gold_answers.clear();
  g.votes.push_back(g.votes.front());
  EXPECT_TRUE(Has(ScreenSubmission(g, keys_, study_), RejectReason::kIncomplete));
}

TEST_F(Screening, EveryFailedRuleIsReported) {
  auto s = Clean(study_);
  s.gold_answers[0].rating = 3;
  s.device_check_answers.clear();
  s.votes.pop_back();
  auto o = ScreenSubmission(s, keys_, study_);
  EXPECT_FALSE(o.accepted);
  EXPECT_EQ(o.reasons.size(), 3u);
}

TEST_F(Screening, TrainingAnswersNeverReject) {
  auto s = Clean(study_);
  s.training_answers = {{"G1", 3}, {"C01_t0", -3}};
  EXPECT_TRUE(ScreenSubmission(s, keys_, study_).accepted);
}

TEST_F(Screening, UnknownTrialIsAnInputError) {
  auto s = Clean(study_);
  s.votes[0].trial_id = "ghost";
  EXPECT_THROW(ScreenSubmission(s, keys_, study_), InputError);
}

// Turning a wrong answer into a correct one never adds a rejection reason.
TEST_F(Screening, MonotoneInCorrectness) {
  Rng rng(2024);
  const std::vector<std::string> env = {"e1", "e2", "e3", "e4", "e5"};
  const std::vector<std::string> hear = {"h1", "h2", "h3", "h4", "h5", "h6"};
  const auto clean = Clean(study_);
  for (int iter = 0; iter < 500; ++iter) {
    auto s = clean;
    for (const auto& e : env)
      if (rng.Index(3) == 0) s.environment_test_answers[e] = "x";
    for (const auto& h : hear)
      if (rng.Index(4) == 0) (*s.hearing_test_answers)[h] = "x";
    if (rng.Index(4) == 0) s.device_check_answers["d1"] = "right";
    s.gold_answers[0].rating = static_cast<int>(rng.Index(7)) - 3;
    if (rng.Index(5) == 0) s.votes.pop_back();
    auto before = ScreenSubmission(s, keys_, study_);

    auto fixed = s;
    switch (rng.Index(4)) {
      case 0: {
        const auto& e = env[rng.Index(env.size())];
        fixed.environment_test_answers[e] = clean.environment_test_answers.at(e);
        break;
      }
      case 1: {
        const auto& h = hear[rng.Index(hear.size())];
        (*fixed.hearing_test_answers)[h] = clean.hearing_test_answers->at(h);
        break;
      }
      case 2:
        fixed.device_check_answers = clean.device_check_answers;
        break;
      default:
        fixed.gold_answers[0].rating = 0;
    }
    auto after = ScreenSubmission(fixed, keys_, study_);
    for (auto r : after.reasons) EXPECT_TRUE(Has(before, r)) << "iteration " << iter;
    if (before.accepted) EXPECT_TRUE(after.accepted);
  }
}

TEST_F(Screening, SummaryCountsAcceptedVotesOnly) {
  auto good = Clean(study_);
  auto bad = Clean(study_);
  bad.worker_id = "W2";
  bad.gold_answers[0].rating = -3;
  std::vector<Submission> subs = {good, bad};
  std::vector<ScreeningOutcome> outcomes;
  for (const auto& s : subs) outcomes.push_back(ScreenSubmission(s, keys_, study_));
  auto summary = SummarizeScreening(outcomes, subs, study_);
  EXPECT_EQ(summary.total, 2u);
  EXPECT_EQ(summary.accepted, 1u);
  EXPECT_DOUBLE_EQ(summary.acceptance_rate, 0.5);
  EXPECT_EQ(summary.reason_counts.at(RejectReason::kGoldFailed), 1u);
  EXPECT_EQ(summary.accepted_votes_per_condition.size(), study_.conditions.size());
  std::size_t total = 0;
  for (const auto& [_, n] : summary.accepted_votes_per_condition) total += n;
  EXPECT_EQ(total, good.votes.size());
  EXPECT_DOUBLE_EQ(summary.mean_votes_per_condition, 1.0);
}

TEST_F(Screening, ScreenedCsvRoundTrip) {
  std::vector<ScreeningOutcome> outcomes = {
      {"W1", "A1", true, {}},
      {"W2", "A2", false, {RejectReason::kGoldFailed, RejectReason::kIncomplete}}};
  auto back = ParseScreened(csv::Parse(ScreenedCsv(outcomes)));
  ASSERT_EQ(back.size(), 2u);
  EXPECT_TRUE(back[0].accepted);
  EXPECT_EQ(back[1].reasons, outcomes[1].reasons);
  EXPECT_EQ(ToString(RejectReason::kDeviceCheckFailed), "DeviceCheckFailed");
}

TEST(AnswerKeyTest, PerTestThresholdOverride) {
  StudyConfig config;
  auto keys = ParseAnswerKeys(
      csv::Parse("test_id,item_id,expected,pass_threshold\nenvironment,e1,1,0.5\nenvironment,e2,2,\n"),
      config);
  ASSERT_TRUE(keys.environment);
  EXPECT_DOUBLE_EQ(keys.environment->pass_threshold, 0.5);
  EXPECT_TRUE(ScoreAnswerKeyTest({{"e1", "1"}}, *keys.environment).passed);
  EXPECT_THROW(ParseAnswerKeys(csv::Parse("test_id,item_id,expected\nvision,v1,1\n"), config),
               InputError);
}

}  // namespace
}  // namespace ccr
