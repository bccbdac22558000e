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

#include <gtest/gtest.h>

#include "ccr/error.hpp"
#include "ccr/model.hpp"
#include "ccr/study_io.hpp"
#include "test_util.hpp"

namespace ccr {
namespace {

TEST(RatingScale, CcrLabelsAndBounds) {
  auto s = RatingScale::Ccr();
  EXPECT_EQ(s.values().size(), 7u);
  EXPECT_EQ(s.min(), -3);
  EXPECT_EQ(s.max(), 3);
  EXPECT_EQ(s.LabelOf(0), "About the Same");
  EXPECT_EQ(s.ValueOf("Much Better"), 3);
  EXPECT_FALSE(s.Contains(4));
  EXPECT_THROW(s.LabelOf(-4), InputError);
  EXPECT_THROW(s.ValueOf("Okay"), InputError);
}

TEST(RatingScale, AcrRunsOneToFive) {
  auto s = RatingScale::Acr();
  EXPECT_EQ(s.min(), 1);
  EXPECT_EQ(s.max(), 5);
  EXPECT_EQ(s.LabelOf(5), "Excellent");
  EXPECT_EQ(ParseScaleKind("ACR"), ScaleKind::kAcr);
  EXPECT_THROW(ParseScaleKind("DCR"), InputError);
}

TEST(StudyConfig, SectionSizeBoundaryIsExact) {
  for (int size = 0; size <= 20; ++size) {
    StudyConfig c;
    c.section_size = size;
    auto v = ValidateStudyConfig(c);
    bool flagged = false;
    for (const auto& x : v) flagged = flagged || x.field == "section_size";
    EXPECT_EQ(flagged, size < 10 || size > 12) << "section_size=" << size;
  }
}

TEST(StudyConfig, RejectsOutOfRangeFields) {
  StudyConfig c;
  c.golds_per_section = 0;
  c.hearing_pass_threshold = 1.5;
  c.target_votes_per_trial = 0;
  c.assignments_per_section = 0;
  auto v = ValidateStudyConfig(c);
  std::set<std::string> fields;
  for (const auto& x : v) fields.insert(x.field);
  EXPECT_TRUE(fields.count("golds_per_section"));
  EXPECT_TRUE(fields.count("hearing_pass_threshold"));
  EXPECT_TRUE(fields.count("target_votes_per_trial"));
  EXPECT_TRUE(fields.count("assignments_per_section"));
}

TEST(StudyConfig, ReplicationsRoundUp) {
  StudyConfig c;
  c.target_votes_per_trial = 30;
  c.assignments_per_section = 1;
  EXPECT_EQ(c.Replications(), 30);
  c.assignments_per_section = 4;
  EXPECT_EQ(c.Replications(), 8);
  c.assignments_per_section = 30;
  EXPECT_EQ(c.Replications(), 1);
}

TEST(PresentationOrder, RoundTrip) {
  EXPECT_EQ(ToString(PresentationOrder::kReferenceFirst), "R_FIRST");
  EXPECT_EQ(ParsePresentationOrder("P_FIRST"), PresentationOrder::kProcessedFirst);
  EXPECT_THROW(ParsePresentationOrder("X"), InputError);
}

TEST(Study, ValidationCatchesTableProblems) {
  auto s = testing::MakeStudy(2, 2, 2, 1);
  EXPECT_TRUE(ValidateStudy(s).empty());

  auto dup = s;
  dup.trials.push_back(dup.trials.front());
  EXPECT_FALSE(ValidateStudy(dup).empty());

  auto gold = s;
  gold.trials.back().processed_uri = "other.wav";
  EXPECT_FALSE(ValidateStudy(gold).empty());

  auto same = s;
  same.trials.front().processed_uri = same.trials.front().reference_uri;
  EXPECT_FALSE(ValidateStudy(same).empty());

  auto level = s;
  level.conditions.front().factors["codec"] = "c9";
  EXPECT_FALSE(ValidateStudy(level).empty());

  auto orphan = s;
  orphan.trials.front().condition_id = "nope";
  EXPECT_FALSE(ValidateStudy(orphan).empty());
}

TEST(Study, JsonRoundTrip) {
  auto s = testing::MakeStudy(2, 3, 2, 2);
  s.training = TrainingBlock{{"C01_t0"}, "G0"};
  s.config.seed = 42;
  auto back = ParseStudy(StudyToJson(s));
  EXPECT_EQ(back.study_id, s.study_id);
  EXPECT_EQ(back.config.seed, 42u);
  ASSERT_EQ(back.trials.size(), s.trials.size());
  for (std::size_t i = 0; i < s.trials.size(); ++i) {
    EXPECT_EQ(back.trials[i].trial_id, s.trials[i].trial_id);
    EXPECT_EQ(back.trials[i].processed_uri, s.trials[i].processed_uri);
    EXPECT_EQ(back.trials[i].is_gold, s.trials[i].is_gold);
  }
  ASSERT_TRUE(back.training);
  EXPECT_EQ(back.training->gold_trial_id, "G0");
  EXPECT_EQ(StudyToJson(back), StudyToJson(s));
}

TEST(Study, ParseErrorsNameTheField) {
  try {
    ParseStudy(R"({"study_id": "x", "config": {"section_size": "ten"}})");
    FAIL() << "expected an exception";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("section_size"), std::string::npos) << e.what();
  }
  EXPECT_THROW(ParseStudy("{not json"), Error);
}

TEST(Timestamp, ParsesCommonForms) {
  auto a = ParseTimestamp("2021-03-01T12:00:00Z", "t");
  EXPECT_EQ(ParseTimestamp("2021-03-01T12:00:00+00:00", "t"), a);
  EXPECT_EQ(ParseTimestamp("2021-03-01T12:00:00.250Z", "t"), a);
  EXPECT_EQ(FormatTimestamp(a), "2021-03-01T12:00:00Z");
  EXPECT_THROW(ParseTimestamp("2021-13-01T12:00:00Z", "t"), InputError);
  EXPECT_THROW(ParseTimestamp("yesterday", "t"), InputError);
}

Submission WithTimes(std::optional<std::string> last, std::string now) {
  Submission s;
  s.worker_id = "w";
  s.assignment_id = "a";
  s.session_timestamp = std::move(now);
  s.last_training_timestamp = std::move(last);
  return s;
}

TEST(TrainingExposure, IntervalBoundary) {
  StudyConfig c;
  // 59 minutes: not due.
  EXPECT_TRUE(ValidateTrainingExposure(WithTimes("2021-01-01T10:00:00Z", "2021-01-01T10:59:00Z"), c).empty());
  // Exactly 60 minutes: due, and no training answers present.
  auto due = ValidateTrainingExposure(WithTimes("2021-01-01T10:00:00Z", "2021-01-01T11:00:00Z"), c);
  ASSERT_EQ(due.size(), 1u);
  EXPECT_EQ(due[0].reason, TrainingFlag::Reason::kIntervalElapsed);
  EXPECT_EQ(due[0].elapsed_seconds, 3600);
  auto none = ValidateTrainingExposure(WithTimes(std::nullopt, "2021-01-01T11:00:00Z"), c);
  ASSERT_EQ(none.size(), 1u);
  EXPECT_EQ(none[0].reason, TrainingFlag::Reason::kNoPriorTraining);

  auto trained = WithTimes("2021-01-01T10:00:00Z", "2021-01-01T12:00:00Z");
  trained.training_answers.push_back({"G0", 0});
  EXPECT_TRUE(ValidateTrainingExposure(trained, c).empty());
}

}  // namespace
}  // namespace ccr
