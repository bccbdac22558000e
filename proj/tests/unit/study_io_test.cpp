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
#include <nlohmann/json.hpp>

#include "ccr/builder.hpp"
#include "ccr/error.hpp"
#include "ccr/rng.hpp"
#include "ccr/study_io.hpp"
#include "test_util.hpp"

namespace ccr {
namespace {

using nlohmann::json;

const char* kPayload = R"({
  "worker_id": "W1", "assignment_id": "A1",
  "session_timestamp": "2021-05-01T08:00:00Z",
  "last_training_timestamp": "2021-05-01T07:30:00Z",
  "device_check_answers": {"d1": "left"},
  "environment_test_answers": {"e1": "3"},
  "hearing_test_answers": null,
  "gold_answers": [{"trial_id": "G0", "rating": 0}],
  "votes": [{"trial_id": "C01_t0", "rating": -2, "order": "P_FIRST", "listen_complete": true}]
})";

TEST(Submission, ParsesExplicitVotes) {
  auto s = ParseSubmission(kPayload);
  EXPECT_EQ(s.worker_id, "W1");
  EXPECT_FALSE(s.hearing_test_answers.has_value());
  ASSERT_EQ(s.votes.size(), 1u);
  EXPECT_EQ(s.votes[0].order, PresentationOrder::kProcessedFirst);
  EXPECT_EQ(s.gold_answers[0].trial_id, "G0");
  auto again = ParseSubmission(SubmissionToJson(s));
  EXPECT_EQ(SubmissionToJson(again), SubmissionToJson(s));
}

TEST(Submission, StructuralProblemsAreListed) {
  auto study = testing::MakeStudy(2, 5, 1, 1);
  EXPECT_TRUE(ValidateSubmissionPayload(kPayload, study).empty());

  auto doc = json::parse(kPayload);
  doc["votes"][0]["rating"] = 5;
  doc["votes"][0].erase("order");
  doc["session_timestamp"] = "not a time";
  auto problems = ValidateSubmissionPayload(doc.dump(), study);
  EXPECT_EQ(problems.size(), 3u);

  EXPECT_FALSE(ValidateSubmissionPayload("{", study).empty());
  EXPECT_FALSE(ValidateSubmissionPayload(R"({"worker_id": 3})", study).empty());
}

TEST(Submission, ItemsResolveThroughAnswerKey) {
  auto study = testing::MakeStudy(2, 5, 1, 1);
  StudyConfig config;
  config.target_votes_per_trial = 1;
  auto manifest = EmitTaskManifest(AssembleSections(study.RatedTrials(), study.GoldPool(), config, 1));
  json doc = json::parse(kPayload);
  doc.erase("votes");
  doc.erase("gold_answers");
  doc["items"] = json::array();
  for (const auto& row : manifest.key_rows)
    doc["items"].push_back({{"section_id", row.section_id}, {"item_index", row.item_index}, {"rating", 0}});
  auto s = ParseSubmission(doc.dump(), &manifest.key_rows);
  EXPECT_EQ(s.votes.size(), 10u);
  EXPECT_EQ(s.gold_answers.size(), 1u);
  for (const auto& v : s.votes) EXPECT_TRUE(v.order.has_value());
  EXPECT_THROW(ParseSubmission(doc.dump()), InputError);
  doc["items"][0]["item_index"] = 99;
  EXPECT_THROW(ParseSubmission(doc.dump(), &manifest.key_rows), InputError);
}

// Payloads of synthetic sessions, built the way the rating page emits them,
// pass the structural validator.
TEST(Submission, SyntheticSessionsPassValidator) {
  auto study = testing::MakeStudy(3, 4, 3, 2);
  StudyConfig config;
  config.target_votes_per_trial = 2;
  auto manifest = EmitTaskManifest(AssembleSections(study.RatedTrials(), study.GoldPool(), config, 6));
  std::map<std::string, std::vector<const AnswerKeyRow*>> by_section;
  for (const auto& row : manifest.key_rows) by_section[row.section_id].push_back(&row);
  Rng rng(50);
  for (int session = 0; session < 50; ++session) {
    auto it = by_section.begin();
    std::advance(it, static_cast<long>(rng.Index(by_section.size())));
    json doc = {{"worker_id", fmt::format("W{}", session)},
                {"assignment_id", fmt::format("A{}", session)},
                {"session_timestamp", "2021-05-01T08:00:00Z"},
                {"device_check_answers", {{"d1", "left"}}},
                {"environment_test_answers", json::object()},
                {"items", json::array()}};
    for (const auto* row : it->second)
      doc["items"].push_back({{"section_id", row->section_id},
                              {"item_index", row->item_index},
                              {"rating", static_cast<int>(rng.Index(7)) - 3},
                              {"timestamp", "2021-05-01T08:01:00.5Z"}});
    auto problems = ValidateSubmissionPayload(doc.dump(), study, &manifest.key_rows);
    EXPECT_TRUE(problems.empty()) << (problems.empty() ? "" : problems.front());
  }
}

}  // namespace
}  // namespace ccr
