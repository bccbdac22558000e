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

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ccr/csv.hpp"
#include "ccr/model.hpp"

namespace ccr {

enum class RejectReason {
  kGoldFailed,
  kDeviceCheckFailed,
  kEnvironmentFailed,
  kHearingFailed,
  kIncomplete,
};

std::string_view ToString(RejectReason reason);
RejectReason ParseRejectReason(std::string_view text);

struct ScreeningOutcome {
  std::string worker_id;
  std::string assignment_id;
  bool accepted = false;
  std::vector<RejectReason> reasons;  // empty iff accepted
};

/// Fixed answer-key quiz (device check, environment test, hearing test).
struct AnswerKeyTest {
  std::string test_id;
  std::vector<std::pair<std::string, std::string>> items;  // item_id, expected token
  double pass_threshold = 1.0;
};

struct AnswerKeyScore {
  double fraction_correct = 0.0;
  bool passed = false;
};

/// Exact-match scoring; missing answers count as wrong and the threshold is
/// inclusive.
AnswerKeyScore ScoreAnswerKeyTest(const TokenAnswers& answers, const AnswerKeyTest& key);

inline bool ValidateGold(int answer, int expected, int tolerance) {
  int diff = answer - expected;
  return (diff < 0 ? -diff : diff) <= tolerance;
}

/// Answer expected on a gold trial: "About the Same" for CCR, the top
/// category for ACR.
int ExpectedGoldAnswer(const RatingScale& scale);

struct AnswerKeys {
  std::optional<AnswerKeyTest> device;
  std::optional<AnswerKeyTest> environment;
  std::optional<AnswerKeyTest> hearing;
};

/// keys.csv: test_id (device|environment|hearing), item_id, expected and an
/// optional pass_threshold column; missing thresholds come from the config.
AnswerKeys ParseAnswerKeys(const csv::Table& table, const StudyConfig& config);

/// Applies device check, environment test, hearing test (when answers were
/// collected), rating-section gold answers and completeness. Every failed
/// rule is reported. Training answers never reject. Throws InputError when
/// a vote references a trial unknown to the study.
ScreeningOutcome ScreenSubmission(const Submission& submission, const AnswerKeys& keys,
                                  const Study& study);

struct ScreeningSummary {
  std::size_t total = 0;
  std::size_t accepted = 0;
  double acceptance_rate = 0.0;
  std::map<RejectReason, std::size_t> reason_counts;  // reasons that occurred
  std::map<std::string, std::size_t> accepted_votes_per_condition;
  double mean_votes_per_condition = 0.0;
  double sd_votes_per_condition = 0.0;
};

/// `submissions` are matched to outcomes by (worker_id, assignment_id); vote
/// counts cover every condition of the study, including ones left at zero.
ScreeningSummary SummarizeScreening(const std::vector<ScreeningOutcome>& outcomes,
                                    const std::vector<Submission>& submissions, const Study& study);

std::string ScreenedCsv(const std::vector<ScreeningOutcome>& outcomes);
std::vector<ScreeningOutcome> ParseScreened(const csv::Table& table);

}  // namespace ccr
