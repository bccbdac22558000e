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

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ccr {

enum class ScaleKind { kCcr, kAcr };

/// Ordered category scale. CCR runs -3..+3 ("Much Worse".."Much Better"),
/// ACR runs 1..5 ("Bad".."Excellent").
class RatingScale {
 public:
  static RatingScale Ccr();
  static RatingScale Acr();

  ScaleKind kind() const { return kind_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<int>& values() const { return values_; }
  int min() const { return values_.front(); }
  int max() const { return values_.back(); }
  bool Contains(int value) const;

  /// Throws InputError for values or labels not on the scale.
  const std::string& LabelOf(int value) const;
  int ValueOf(std::string_view label) const;

 private:
  RatingScale(ScaleKind kind, std::vector<std::string> labels,
              std::vector<int> values);

  ScaleKind kind_;
  std::vector<std::string> labels_;
  std::vector<int> values_;
};

std::string_view ToString(ScaleKind kind);
ScaleKind ParseScaleKind(std::string_view text);

struct Condition {
  std::string id;
  std::string description;
  std::map<std::string, std::string> factors;
};

struct TrialPair {
  std::string trial_id;
  std::string condition_id;  // empty for gold trials
  std::string reference_uri;
  std::string processed_uri;
  bool is_gold = false;
};

struct StudyConfig {
  RatingScale scale = RatingScale::Ccr();
  int section_size = 10;
  int golds_per_section = 1;
  double training_interval_minutes = 60.0;
  int gold_tolerance = 1;
  double hearing_pass_threshold = 5.0 / 6.0;
  double environment_pass_threshold = 0.8;
  double device_pass_threshold = 1.0;
  int target_votes_per_trial = 30;
  // Platform assignments per section; replications = ceil(target / this).
  int assignments_per_section = 1;
  std::uint64_t seed = 0;

  int Replications() const;
};

struct ConfigViolation {
  std::string field;
  std::string rule;

  bool operator==(const ConfigViolation&) const = default;
};

/// Empty result means the config is valid.
std::vector<ConfigViolation> ValidateStudyConfig(const StudyConfig& config);

enum class PresentationOrder { kReferenceFirst, kProcessedFirst };

std::string_view ToString(PresentationOrder order);  // R_FIRST | P_FIRST
PresentationOrder ParsePresentationOrder(std::string_view text);

struct VoteRecord {
  std::string trial_id;
  int raw_rating = 0;
  std::optional<PresentationOrder> order;  // CCR only
  bool listen_complete = true;
  std::string timestamp;
};

struct RatedItem {
  std::string trial_id;
  int rating = 0;
};

using TokenAnswers = std::map<std::string, std::string>;

struct Submission {
  std::string worker_id;
  std::string assignment_id;
  std::string session_timestamp;
  std::optional<std::string> last_training_timestamp;
  std::vector<RatedItem> training_answers;
  TokenAnswers device_check_answers;
  std::optional<TokenAnswers> hearing_test_answers;
  TokenAnswers environment_test_answers;
  std::vector<RatedItem> gold_answers;
  std::vector<VoteRecord> votes;
};

struct ConditionScore {
  std::string condition_id;
  double mean = 0.0;
  int n = 0;
  double sd = 0.0;
  double ci95 = 0.0;
};

struct TrainingBlock {
  std::vector<std::string> anchor_trial_ids;
  std::string gold_trial_id;
};

/// A complete study definition: configuration plus condition and trial tables.
struct Study {
  std::string study_id;
  StudyConfig config;
  std::map<std::string, std::vector<std::string>> factors;
  std::vector<Condition> conditions;
  std::vector<TrialPair> trials;  // rated and gold trials
  std::optional<TrainingBlock> training;

  const TrialPair* FindTrial(std::string_view trial_id) const;
  const Condition* FindCondition(std::string_view condition_id) const;
  std::vector<TrialPair> RatedTrials() const;
  std::vector<TrialPair> GoldPool() const;
};

/// Config violations plus table consistency: unique ids, declared factor
/// levels, gold URIs identical, rated URIs distinct, training references.
std::vector<ConfigViolation> ValidateStudy(const Study& study);

using Instant = std::chrono::sys_seconds;

/// Parses ISO-8601 UTC ("2021-03-01T12:00:00Z", optional fraction, "Z" or
/// "+00:00"). Throws InputError naming `field` on malformed input.
Instant ParseTimestamp(std::string_view text, std::string_view field);
std::string FormatTimestamp(Instant instant);

struct TrainingFlag {
  enum class Reason { kNoPriorTraining, kIntervalElapsed };
  Reason reason;
  std::int64_t elapsed_seconds = 0;  // meaningful for kIntervalElapsed
};

/// Advisory check of the periodic-training rule: training is due when no
/// prior training is recorded or the interval has elapsed; a flag is raised
/// when it was due and the submission carries no training answers.
std::vector<TrainingFlag> ValidateTrainingExposure(const Submission& submission,
                                                   const StudyConfig& config);

}  // namespace ccr
