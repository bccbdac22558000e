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

#include "ccr/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "ccr/error.hpp"

namespace ccr {

RatingScale::RatingScale(ScaleKind kind, std::vector<std::string> labels,
                         std::vector<int> values)
    : kind_(kind), labels_(std::move(labels)), values_(std::move(values)) {}

RatingScale RatingScale::Ccr() {
  return RatingScale(ScaleKind::kCcr,
                     {"Much Worse", "Worse", "Slightly Worse", "About the Same",
                      "Slightly Better", "Better", "Much Better"},
                     {-3, -2, -1, 0, 1, 2, 3});
}

RatingScale RatingScale::Acr() {
  return RatingScale(ScaleKind::kAcr,
                     {"Bad", "Poor", "Fair", "Good", "Excellent"},
                     {1, 2, 3, 4, 5});
}

bool RatingScale::Contains(int value) const {
  return value >= min() && value <= max();
}

const std::string& RatingScale::LabelOf(int value) const {
  if (!Contains(value))
    throw InputError(fmt::format("rating {} is not on the {} scale", value,
                                 ToString(kind_)));
  return labels_[static_cast<std::size_t>(value - min())];
}

int RatingScale::ValueOf(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end())
    throw InputError(fmt::format("unknown {} label '{}'", ToString(kind_), label));
  return values_[static_cast<std::size_t>(it - labels_.begin())];
}

std::string_view ToString(ScaleKind kind) {
  return kind == ScaleKind::kCcr ? "CCR" : "ACR";
}

ScaleKind ParseScaleKind(std::string_view text) {
  if (text == "CCR" || text == "ccr") return ScaleKind::kCcr;
  if (text == "ACR" || text == "acr") return ScaleKind::kAcr;
  throw InputError(fmt::format("unknown scale '{}'", text));
}

int StudyConfig::Replications() const {
  if (assignments_per_section <= 0) return target_votes_per_trial;
  return (target_votes_per_trial + assignments_per_section - 1) /
         assignments_per_section;
}

std::vector<ConfigViolation> ValidateStudyConfig(const StudyConfig& config) {
  std::vector<ConfigViolation> out;
  if (config.section_size < 10 || config.section_size > 12)
    out.push_back({"section_size", "section_size outside 10..12"});
  if (config.golds_per_section < 1)
    out.push_back({"golds_per_section", "golds_per_section must be >= 1"});
  if (!(config.training_interval_minutes > 0.0))
    out.push_back({"training_interval_minutes",
                   "training_interval_minutes must be > 0"});
  if (config.gold_tolerance < 0 || config.gold_tolerance > 3)
    out.push_back({"gold_tolerance", "gold_tolerance outside 0..3"});
  auto fraction = [&](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0))
      out.push_back({name, fmt::format("{} outside [0,1]", name)});
  };
  fraction(config.hearing_pass_threshold, "hearing_pass_threshold");
  fraction(config.environment_pass_threshold, "environment_pass_threshold");
  fraction(config.device_pass_threshold, "device_pass_threshold");
  if (config.target_votes_per_trial < 1)
    out.push_back({"target_votes_per_trial",
                   "target_votes_per_trial must be >= 1"});
  if (config.assignments_per_section < 1)
    out.push_back({"assignments_per_section",
                   "assignments_per_section must be >= 1"});
  return out;
}

std::string_view ToString(PresentationOrder order) {
  return order == PresentationOrder::kReferenceFirst ? "R_FIRST" : "P_FIRST";
}

PresentationOrder ParsePresentationOrder(std::string_view text) {
  if (text == "R_FIRST") return PresentationOrder::kReferenceFirst;
  if (text == "P_FIRST") return PresentationOrder::kProcessedFirst;
  throw InputError(fmt::format("unknown presentation order '{}'", text));
}

const TrialPair* Study::FindTrial(std::string_view trial_id) const {
  for (const auto& t : trials)
    if (t.trial_id == trial_id) return &t;
  return nullptr;
}

const Condition* Study::FindCondition(std::string_view condition_id) const {
  for (const auto& c : conditions)
    if (c.id == condition_id) return &c;
  return nullptr;
}

std::vector<TrialPair> Study::RatedTrials() const {
  std::vector<TrialPair> out;
  std::copy_if(trials.begin(), trials.end(), std::back_inserter(out),
               [](const TrialPair& t) { return !t.is_gold; });
  return out;
}

std::vector<TrialPair> Study::GoldPool() const {
  std::vector<TrialPair> out;
  std::copy_if(trials.begin(), trials.end(), std::back_inserter(out),
               [](const TrialPair& t) { return t.is_gold; });
  return out;
}

std::vector<ConfigViolation> ValidateStudy(const Study& study) {
  auto out = ValidateStudyConfig(study.config);

  std::set<std::string> condition_ids;
  for (const auto& c : study.conditions) {
    if (c.id.empty()) out.push_back({"conditions", "condition with empty id"});
    if (!condition_ids.insert(c.id).second)
      out.push_back({"conditions", fmt::format("duplicate condition id '{}'", c.id)});
    for (const auto& [factor, level] : c.factors) {
      auto f = study.factors.find(factor);
      if (f == study.factors.end()) {
        out.push_back({"conditions", fmt::format("condition '{}' uses undeclared factor '{}'",
                                                 c.id, factor)});
      } else if (std::find(f->second.begin(), f->second.end(), level) ==
                 f->second.end()) {
        out.push_back({"conditions",
                       fmt::format("condition '{}' uses undeclared level '{}' of factor '{}'",
                                   c.id, level, factor)});
      }
    }
  }

  std::set<std::string> trial_ids;
  for (const auto& t : study.trials) {
    if (!trial_ids.insert(t.trial_id).second)
      out.push_back({"trials", fmt::format("duplicate trial id '{}'", t.trial_id)});
    if (t.is_gold) {
      if (t.reference_uri != t.processed_uri)
        out.push_back({"trials", fmt::format("gold trial '{}' must present the reference twice",
                                             t.trial_id)});
    } else {
      if (t.reference_uri == t.processed_uri)
        out.push_back({"trials", fmt::format("trial '{}' has identical reference and processed URIs",
                                             t.trial_id)});
      if (!condition_ids.count(t.condition_id))
        out.push_back({"trials", fmt::format("trial '{}' references unknown condition '{}'",
                                             t.trial_id, t.condition_id)});
    }
  }

  if (study.training) {
    for (const auto& id : study.training->anchor_trial_ids)
      if (!trial_ids.count(id))
        out.push_back({"training", fmt::format("unknown anchor trial '{}'", id)});
    const auto* gold = study.FindTrial(study.training->gold_trial_id);
    if (gold == nullptr || !gold->is_gold)
      out.push_back({"training", fmt::format("training gold '{}' is not a gold trial",
                                             study.training->gold_trial_id)});
  }
  return out;
}

namespace {

bool ParseFixed(std::string_view text, std::size_t pos, std::size_t len, int& value) {
  if (pos + len > text.size()) return false;
  const char* first = text.data() + pos;
  auto [ptr, ec] = std::from_chars(first, first + len, value);
  return ec == std::errc() && ptr == first + len;
}

}  // namespace

Instant ParseTimestamp(std::string_view text, std::string_view field) {
  auto fail = [&]() -> InputError {
    return InputError(fmt::format("{}: malformed ISO-8601 timestamp '{}'", field, text));
  };
  int y, mo, d, h, mi, s;
  if (text.size() < 20 || text[4] != '-' || text[7] != '-' ||
      (text[10] != 'T' && text[10] != ' ') || text[13] != ':' || text[16] != ':' ||
      !ParseFixed(text, 0, 4, y) || !ParseFixed(text, 5, 2, mo) ||
      !ParseFixed(text, 8, 2, d) || !ParseFixed(text, 11, 2, h) ||
      !ParseFixed(text, 14, 2, mi) || !ParseFixed(text, 17, 2, s))
    throw fail();

  std::size_t pos = 19;
  if (text[pos] == '.') {
    ++pos;
    std::size_t start = pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
    if (pos == start) throw fail();
  }
  std::string_view zone = text.substr(pos);
  if (zone != "Z" && zone != "+00:00" && zone != "+0000") throw fail();

  using namespace std::chrono;
  year_month_day date{year{y}, month{static_cast<unsigned>(mo)},
                      day{static_cast<unsigned>(d)}};
  if (!date.ok() || h > 23 || mi > 59 || s > 60) throw fail();
  return sys_days{date} + hours{h} + minutes{mi} + seconds{s};
}

std::string FormatTimestamp(Instant instant) {
  using namespace std::chrono;
  auto days = floor<std::chrono::days>(instant);
  year_month_day date{days};
  hh_mm_ss tod{instant - days};
  return fmt::format("{:04}-{:02}-{:02}T{:02}:{:02}:{:02}Z", int(date.year()),
                     unsigned(date.month()), unsigned(date.day()),
                     tod.hours().count(), tod.minutes().count(),
                     tod.seconds().count());
}

std::vector<TrainingFlag> ValidateTrainingExposure(const Submission& submission,
                                                   const StudyConfig& config) {
  Instant session = ParseTimestamp(submission.session_timestamp, "session_timestamp");
  const bool trained = !submission.training_answers.empty();

  if (!submission.last_training_timestamp) {
    if (trained) return {};
    return {{TrainingFlag::Reason::kNoPriorTraining, 0}};
  }

  Instant last = ParseTimestamp(*submission.last_training_timestamp,
                                "last_training_timestamp");
  std::int64_t elapsed = (session - last).count();
  auto interval = static_cast<std::int64_t>(
      std::llround(config.training_interval_minutes * 60.0));
  if (elapsed >= interval && !trained)
    return {{TrainingFlag::Reason::kIntervalElapsed, elapsed}};
  return {};
}

}  // namespace ccr
