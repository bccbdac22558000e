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

#include "ccr/screening.hpp"

#include <charconv>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "ccr/error.hpp"

namespace ccr {

std::string_view ToString(RejectReason reason) {
  switch (reason) {
    case RejectReason::kGoldFailed: return "GoldFailed";
    case RejectReason::kDeviceCheckFailed: return "DeviceCheckFailed";
    case RejectReason::kEnvironmentFailed: return "EnvironmentFailed";
    case RejectReason::kHearingFailed: return "HearingFailed";
    case RejectReason::kIncomplete: return "Incomplete";
  }
  return "?";
}

RejectReason ParseRejectReason(std::string_view text) {
  for (auto r : {RejectReason::kGoldFailed, RejectReason::kDeviceCheckFailed,
                 RejectReason::kEnvironmentFailed, RejectReason::kHearingFailed,
                 RejectReason::kIncomplete})
    if (ToString(r) == text) return r;
  throw InputError(fmt::format("unknown rejection reason '{}'", text));
}

AnswerKeyScore ScoreAnswerKeyTest(const TokenAnswers& answers, const AnswerKeyTest& key) {
  if (key.items.empty()) throw InputError(fmt::format("answer key '{}' has no items", key.test_id));
  std::size_t correct = 0;
  for (const auto& [item, expected] : key.items) {
    auto it = answers.find(item);
    if (it != answers.end() && it->second == expected) ++correct;
  }
  AnswerKeyScore score;
  score.fraction_correct = static_cast<double>(correct) / static_cast<double>(key.items.size());
  // Compare counts rather than fractions so 4/5 >= 0.8 holds exactly.
  score.passed = static_cast<double>(correct) >=
                 key.pass_threshold * static_cast<double>(key.items.size()) - 1e-9;
  return score;
}

int ExpectedGoldAnswer(const RatingScale& scale) {
  return scale.kind() == ScaleKind::kCcr ? 0 : scale.max();
}

AnswerKeys ParseAnswerKeys(const csv::Table& table, const StudyConfig& config) {
  const auto c_test = table.Column("test_id"), c_item = table.Column("item_id"),
             c_expected = table.Column("expected");
  const bool has_threshold = table.HasColumn("pass_threshold");
  const std::size_t c_threshold = has_threshold ? table.Column("pass_threshold") : 0;

  AnswerKeys keys;
  for (const auto& row : table.rows) {
    std::optional<AnswerKeyTest>* slot = nullptr;
    double fallback = 1.0;
    if (row[c_test] == "device") {
      slot = &keys.device;
      fallback = config.device_pass_threshold;
    } else if (row[c_test] == "environment") {
      slot = &keys.environment;
      fallback = config.environment_pass_threshold;
    } else if (row[c_test] == "hearing") {
      slot = &keys.hearing;
      fallback = config.hearing_pass_threshold;
    } else {
      throw InputError(fmt::format("{}: unknown test_id '{}'", table.source, row[c_test]));
    }
    if (!*slot) *slot = AnswerKeyTest{row[c_test], {}, fallback};
    (*slot)->items.emplace_back(row[c_item], row[c_expected]);
    if (has_threshold && !row[c_threshold].empty()) {
      try {
        (*slot)->pass_threshold = std::stod(row[c_threshold]);
      } catch (const std::exception&) {
        throw InputError(fmt::format("{}: bad pass_threshold '{}'", table.source, row[c_threshold]));
      }
    }
  }
  return keys;
}

ScreeningOutcome ScreenSubmission(const Submission& submission, const AnswerKeys& keys,
                                  const Study& study) {
  for (const auto& v : submission.votes)
    if (study.FindTrial(v.trial_id) == nullptr)
      throw InputError(fmt::format("submission {}/{}: vote references unknown trial '{}'",
                                   submission.worker_id, submission.assignment_id, v.trial_id));
  for (const auto& g : submission.gold_answers)
    if (study.FindTrial(g.trial_id) == nullptr)
      throw InputError(fmt::format("submission {}/{}: gold answer references unknown trial '{}'",
                                   submission.worker_id, submission.assignment_id, g.trial_id));

  ScreeningOutcome out{submission.worker_id, submission.assignment_id, false, {}};
  if (keys.device && !ScoreAnswerKeyTest(submission.device_check_answers, *keys.device).passed)
    out.reasons.push_back(RejectReason::kDeviceCheckFailed);
  if (keys.environment &&
      !ScoreAnswerKeyTest(submission.environment_test_answers, *keys.environment).passed)
    out.reasons.push_back(RejectReason::kEnvironmentFailed);
  if (keys.hearing && submission.hearing_test_answers &&
      !ScoreAnswerKeyTest(*submission.hearing_test_answers, *keys.hearing).passed)
    out.reasons.push_back(RejectReason::kHearingFailed);

  const StudyConfig& config = study.config;
  const int expected = ExpectedGoldAnswer(config.scale);
  for (const auto& g : submission.gold_answers) {
    if (!ValidateGold(g.rating, expected, config.gold_tolerance)) {
      out.reasons.push_back(RejectReason::kGoldFailed);
      break;
    }
  }

  const auto expected_items =
      static_cast<std::size_t>(config.section_size + config.golds_per_section);
  bool complete = submission.votes.size() + submission.gold_answers.size() >= expected_items &&
                  submission.gold_answers.size() >=
                      static_cast<std::size_t>(config.golds_per_section);
  for (const auto& v : submission.votes) complete = complete && v.listen_complete;
  if (!complete) out.reasons.push_back(RejectReason::kIncomplete);

  out.accepted = out.reasons.empty();
  return out;
}

ScreeningSummary SummarizeScreening(const std::vector<ScreeningOutcome>& outcomes,
                                    const std::vector<Submission>& submissions,
                                    const Study& study) {
  if (outcomes.empty()) throw InputError("screening summary needs at least one outcome");
  ScreeningSummary summary;
  summary.total = outcomes.size();
  std::set<std::pair<std::string, std::string>> accepted;
  for (const auto& o : outcomes) {
    if (o.accepted) {
      ++summary.accepted;
      accepted.insert({o.worker_id, o.assignment_id});
    }
    for (auto r : o.reasons) ++summary.reason_counts[r];
  }
  summary.acceptance_rate =
      static_cast<double>(summary.accepted) / static_cast<double>(summary.total);

  for (const auto& c : study.conditions) summary.accepted_votes_per_condition[c.id] = 0;
  for (const auto& s : submissions) {
    if (!accepted.count({s.worker_id, s.assignment_id})) continue;
    for (const auto& v : s.votes) {
      const auto* trial = study.FindTrial(v.trial_id);
      if (trial == nullptr || trial->is_gold) continue;
      ++summary.accepted_votes_per_condition[trial->condition_id];
    }
  }

  const auto& counts = summary.accepted_votes_per_condition;
  if (!counts.empty()) {
    double sum = 0.0;
    for (const auto& [_, n] : counts) sum += static_cast<double>(n);
    summary.mean_votes_per_condition = sum / static_cast<double>(counts.size());
    if (counts.size() > 1) {
      double ss = 0.0;
      for (const auto& [_, n] : counts) {
        double d = static_cast<double>(n) - summary.mean_votes_per_condition;
        ss += d * d;
      }
      summary.sd_votes_per_condition = std::sqrt(ss / static_cast<double>(counts.size() - 1));
    }
  }
  return summary;
}

std::string ScreenedCsv(const std::vector<ScreeningOutcome>& outcomes) {
  std::string out = csv::FormatRow({"worker_id", "assignment_id", "accepted", "reasons"});
  for (const auto& o : outcomes) {
    std::string reasons;
    for (std::size_t i = 0; i < o.reasons.size(); ++i) {
      if (i) reasons += ';';
      reasons += ToString(o.reasons[i]);
    }
    out += csv::FormatRow({o.worker_id, o.assignment_id, o.accepted ? "1" : "0", reasons});
  }
  return out;
}

std::vector<ScreeningOutcome> ParseScreened(const csv::Table& table) {
  const auto c_worker = table.Column("worker_id"), c_assignment = table.Column("assignment_id"),
             c_accepted = table.Column("accepted"), c_reasons = table.Column("reasons");
  std::vector<ScreeningOutcome> out;
  for (const auto& row : table.rows) {
    ScreeningOutcome o{row[c_worker], row[c_assignment], row[c_accepted] == "1", {}};
    if (row[c_accepted] != "0" && row[c_accepted] != "1")
      throw InputError(fmt::format("{}: accepted must be 0 or 1, got '{}'", table.source,
                                   row[c_accepted]));
    std::string_view rest = row[c_reasons];
    while (!rest.empty()) {
      auto cut = rest.find(';');
      o.reasons.push_back(ParseRejectReason(rest.substr(0, cut)));
      rest = cut == std::string_view::npos ? std::string_view{} : rest.substr(cut + 1);
    }
    if (o.accepted != o.reasons.empty())
      throw InputError(fmt::format("{}: {}/{} accepted flag disagrees with reasons", table.source,
                                   o.worker_id, o.assignment_id));
    out.push_back(std::move(o));
  }
  return out;
}

}  // namespace ccr
