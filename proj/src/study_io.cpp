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

#include "ccr/study_io.hpp"

#include <fstream>
#include <map>
#include <set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "ccr/csv.hpp"
#include "ccr/error.hpp"

namespace ccr {

using nlohmann::json;

namespace {

template <typename T>
T Get(const json& obj, const char* key, std::string_view where) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw InputError(fmt::format("{}: missing field '{}'", where, key));
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw InputError(fmt::format("{}: field '{}' has the wrong type", where, key));
  }
}

template <typename T>
T GetOr(const json& obj, const char* key, T fallback, std::string_view where) {
  if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
  return Get<T>(obj, key, where);
}

json ParseJson(std::string_view text, std::string_view source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(fmt::format("{}: invalid JSON: {}", source, e.what()));
  }
}

TokenAnswers ParseTokens(const json& obj, const char* key, std::string_view where) {
  TokenAnswers out;
  if (!obj.contains(key) || obj.at(key).is_null()) return out;
  const json& answers = obj.at(key);
  if (!answers.is_object())
    throw InputError(fmt::format("{}: field '{}' must be an object", where, key));
  for (const auto& [item, token] : answers.items()) {
    if (token.is_string())
      out[item] = token.get<std::string>();
    else
      out[item] = token.dump();
  }
  return out;
}

std::vector<RatedItem> ParseRated(const json& obj, const char* key, std::string_view where) {
  std::vector<RatedItem> out;
  if (!obj.contains(key) || obj.at(key).is_null()) return out;
  for (const auto& r : obj.at(key)) {
    std::string w = fmt::format("{}.{}", where, key);
    out.push_back({Get<std::string>(r, "trial_id", w), Get<int>(r, "rating", w)});
  }
  return out;
}

}  // namespace

Study ParseStudy(std::string_view json_text, std::string_view source) {
  json doc = ParseJson(json_text, source);
  std::string where(source);
  Study study;
  study.study_id = Get<std::string>(doc, "study_id", where);

  const json config = doc.value("config", json::object());
  std::string cw = where + ".config";
  StudyConfig& c = study.config;
  std::string scale = GetOr<std::string>(config, "scale", "CCR", cw);
  c.scale = ParseScaleKind(scale) == ScaleKind::kCcr ? RatingScale::Ccr() : RatingScale::Acr();
  c.section_size = GetOr(config, "section_size", c.section_size, cw);
  c.golds_per_section = GetOr(config, "golds_per_section", c.golds_per_section, cw);
  c.training_interval_minutes =
      GetOr(config, "training_interval_minutes", c.training_interval_minutes, cw);
  c.gold_tolerance = GetOr(config, "gold_tolerance", c.gold_tolerance, cw);
  c.hearing_pass_threshold = GetOr(config, "hearing_pass_threshold", c.hearing_pass_threshold, cw);
  c.environment_pass_threshold =
      GetOr(config, "environment_pass_threshold", c.environment_pass_threshold, cw);
  c.device_pass_threshold = GetOr(config, "device_pass_threshold", c.device_pass_threshold, cw);
  c.target_votes_per_trial = GetOr(config, "target_votes_per_trial", c.target_votes_per_trial, cw);
  c.assignments_per_section =
      GetOr(config, "assignments_per_section", c.assignments_per_section, cw);
  c.seed = GetOr<std::uint64_t>(config, "seed", c.seed, cw);

  if (doc.contains("factors"))
    study.factors = Get<std::map<std::string, std::vector<std::string>>>(doc, "factors", where);

  for (const auto& jc : doc.value("conditions", json::array())) {
    std::string w = where + ".conditions";
    Condition cond;
    cond.id = Get<std::string>(jc, "id", w);
    cond.description = GetOr<std::string>(jc, "description", "", w);
    cond.factors = GetOr<std::map<std::string, std::string>>(jc, "factors", {}, w);
    study.conditions.push_back(std::move(cond));
  }

  for (const auto& jt : doc.value("trials", json::array())) {
    std::string w = where + ".trials";
    TrialPair t;
    t.trial_id = Get<std::string>(jt, "trial_id", w);
    t.is_gold = GetOr(jt, "is_gold", false, w);
    t.condition_id = GetOr<std::string>(jt, "condition_id", "", w);
    t.reference_uri = Get<std::string>(jt, "reference_uri", w);
    t.processed_uri = t.is_gold ? GetOr<std::string>(jt, "processed_uri", t.reference_uri, w)
                                : Get<std::string>(jt, "processed_uri", w);
    study.trials.push_back(std::move(t));
  }

  if (doc.contains("training") && !doc.at("training").is_null()) {
    const json& jt = doc.at("training");
    std::string w = where + ".training";
    study.training = TrainingBlock{
        GetOr<std::vector<std::string>>(jt, "anchor_trial_ids", {}, w),
        Get<std::string>(jt, "gold_trial_id", w)};
  }
  return study;
}

Study LoadStudy(const std::filesystem::path& path) {
  return ParseStudy(csv::ReadText(path), path.filename().string());
}

std::string StudyToJson(const Study& study) {
  const StudyConfig& c = study.config;
  json doc;
  doc["study_id"] = study.study_id;
  doc["config"] = {
      {"scale", std::string(ToString(c.scale.kind()))},
      {"section_size", c.section_size},
      {"golds_per_section", c.golds_per_section},
      {"training_interval_minutes", c.training_interval_minutes},
      {"gold_tolerance", c.gold_tolerance},
      {"hearing_pass_threshold", c.hearing_pass_threshold},
      {"environment_pass_threshold", c.environment_pass_threshold},
      {"device_pass_threshold", c.device_pass_threshold},
      {"target_votes_per_trial", c.target_votes_per_trial},
      {"assignments_per_section", c.assignments_per_section},
      {"seed", c.seed},
  };
  doc["factors"] = study.factors;
  doc["conditions"] = json::array();
  for (const auto& cond : study.conditions)
    doc["conditions"].push_back(
        {{"id", cond.id}, {"description", cond.description}, {"factors", cond.factors}});
  doc["trials"] = json::array();
  for (const auto& t : study.trials) {
    json jt = {{"trial_id", t.trial_id},
               {"reference_uri", t.reference_uri},
               {"processed_uri", t.processed_uri}};
    if (t.is_gold) jt["is_gold"] = true;
    if (!t.condition_id.empty()) jt["condition_id"] = t.condition_id;
    doc["trials"].push_back(std::move(jt));
  }
  if (study.training)
    doc["training"] = {{"anchor_trial_ids", study.training->anchor_trial_ids},
                       {"gold_trial_id", study.training->gold_trial_id}};
  return doc.dump(2) + "\n";
}

Submission ParseSubmission(std::string_view json_text, const std::vector<AnswerKeyRow>* answer_key) {
  json doc = ParseJson(json_text, "submission");
  if (!doc.is_object()) throw InputError("submission: expected a JSON object");
  Submission s;
  s.worker_id = Get<std::string>(doc, "worker_id", "submission");
  s.assignment_id = Get<std::string>(doc, "assignment_id", "submission");
  const std::string where = fmt::format("submission {}/{}", s.worker_id, s.assignment_id);
  s.session_timestamp = Get<std::string>(doc, "session_timestamp", where);
  if (doc.contains("last_training_timestamp") && !doc.at("last_training_timestamp").is_null())
    s.last_training_timestamp = Get<std::string>(doc, "last_training_timestamp", where);
  s.training_answers = ParseRated(doc, "training_answers", where);
  s.device_check_answers = ParseTokens(doc, "device_check_answers", where);
  if (doc.contains("hearing_test_answers") && !doc.at("hearing_test_answers").is_null())
    s.hearing_test_answers = ParseTokens(doc, "hearing_test_answers", where);
  s.environment_test_answers = ParseTokens(doc, "environment_test_answers", where);
  s.gold_answers = ParseRated(doc, "gold_answers", where);

  for (const auto& jv : doc.value("votes", json::array())) {
    std::string w = where + ".votes";
    VoteRecord v;
    v.trial_id = Get<std::string>(jv, "trial_id", w);
    v.raw_rating = Get<int>(jv, "rating", w);
    if (jv.contains("order") && !jv.at("order").is_null())
      v.order = ParsePresentationOrder(Get<std::string>(jv, "order", w));
    v.listen_complete = GetOr(jv, "listen_complete", true, w);
    v.timestamp = GetOr<std::string>(jv, "timestamp", "", w);
    s.votes.push_back(std::move(v));
  }

  if (doc.contains("items")) {
    if (answer_key == nullptr)
      throw InputError(where + ": 'items' ratings need the manifest answer key");
    std::map<std::pair<std::string, int>, const AnswerKeyRow*> index;
    for (const auto& row : *answer_key) index[{row.section_id, row.item_index}] = &row;
    for (const auto& ji : doc.at("items")) {
      std::string w = where + ".items";
      auto section = Get<std::string>(ji, "section_id", w);
      int item_index = Get<int>(ji, "item_index", w);
      auto it = index.find({section, item_index});
      if (it == index.end())
        throw InputError(fmt::format("{}: item ({}, {}) not in answer key", w, section, item_index));
      const AnswerKeyRow& key = *it->second;
      int rating = Get<int>(ji, "rating", w);
      if (key.is_gold) {
        s.gold_answers.push_back({key.trial_id, rating});
      } else {
        VoteRecord v;
        v.trial_id = key.trial_id;
        v.raw_rating = rating;
        v.order = key.order;
        v.listen_complete = GetOr(ji, "listen_complete", true, w);
        v.timestamp = GetOr<std::string>(ji, "timestamp", "", w);
        s.votes.push_back(std::move(v));
      }
    }
  }
  return s;
}

std::vector<Submission> ReadSubmissionsJsonl(const std::filesystem::path& path,
                                             const std::vector<AnswerKeyRow>* answer_key) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open '{}' for reading", path.string()));
  std::vector<Submission> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(ParseSubmission(line, answer_key));
    } catch (const InputError& e) {
      throw InputError(fmt::format("{}:{}: {}", path.filename().string(), number, e.what()));
    }
  }
  return out;
}

std::string SubmissionToJson(const Submission& s) {
  json doc;
  doc["worker_id"] = s.worker_id;
  doc["assignment_id"] = s.assignment_id;
  doc["session_timestamp"] = s.session_timestamp;
  doc["last_training_timestamp"] =
      s.last_training_timestamp ? json(*s.last_training_timestamp) : json(nullptr);
  auto rated = [](const std::vector<RatedItem>& items) {
    json a = json::array();
    for (const auto& r : items) a.push_back({{"trial_id", r.trial_id}, {"rating", r.rating}});
    return a;
  };
  doc["training_answers"] = rated(s.training_answers);
  doc["device_check_answers"] = s.device_check_answers;
  doc["hearing_test_answers"] = s.hearing_test_answers ? json(*s.hearing_test_answers) : json(nullptr);
  doc["environment_test_answers"] = s.environment_test_answers;
  doc["gold_answers"] = rated(s.gold_answers);
  doc["votes"] = json::array();
  for (const auto& v : s.votes) {
    json jv = {{"trial_id", v.trial_id},
               {"rating", v.raw_rating},
               {"listen_complete", v.listen_complete},
               {"timestamp", v.timestamp}};
    jv["order"] = v.order ? json(std::string(ToString(*v.order))) : json(nullptr);
    doc["votes"].push_back(std::move(jv));
  }
  return doc.dump();
}

std::vector<std::string> StructuralProblems(const Submission& s, const Study& study) {
  std::vector<std::string> problems;
  auto check_time = [&](const std::string& text, const char* field) {
    try {
      ParseTimestamp(text, field);
    } catch (const InputError& e) {
      problems.emplace_back(e.what());
    }
  };
  check_time(s.session_timestamp, "session_timestamp");
  if (s.last_training_timestamp) check_time(*s.last_training_timestamp, "last_training_timestamp");
  if (s.worker_id.empty()) problems.emplace_back("worker_id is empty");
  if (s.assignment_id.empty()) problems.emplace_back("assignment_id is empty");

  const RatingScale& scale = study.config.scale;
  std::set<std::string> gold_ids;
  for (const auto& g : s.gold_answers) {
    gold_ids.insert(g.trial_id);
    const auto* t = study.FindTrial(g.trial_id);
    if (t == nullptr)
      problems.push_back(fmt::format("gold answer references unknown trial '{}'", g.trial_id));
    else if (!t->is_gold)
      problems.push_back(fmt::format("gold answer references rated trial '{}'", g.trial_id));
    if (!scale.Contains(g.rating))
      problems.push_back(fmt::format("gold rating {} outside scale", g.rating));
  }
  for (const auto& v : s.votes) {
    if (study.FindTrial(v.trial_id) == nullptr)
      problems.push_back(fmt::format("vote references unknown trial '{}'", v.trial_id));
    if (gold_ids.count(v.trial_id))
      problems.push_back(fmt::format("trial '{}' appears as both vote and gold answer", v.trial_id));
    if (!scale.Contains(v.raw_rating))
      problems.push_back(fmt::format("vote rating {} outside scale", v.raw_rating));
    if (scale.kind() == ScaleKind::kCcr && !v.order)
      problems.push_back(fmt::format("CCR vote on '{}' lacks presentation order", v.trial_id));
    if (scale.kind() == ScaleKind::kAcr && v.order)
      problems.push_back(fmt::format("ACR vote on '{}' carries a presentation order", v.trial_id));
    if (!v.timestamp.empty()) check_time(v.timestamp, "votes.timestamp");
  }
  return problems;
}

std::vector<std::string> ValidateSubmissionPayload(std::string_view json_text, const Study& study,
                                                   const std::vector<AnswerKeyRow>* answer_key) {
  Submission s;
  try {
    s = ParseSubmission(json_text, answer_key);
  } catch (const Error& e) {
    return {e.what()};
  }
  return StructuralProblems(s, study);
}

}  // namespace ccr
