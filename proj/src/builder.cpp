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

#include "ccr/builder.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include <fmt/format.h>

#include "ccr/error.hpp"
#include "ccr/rng.hpp"

namespace ccr {

namespace {

// Stream tags for Rng::Derive.
constexpr std::uint64_t kPassStream = 1;
constexpr std::uint64_t kTopUpStream = 2;
constexpr std::uint64_t kOrderStream = 3;
constexpr std::uint64_t kSectionStream = 4;
constexpr std::uint64_t kTrainingStream = 5;

std::string SectionId(std::size_t index) { return fmt::format("S{:04}", index + 1); }

// Expected answer when the reference is presented twice: "About the Same".
constexpr int kGoldExpected = 0;

}  // namespace

OrderAssignment AssignPresentationOrder(const std::vector<TrialReplication>& assignments,
                                        std::uint64_t seed) {
  std::map<std::string, std::vector<int>> by_trial;
  for (const auto& a : assignments) by_trial[a.trial_id].push_back(a.replication);

  OrderAssignment out;
  std::uint64_t trial_index = 0;
  for (auto& [trial, reps] : by_trial) {
    std::sort(reps.begin(), reps.end());
    Rng rng(Rng::Derive(seed, kOrderStream, trial_index++));
    std::vector<PresentationOrder> orders;
    orders.reserve(reps.size());
    for (std::size_t i = 0; i < reps.size() / 2; ++i) {
      orders.push_back(PresentationOrder::kReferenceFirst);
      orders.push_back(PresentationOrder::kProcessedFirst);
    }
    if (reps.size() % 2)
      orders.push_back(rng.Index(2) == 0 ? PresentationOrder::kReferenceFirst
                                         : PresentationOrder::kProcessedFirst);
    rng.Shuffle(orders);
    for (std::size_t i = 0; i < reps.size(); ++i) out[{trial, reps[i]}] = orders[i];
  }
  return out;
}

SectionItem MakeItem(const TrialPair& trial, PresentationOrder order, int replication) {
  SectionItem item;
  item.trial_id = trial.trial_id;
  item.condition_id = trial.condition_id;
  item.hidden_order = order;
  item.is_gold = trial.is_gold;
  item.replication = replication;
  if (order == PresentationOrder::kReferenceFirst) {
    item.first_uri = trial.reference_uri;
    item.second_uri = trial.processed_uri;
  } else {
    item.first_uri = trial.processed_uri;
    item.second_uri = trial.reference_uri;
  }
  return item;
}

std::vector<RatingSection> AssembleSections(const std::vector<TrialPair>& trials,
                                            const std::vector<TrialPair>& gold_pool,
                                            const StudyConfig& config, std::uint64_t seed) {
  if (config.scale.kind() != ScaleKind::kCcr)
    throw ConfigError("section assembly supports CCR studies only");
  if (gold_pool.empty()) throw ConfigError("gold pool is empty");
  if (trials.empty()) throw ConfigError("no rated trials");
  const auto section_size = static_cast<std::size_t>(config.section_size);
  const auto golds = static_cast<std::size_t>(config.golds_per_section);
  if (section_size == 0) throw ConfigError("section_size must be positive");
  if (trials.size() < section_size)
    throw ConfigError(fmt::format("{} rated trials cannot fill a section of {} distinct trials",
                                  trials.size(), section_size));
  if (gold_pool.size() < golds)
    throw ConfigError(fmt::format("gold pool has {} trials, sections need {}", gold_pool.size(),
                                  golds));

  struct Slot {
    std::size_t trial;
    int replication;
    bool used = false;
  };
  const int replications = config.Replications();
  std::vector<Slot> stream;
  stream.reserve(trials.size() * static_cast<std::size_t>(replications));
  for (int pass = 0; pass < replications; ++pass) {
    std::vector<std::size_t> order(trials.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng(Rng::Derive(seed, kPassStream, static_cast<std::uint64_t>(pass))).Shuffle(order);
    for (auto t : order) stream.push_back({t, pass});
  }

  // Greedy fill: take the earliest unused slot whose trial is not yet in the
  // current section. Skipped slots stay queued for the next section.
  std::vector<std::vector<Slot>> plan;
  std::size_t cursor = 0;
  while (cursor < stream.size()) {
    std::vector<Slot> section;
    std::set<std::size_t> present;
    for (std::size_t i = cursor; i < stream.size() && section.size() < section_size; ++i) {
      if (stream[i].used || present.count(stream[i].trial)) continue;
      stream[i].used = true;
      present.insert(stream[i].trial);
      section.push_back(stream[i]);
    }
    while (cursor < stream.size() && stream[cursor].used) ++cursor;
    if (section.size() < section_size) {
      std::vector<std::size_t> extra(trials.size());
      for (std::size_t i = 0; i < extra.size(); ++i) extra[i] = i;
      Rng(Rng::Derive(seed, kTopUpStream, plan.size())).Shuffle(extra);
      for (auto t : extra) {
        if (section.size() == section_size) break;
        if (present.insert(t).second) section.push_back({t, replications, true});
      }
    }
    plan.push_back(std::move(section));
  }

  std::vector<TrialReplication> assignments;
  for (const auto& section : plan)
    for (const auto& slot : section)
      assignments.push_back({trials[slot.trial].trial_id, slot.replication});
  OrderAssignment orders = AssignPresentationOrder(assignments, seed);

  std::vector<RatingSection> sections;
  sections.reserve(plan.size());
  for (std::size_t s = 0; s < plan.size(); ++s) {
    Rng rng(Rng::Derive(seed, kSectionStream, s));
    RatingSection section;
    section.section_id = SectionId(s);
    for (const auto& slot : plan[s]) {
      const auto& trial = trials[slot.trial];
      section.items.push_back(
          MakeItem(trial, orders.at({trial.trial_id, slot.replication}), slot.replication));
    }
    rng.Shuffle(section.items);

    std::vector<std::size_t> pool(gold_pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
    rng.Shuffle(pool);
    for (std::size_t g = 0; g < golds; ++g) {
      auto order = rng.Index(2) == 0 ? PresentationOrder::kReferenceFirst
                                     : PresentationOrder::kProcessedFirst;
      auto pos = rng.Index(section.items.size() + 1);
      section.items.insert(section.items.begin() + static_cast<std::ptrdiff_t>(pos),
                           MakeItem(gold_pool[pool[g]], order));
    }
    sections.push_back(std::move(section));
  }
  return sections;
}

RatingSection AssembleTrainingSection(const Study& study, std::uint64_t seed) {
  if (!study.training) throw ConfigError("study declares no training block");
  Rng rng(Rng::Derive(seed, kTrainingStream));
  RatingSection section;
  section.section_id = "TRAINING";
  for (const auto& id : study.training->anchor_trial_ids) {
    const auto* trial = study.FindTrial(id);
    if (trial == nullptr) throw ConfigError(fmt::format("unknown anchor trial '{}'", id));
    auto order = rng.Index(2) == 0 ? PresentationOrder::kReferenceFirst
                                   : PresentationOrder::kProcessedFirst;
    section.items.push_back(MakeItem(*trial, order));
  }
  rng.Shuffle(section.items);
  const auto* gold = study.FindTrial(study.training->gold_trial_id);
  if (gold == nullptr || !gold->is_gold)
    throw ConfigError(fmt::format("training gold '{}' is not a gold trial",
                                  study.training->gold_trial_id));
  auto pos = rng.Index(section.items.size() + 1);
  section.items.insert(section.items.begin() + static_cast<std::ptrdiff_t>(pos),
                       MakeItem(*gold, PresentationOrder::kReferenceFirst));
  return section;
}

TaskManifest EmitTaskManifest(const std::vector<RatingSection>& sections) {
  TaskManifest manifest;
  for (const auto& section : sections) {
    int index = 1;
    for (const auto& item : section.items) {
      manifest.worker_rows.push_back({section.section_id, index, item.first_uri, item.second_uri});
      AnswerKeyRow key{section.section_id, index,          item.trial_id, item.condition_id,
                       item.hidden_order,  item.is_gold,   std::nullopt};
      if (item.is_gold) key.expected_gold_answer = kGoldExpected;
      manifest.key_rows.push_back(std::move(key));
      ++index;
    }
  }
  return manifest;
}

std::string WorkerCsv(const TaskManifest& manifest, const csv::WriteOptions& options) {
  std::string out = csv::FormatRow(
      {"section_id", "item_index", "clip_first_url", "clip_second_url"}, options);
  for (const auto& r : manifest.worker_rows)
    out += csv::FormatRow({r.section_id, std::to_string(r.item_index), r.first_uri, r.second_uri},
                          options);
  return out;
}

std::string AnswerKeyCsv(const TaskManifest& manifest, const csv::WriteOptions& options) {
  std::string out = csv::FormatRow({"section_id", "item_index", "trial_id", "condition_id",
                                    "order", "is_gold", "expected_gold_answer"},
                                   options);
  for (const auto& r : manifest.key_rows)
    out += csv::FormatRow(
        {r.section_id, std::to_string(r.item_index), r.trial_id, r.condition_id,
         std::string(ToString(r.order)), r.is_gold ? "1" : "0",
         r.expected_gold_answer ? std::to_string(*r.expected_gold_answer) : ""},
        options);
  return out;
}

namespace {

int ParseInt(const std::string& text, const csv::Table& table, std::string_view column) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw InputError(fmt::format("{}: column '{}' holds non-integer '{}'", table.source, column,
                                 text));
  return value;
}

bool ParseFlag(const std::string& text, const csv::Table& table, std::string_view column) {
  if (text == "1" || text == "true") return true;
  if (text == "0" || text == "false") return false;
  throw InputError(fmt::format("{}: column '{}' holds non-flag '{}'", table.source, column, text));
}

}  // namespace

std::vector<AnswerKeyRow> ParseAnswerKey(const csv::Table& key) {
  const auto c_section = key.Column("section_id"), c_index = key.Column("item_index"),
             c_trial = key.Column("trial_id"), c_cond = key.Column("condition_id"),
             c_order = key.Column("order"), c_gold = key.Column("is_gold"),
             c_expected = key.Column("expected_gold_answer");
  std::vector<AnswerKeyRow> rows;
  rows.reserve(key.rows.size());
  for (const auto& r : key.rows) {
    AnswerKeyRow row;
    row.section_id = r[c_section];
    row.item_index = ParseInt(r[c_index], key, "item_index");
    row.trial_id = r[c_trial];
    row.condition_id = r[c_cond];
    row.order = ParsePresentationOrder(r[c_order]);
    row.is_gold = ParseFlag(r[c_gold], key, "is_gold");
    if (!r[c_expected].empty())
      row.expected_gold_answer = ParseInt(r[c_expected], key, "expected_gold_answer");
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<RatingSection> ParseTaskManifest(const csv::Table& worker, const csv::Table& key) {
  const auto c_section = worker.Column("section_id"), c_index = worker.Column("item_index"),
             c_first = worker.Column("clip_first_url"), c_second = worker.Column("clip_second_url");
  std::map<std::pair<std::string, int>, const AnswerKeyRow*> by_key;
  auto key_rows = ParseAnswerKey(key);
  for (const auto& row : key_rows)
    if (!by_key.emplace(std::pair{row.section_id, row.item_index}, &row).second)
      throw InputError(fmt::format("{}: duplicate key ({}, {})", key.source, row.section_id,
                                   row.item_index));
  if (worker.rows.size() != key_rows.size())
    throw InputError(fmt::format("{} has {} rows but {} has {}", worker.source, worker.rows.size(),
                                 key.source, key_rows.size()));

  std::vector<RatingSection> sections;
  for (const auto& r : worker.rows) {
    int index = ParseInt(r[c_index], worker, "item_index");
    auto it = by_key.find({r[c_section], index});
    if (it == by_key.end())
      throw InputError(fmt::format("{}: no key row for ({}, {})", key.source, r[c_section], index));
    const AnswerKeyRow& k = *it->second;
    if (sections.empty() || sections.back().section_id != r[c_section])
      sections.push_back({r[c_section], {}});
    auto& items = sections.back().items;
    if (index != static_cast<int>(items.size()) + 1)
      throw InputError(fmt::format("{}: section {} item {} out of sequence", worker.source,
                                   r[c_section], index));
    SectionItem item;
    item.trial_id = k.trial_id;
    item.condition_id = k.condition_id;
    item.first_uri = r[c_first];
    item.second_uri = r[c_second];
    item.hidden_order = k.order;
    item.is_gold = k.is_gold;
    items.push_back(std::move(item));
  }
  return sections;
}

}  // namespace ccr
