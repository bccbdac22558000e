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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ccr/csv.hpp"
#include "ccr/model.hpp"

namespace ccr {

struct SectionItem {
  std::string trial_id;
  std::string condition_id;
  std::string first_uri;
  std::string second_uri;
  PresentationOrder hidden_order = PresentationOrder::kReferenceFirst;
  bool is_gold = false;
  int replication = 0;  // not serialized

  bool operator==(const SectionItem& o) const {
    return trial_id == o.trial_id && condition_id == o.condition_id &&
           first_uri == o.first_uri && second_uri == o.second_uri &&
           hidden_order == o.hidden_order && is_gold == o.is_gold;
  }
};

struct RatingSection {
  std::string section_id;
  std::vector<SectionItem> items;

  bool operator==(const RatingSection&) const = default;
};

struct TrialReplication {
  std::string trial_id;
  int replication = 0;
};

using OrderAssignment = std::map<std::pair<std::string, int>, PresentationOrder>;

/// Balanced order per trial: ReferenceFirst and ProcessedFirst counts differ
/// by at most one. Deterministic in (assignments, seed).
OrderAssignment AssignPresentationOrder(const std::vector<TrialReplication>& assignments,
                                        std::uint64_t seed);

/// Places URIs according to the order: reference first or processed first.
SectionItem MakeItem(const TrialPair& trial, PresentationOrder order, int replication = 0);

/// Splits Replications() passes over `trials` into sections of
/// config.section_size distinct rated trials plus config.golds_per_section
/// gold trials at uniformly random positions.
///
/// When the total item count is not a multiple of section_size the last
/// section is topped up with extra replications of trials not already in it,
/// so a trial appears either Replications() or Replications() + 1 times.
/// Throws ConfigError for an empty gold pool, too few trials to fill a
/// section without duplicates, or a non-CCR scale.
std::vector<RatingSection> AssembleSections(const std::vector<TrialPair>& trials,
                                            const std::vector<TrialPair>& gold_pool,
                                            const StudyConfig& config, std::uint64_t seed);

/// Training block: declared anchors plus the training gold, shuffled.
RatingSection AssembleTrainingSection(const Study& study, std::uint64_t seed);

struct WorkerRow {
  std::string section_id;
  int item_index = 0;  // 1-based
  std::string first_uri;
  std::string second_uri;
};

struct AnswerKeyRow {
  std::string section_id;
  int item_index = 0;
  std::string trial_id;
  std::string condition_id;
  PresentationOrder order = PresentationOrder::kReferenceFirst;
  bool is_gold = false;
  std::optional<int> expected_gold_answer;
};

struct TaskManifest {
  std::vector<WorkerRow> worker_rows;
  std::vector<AnswerKeyRow> key_rows;
};

TaskManifest EmitTaskManifest(const std::vector<RatingSection>& sections);

std::string WorkerCsv(const TaskManifest& manifest, const csv::WriteOptions& options = {});
std::string AnswerKeyCsv(const TaskManifest& manifest, const csv::WriteOptions& options = {});

std::vector<AnswerKeyRow> ParseAnswerKey(const csv::Table& key);

/// Joins worker and answer-key tables on (section_id, item_index).
std::vector<RatingSection> ParseTaskManifest(const csv::Table& worker, const csv::Table& key);

}  // namespace ccr
