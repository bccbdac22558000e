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
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ccr/model.hpp"
#include "ccr/scoring.hpp"
#include "ccr/screening.hpp"

// File-based stages. Every stage reads and writes CSV/JSON so runs can be
// replayed and diffed; none embeds wall-clock time in its outputs.
namespace ccr::pipeline {

namespace fs = std::filesystem;

struct BuildSummary {
  std::size_t sections = 0;
  std::size_t items = 0;
  int replications = 0;
};

/// Writes worker.csv, answer_key.csv, build.json and, when the study
/// declares one, training_worker.csv / training_key.csv into `out_dir`.
BuildSummary Build(const Study& study, std::uint64_t seed, const fs::path& out_dir);

struct ScreenOptions {
  fs::path keys;
  fs::path submissions;
  std::optional<fs::path> manifest_key;  // resolves "items" payloads
  fs::path out;
  std::optional<fs::path> votes_out;
  std::optional<fs::path> summary_out;  // JSON
};

ScreeningSummary Screen(const Study& study, const ScreenOptions& options);

struct ScoreOptions {
  std::optional<fs::path> screened;
  fs::path votes;
  fs::path out;
  std::optional<fs::path> per_trial_out;
  ScaleKind scale = ScaleKind::kCcr;
  Orientation orientation = Orientation::kProcessedVsReference;
};

struct ScoreSummary {
  std::size_t conditions = 0;
  // Conditions above the upper bound of the chosen orientation (CMOS > 0
  // under kDegradation). Reported, never clipped.
  std::size_t outside_orientation = 0;
};

ScoreSummary Score(const ScoreOptions& options);

/// Each stats command returns its JSON report; with a non-empty `out_dir`
/// it also writes <name>.json and <name>.csv there.
std::string StatsCompare(const fs::path& a, const fs::path& b, const fs::path& out_dir);
std::string StatsIcc(const std::vector<fs::path>& runs, const fs::path& out_dir);

struct AnovaOptions {
  fs::path votes;
  std::optional<fs::path> screened;
  std::string factor_a;
  std::string factor_b;
  std::map<std::string, std::string> filters;  // factor -> required level
  double alpha = 0.05;
};
std::string StatsAnova(const Study& study, const AnovaOptions& options, const fs::path& out_dir);

std::string StatsRankDelta(const fs::path& a, const fs::path& b,
                           const std::optional<fs::path>& dims, const std::string& dims_column,
                           const fs::path& out_dir);

/// Agreement across pairwise CSVs written by StatsAnova.
std::string StatsAgreement(const std::vector<fs::path>& pairwise, const fs::path& out_dir);

struct SimulateOptions {
  fs::path true_scores;  // condition_id,true_score
  int runs = 3;
  int raters = 60;
  int votes_per_condition = 60;
  double sigma_v = 0.7;
  double sigma_b = 0.1;
  double last_run_offset = 0.0;
  std::uint64_t seed = 0;
  fs::path out_dir;
};

/// Writes run<k>_votes.csv (votes.csv schema, corrected values with
/// R_FIRST), run<k>_scores.csv and report.json.
std::string Simulate(const SimulateOptions& options);

struct ReportOptions {
  std::vector<fs::path> scores;                        // condition score tables
  std::vector<std::pair<double, double>> bounds;       // per table; inferred when empty
  std::optional<fs::path> screened;
  fs::path out_dir;
  std::map<std::string, std::string> config;           // echoed verbatim
};

/// Writes report.json, report.txt, scatter.csv and sos.csv.
std::string Report(const ReportOptions& options);

}  // namespace ccr::pipeline
