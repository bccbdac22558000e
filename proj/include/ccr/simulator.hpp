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
#include <string>
#include <vector>

#include "ccr/model.hpp"
#include "ccr/stats.hpp"

namespace ccr::sim {

/// Generative rater model: vote = clamp(round(true + offset + bias + noise)),
/// bias ~ N(0, bias_sd) per rater, noise ~ N(0, vote_sd) per vote, rounding
/// half away from zero.
struct RaterModel {
  double bias_sd = 0.0;
  double vote_sd = 0.0;
  double offset = 0.0;  // shared by every rater of a run
  int lo = -3;
  int hi = 3;
};

struct SimulatedVote {
  std::string rater_id;
  std::string condition_id;
  int vote = 0;
};

/// Votes are dealt to raters round-robin in condition order; each rater
/// draws bias and noise from its own stream derived from `seed`.
std::vector<SimulatedVote> SimulateVotes(const std::map<std::string, double>& true_scores,
                                         int n_raters, int votes_per_condition,
                                         const RaterModel& model, std::uint64_t seed);

std::vector<ConditionScore> ScoreSimulated(const std::vector<SimulatedVote>& votes);

struct ReplicationReport {
  std::vector<std::vector<SimulatedVote>> votes;      // per run
  std::vector<std::vector<ConditionScore>> scores;    // per run, sorted by condition
  std::vector<std::vector<double>> pearson;           // k x k, diagonal 1
  std::vector<std::vector<double>> spearman;
  std::vector<std::vector<double>> rmse;
  std::vector<double> mean_ci95;                      // per run
  double icc = 0.0;
  double mean_pairwise_rmse = 0.0;
  // Last run mapped onto the mean of the other runs.
  stats::LinearMap last_run_map;
  double mean_pairwise_rmse_mapped = 0.0;
};

/// Runs `models.size()` independent panels (>= 2) and compares them with
/// the stats module.
ReplicationReport RunReplicationExperiment(const std::map<std::string, double>& true_scores,
                                           const std::vector<RaterModel>& models, int n_raters,
                                           int votes_per_condition, std::uint64_t seed);

/// Replication report for already-scored runs (same condition order).
ReplicationReport CompareRuns(const std::vector<std::vector<ConditionScore>>& runs);

}  // namespace ccr::sim
