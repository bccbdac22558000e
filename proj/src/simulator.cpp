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

#include "ccr/simulator.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "ccr/error.hpp"
#include "ccr/rng.hpp"
#include "ccr/scoring.hpp"

namespace ccr::sim {

namespace {
constexpr std::uint64_t kRunStream = 10;
constexpr std::uint64_t kRaterStream = 11;
}  // namespace

std::vector<SimulatedVote> SimulateVotes(const std::map<std::string, double>& true_scores,
                                         int n_raters, int votes_per_condition,
                                         const RaterModel& model, std::uint64_t seed) {
  if (n_raters < 1) throw InputError("simulation needs at least one rater");
  if (votes_per_condition < 1) throw InputError("simulation needs at least one vote per condition");
  if (model.bias_sd < 0.0 || model.vote_sd < 0.0 || model.lo > model.hi)
    throw InputError("rater model needs non-negative deviations and lo <= hi");
  for (const auto& [id, score] : true_scores)
    if (!(score >= model.lo && score <= model.hi))
      throw InputError(fmt::format("true score {} of '{}' outside [{}, {}]", score, id, model.lo,
                                   model.hi));

  std::vector<Rng> streams;
  std::vector<double> bias;
  streams.reserve(static_cast<std::size_t>(n_raters));
  for (int r = 0; r < n_raters; ++r) {
    streams.emplace_back(Rng::Derive(seed, kRaterStream, static_cast<std::uint64_t>(r)));
    bias.push_back(model.bias_sd * streams.back().Normal());
  }

  std::vector<SimulatedVote> votes;
  votes.reserve(true_scores.size() * static_cast<std::size_t>(votes_per_condition));
  std::size_t slot = 0;
  for (const auto& [id, score] : true_scores) {
    for (int j = 0; j < votes_per_condition; ++j, ++slot) {
      auto r = static_cast<std::size_t>(slot % static_cast<std::size_t>(n_raters));
      double latent = score + model.offset + bias[r] + model.vote_sd * streams[r].Normal();
      auto v = static_cast<int>(std::round(latent));  // half away from zero
      votes.push_back({fmt::format("R{:04}", r + 1), id, std::clamp(v, model.lo, model.hi)});
    }
  }
  return votes;
}

std::vector<ConditionScore> ScoreSimulated(const std::vector<SimulatedVote>& votes) {
  std::map<std::string, VoteMoments> moments;
  for (const auto& v : votes) moments[v.condition_id].Add(v.vote);
  std::vector<ConditionScore> out;
  for (const auto& [id, m] : moments) out.push_back(ScoreFromMoments(m, id));
  return out;
}

ReplicationReport CompareRuns(const std::vector<std::vector<ConditionScore>>& runs) {
  const std::size_t k = runs.size();
  if (k < 2) throw InputError("run comparison needs at least 2 runs");
  const std::size_t n = runs.front().size();
  std::vector<std::vector<double>> columns(k);
  for (std::size_t j = 0; j < k; ++j) {
    if (runs[j].size() != n) throw InputError("runs cover different condition sets");
    for (std::size_t i = 0; i < n; ++i) {
      if (runs[j][i].condition_id != runs[0][i].condition_id)
        throw InputError(fmt::format("run {} condition '{}' does not match '{}'", j + 1,
                                     runs[j][i].condition_id, runs[0][i].condition_id));
      columns[j].push_back(runs[j][i].mean);
    }
  }

  ReplicationReport report;
  report.scores = runs;
  report.pearson.assign(k, std::vector<double>(k, 1.0));
  report.spearman.assign(k, std::vector<double>(k, 1.0));
  report.rmse.assign(k, std::vector<double>(k, 0.0));
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b) {
      report.pearson[a][b] = report.pearson[b][a] = stats::Pearson(columns[a], columns[b]).r;
      report.spearman[a][b] = report.spearman[b][a] = stats::Spearman(columns[a], columns[b]).r;
      report.rmse[a][b] = report.rmse[b][a] = stats::Rmse(columns[a], columns[b]);
    }
  for (const auto& run : runs) {
    double sum = 0.0;
    for (const auto& s : run) sum += s.ci95;
    report.mean_ci95.push_back(sum / static_cast<double>(run.size()));
  }

  std::vector<std::vector<double>> matrix(n, std::vector<double>(k));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j) matrix[i][j] = columns[j][i];
  report.icc = stats::IccA1(matrix).icc;
  report.mean_pairwise_rmse = stats::MeanPairwiseRmse(columns);

  std::vector<double> others(n, 0.0);
  for (std::size_t j = 0; j + 1 < k; ++j)
    for (std::size_t i = 0; i < n; ++i) others[i] += columns[j][i] / static_cast<double>(k - 1);
  report.last_run_map = stats::FitLinearMap(columns.back(), others);
  auto mapped = columns;
  for (double& v : mapped.back()) v = report.last_run_map.Apply(v);
  report.mean_pairwise_rmse_mapped = stats::MeanPairwiseRmse(mapped);
  return report;
}

ReplicationReport RunReplicationExperiment(const std::map<std::string, double>& true_scores,
                                           const std::vector<RaterModel>& models, int n_raters,
                                           int votes_per_condition, std::uint64_t seed) {
  if (models.size() < 2) throw InputError("replication experiment needs at least 2 runs");
  std::vector<std::vector<SimulatedVote>> votes;
  std::vector<std::vector<ConditionScore>> scores;
  for (std::size_t run = 0; run < models.size(); ++run) {
    votes.push_back(SimulateVotes(true_scores, n_raters, votes_per_condition, models[run],
                                  Rng::Derive(seed, kRunStream, run)));
    scores.push_back(ScoreSimulated(votes.back()));
  }
  ReplicationReport report = CompareRuns(scores);
  report.votes = std::move(votes);
  return report;
}

}  // namespace ccr::sim
