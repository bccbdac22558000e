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

#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ccr/csv.hpp"
#include "ccr/model.hpp"

namespace ccr {

struct CorrectedVote {
  std::string trial_id;
  std::string condition_id;
  int value = 0;  // processed relative to reference
};

/// Maps a raw CCR vote (second clip relative to first) onto the quality of
/// the processed clip relative to the reference: identity for
/// ReferenceFirst, sign flip for ProcessedFirst. A missing order (ACR vote)
/// is a UsageError.
int CorrectVote(int raw, std::optional<PresentationOrder> order);

/// Mergeable (n, sum, sum of squares) partial for parallel aggregation.
struct VoteMoments {
  std::int64_t n = 0;
  double sum = 0.0;
  double sum_sq = 0.0;

  void Add(double v) {
    ++n;
    sum += v;
    sum_sq += v * v;
  }
  VoteMoments& Merge(const VoteMoments& o) {
    n += o.n;
    sum += o.sum;
    sum_sq += o.sum_sq;
    return *this;
  }
};

/// Mean, sample sd (n-1) and t-based 95% CI half-width; n = 1 yields sd =
/// ci95 = 0. Throws InputError for an empty moment set.
ConditionScore ScoreFromMoments(const VoteMoments& moments, std::string condition_id);
ConditionScore AggregateCondition(std::span<const int> votes, std::string condition_id);

double NormalizeMeanScore(double mean, double lo, double hi);

struct SosFit {
  double a = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double rmse = 0.0;  // of sd^2 residuals
};

/// Least-squares fit of sd^2 = a (x - lo)(hi - x) over per-condition
/// (mean, sd) pairs, closed form, clamped at zero. NumericError when fewer
/// than two distinct means lie strictly inside the scale.
SosFit FitSos(std::span<const std::pair<double, double>> mean_sd, double lo, double hi);

/// Sum of squared sd^2 residuals for a given a; exposed for optimality checks.
double SosObjective(std::span<const std::pair<double, double>> mean_sd, double lo, double hi,
                    double a);

/// Reporting orientation of CMOS. Degradation studies report on [-3, 0];
/// votes are never altered, only the bounds used for normalization.
enum class Orientation { kProcessedVsReference, kDegradation };

std::pair<double, double> ScaleBounds(const RatingScale& scale, Orientation orientation);

/// One row of votes.csv. `order` is empty for ACR votes.
struct VoteRow {
  std::string worker_id;
  std::string assignment_id;
  std::string trial_id;
  std::string condition_id;
  int rating = 0;
  std::optional<PresentationOrder> order;
};

std::vector<VoteRow> ParseVotes(const csv::Table& table);
std::string VotesCsv(const std::vector<VoteRow>& rows);

/// Flattens submissions into vote rows, resolving conditions via the study.
std::vector<VoteRow> VoteRowsFromSubmissions(const std::vector<Submission>& submissions,
                                             const Study& study);

struct ScoreTables {
  std::vector<ConditionScore> conditions;  // sorted by condition_id
  std::vector<std::pair<std::string, ConditionScore>> trials;  // (trial_id, score with condition_id)
};

/// Corrects (CCR) and aggregates votes per condition and per trial. With
/// `accepted` set, only votes of listed (worker_id, assignment_id) pairs count.
ScoreTables ScoreVotes(const std::vector<VoteRow>& votes, ScaleKind scale,
                       const std::set<std::pair<std::string, std::string>>* accepted = nullptr);

std::string ConditionScoresCsv(const std::vector<ConditionScore>& scores);
std::string TrialScoresCsv(const std::vector<std::pair<std::string, ConditionScore>>& scores);
std::vector<ConditionScore> ParseConditionScores(const csv::Table& table);

}  // namespace ccr
