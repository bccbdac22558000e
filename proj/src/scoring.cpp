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

#include "ccr/scoring.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "ccr/distributions.hpp"
#include "ccr/error.hpp"

namespace ccr {

int CorrectVote(int raw, std::optional<PresentationOrder> order) {
  if (!order) throw UsageError("vote correction needs a presentation order (ACR votes have none)");
  if (raw < -3 || raw > 3) throw InputError(fmt::format("CCR vote {} outside -3..3", raw));
  return *order == PresentationOrder::kReferenceFirst ? raw : -raw;
}

ConditionScore ScoreFromMoments(const VoteMoments& m, std::string condition_id) {
  if (m.n < 1)
    throw InputError(fmt::format("condition '{}' has no votes", condition_id));
  ConditionScore score;
  score.condition_id = std::move(condition_id);
  score.n = static_cast<int>(m.n);
  const double n = static_cast<double>(m.n);
  score.mean = m.sum / n;
  if (m.n > 1) {
    double var = (m.sum_sq - m.sum * m.sum / n) / (n - 1.0);
    score.sd = std::sqrt(std::max(0.0, var));
    score.ci95 = dist::StudentTQuantile(0.975, n - 1.0) * score.sd / std::sqrt(n);
  }
  return score;
}

ConditionScore AggregateCondition(std::span<const int> votes, std::string condition_id) {
  VoteMoments m;
  for (int v : votes) m.Add(v);
  return ScoreFromMoments(m, std::move(condition_id));
}

double NormalizeMeanScore(double mean, double lo, double hi) {
  if (!(lo < hi)) throw UsageError(fmt::format("scale bounds need lo < hi (got {}, {})", lo, hi));
  if (!(mean >= lo && mean <= hi))
    throw InputError(fmt::format("mean {} outside scale [{}, {}]", mean, lo, hi));
  return (mean - lo) / (hi - lo);
}

double SosObjective(std::span<const std::pair<double, double>> mean_sd, double lo, double hi,
                    double a) {
  double ss = 0.0;
  for (const auto& [x, sd] : mean_sd) {
    double r = sd * sd - a * (x - lo) * (hi - x);
    ss += r * r;
  }
  return ss;
}

SosFit FitSos(std::span<const std::pair<double, double>> mean_sd, double lo, double hi) {
  if (!(lo < hi)) throw UsageError(fmt::format("scale bounds need lo < hi (got {}, {})", lo, hi));
  std::vector<double> interior;
  double num = 0.0, den = 0.0;
  for (const auto& [x, sd] : mean_sd) {
    if (!(x >= lo && x <= hi))
      throw InputError(fmt::format("mean {} outside scale [{}, {}]", x, lo, hi));
    if (sd < 0.0) throw InputError(fmt::format("negative standard deviation {}", sd));
    double w = (x - lo) * (hi - x);
    num += w * sd * sd;
    den += w * w;
    if (x > lo && x < hi) interior.push_back(x);
  }
  std::sort(interior.begin(), interior.end());
  interior.erase(std::unique(interior.begin(), interior.end()), interior.end());
  if (interior.size() < 2)
    throw NumericError("SOS fit is degenerate: fewer than two distinct means inside the scale");

  SosFit fit{std::max(0.0, num / den), lo, hi, 0.0};
  fit.rmse = std::sqrt(SosObjective(mean_sd, lo, hi, fit.a) / static_cast<double>(mean_sd.size()));
  return fit;
}

std::pair<double, double> ScaleBounds(const RatingScale& scale, Orientation orientation) {
  if (scale.kind() == ScaleKind::kAcr) return {scale.min(), scale.max()};
  if (orientation == Orientation::kDegradation) return {scale.min(), 0.0};
  return {scale.min(), scale.max()};
}

std::vector<VoteRow> ParseVotes(const csv::Table& table) {
  const auto c_worker = table.Column("worker_id"), c_assignment = table.Column("assignment_id"),
             c_trial = table.Column("trial_id"), c_condition = table.Column("condition_id"),
             c_rating = table.Column("rating"), c_order = table.Column("order");
  std::vector<VoteRow> rows;
  rows.reserve(table.rows.size());
  for (const auto& r : table.rows) {
    VoteRow row{r[c_worker], r[c_assignment], r[c_trial], r[c_condition], 0, std::nullopt};
    const std::string& rating = r[c_rating];
    auto [ptr, ec] = std::from_chars(rating.data(), rating.data() + rating.size(), row.rating);
    if (ec != std::errc() || ptr != rating.data() + rating.size())
      throw InputError(fmt::format("{}: column 'rating' holds non-integer '{}'", table.source,
                                   rating));
    if (!r[c_order].empty()) row.order = ParsePresentationOrder(r[c_order]);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string VotesCsv(const std::vector<VoteRow>& rows) {
  std::string out = csv::FormatRow(
      {"worker_id", "assignment_id", "trial_id", "condition_id", "rating", "order"});
  for (const auto& r : rows)
    out += csv::FormatRow({r.worker_id, r.assignment_id, r.trial_id, r.condition_id,
                           std::to_string(r.rating),
                           r.order ? std::string(ToString(*r.order)) : std::string()});
  return out;
}

std::vector<VoteRow> VoteRowsFromSubmissions(const std::vector<Submission>& submissions,
                                             const Study& study) {
  std::vector<VoteRow> rows;
  for (const auto& s : submissions) {
    for (const auto& v : s.votes) {
      const auto* trial = study.FindTrial(v.trial_id);
      if (trial == nullptr)
        throw InputError(fmt::format("vote references unknown trial '{}'", v.trial_id));
      rows.push_back({s.worker_id, s.assignment_id, v.trial_id, trial->condition_id, v.raw_rating,
                      v.order});
    }
  }
  return rows;
}

ScoreTables ScoreVotes(const std::vector<VoteRow>& votes, ScaleKind scale,
                       const std::set<std::pair<std::string, std::string>>* accepted) {
  const RatingScale rs = scale == ScaleKind::kCcr ? RatingScale::Ccr() : RatingScale::Acr();
  std::map<std::string, VoteMoments> by_condition;
  std::map<std::string, std::pair<std::string, VoteMoments>> by_trial;
  for (const auto& v : votes) {
    if (accepted && !accepted->count({v.worker_id, v.assignment_id})) continue;
    if (!rs.Contains(v.rating))
      throw InputError(fmt::format("rating {} on trial '{}' is outside the {} scale", v.rating,
                                   v.trial_id, ToString(scale)));
    int value = v.rating;
    if (scale == ScaleKind::kCcr) {
      if (!v.order)
        throw InputError(fmt::format("CCR vote on trial '{}' has no presentation order",
                                     v.trial_id));
      value = CorrectVote(v.rating, v.order);
    }
    by_condition[v.condition_id].Add(value);
    auto& trial = by_trial[v.trial_id];
    trial.first = v.condition_id;
    trial.second.Add(value);
  }

  ScoreTables out;
  for (const auto& [id, m] : by_condition) out.conditions.push_back(ScoreFromMoments(m, id));
  for (const auto& [id, entry] : by_trial)
    out.trials.emplace_back(id, ScoreFromMoments(entry.second, entry.first));
  return out;
}

std::string ConditionScoresCsv(const std::vector<ConditionScore>& scores) {
  std::string out = csv::FormatRow({"condition_id", "n", "mean", "sd", "ci95"});
  for (const auto& s : scores)
    out += csv::FormatRow({s.condition_id, std::to_string(s.n), csv::Num(s.mean), csv::Num(s.sd),
                           csv::Num(s.ci95)});
  return out;
}

std::string TrialScoresCsv(const std::vector<std::pair<std::string, ConditionScore>>& scores) {
  std::string out = csv::FormatRow({"trial_id", "condition_id", "n", "mean", "sd", "ci95"});
  for (const auto& [trial, s] : scores)
    out += csv::FormatRow({trial, s.condition_id, std::to_string(s.n), csv::Num(s.mean),
                           csv::Num(s.sd), csv::Num(s.ci95)});
  return out;
}

std::vector<ConditionScore> ParseConditionScores(const csv::Table& table) {
  const auto c_id = table.Column("condition_id"), c_mean = table.Column("mean");
  // n, sd and ci95 are optional so plain (condition_id, mean) tables such as
  // laboratory MOS lists can be compared too.
  auto optional_column = [&](std::string_view name) -> std::optional<std::size_t> {
    if (table.HasColumn(name)) return table.Column(name);
    return std::nullopt;
  };
  auto c_n = optional_column("n"), c_sd = optional_column("sd"), c_ci = optional_column("ci95");
  auto number = [&](const std::string& text, std::string_view column) {
    try {
      std::size_t used = 0;
      double v = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return v;
    } catch (const std::exception&) {
      throw InputError(fmt::format("{}: column '{}' holds non-number '{}'", table.source, column,
                                   text));
    }
  };
  std::vector<ConditionScore> out;
  for (const auto& r : table.rows) {
    ConditionScore s;
    s.condition_id = r[c_id];
    s.mean = number(r[c_mean], "mean");
    s.n = c_n ? static_cast<int>(number(r[*c_n], "n")) : 1;
    s.sd = c_sd ? number(r[*c_sd], "sd") : 0.0;
    s.ci95 = c_ci ? number(r[*c_ci], "ci95") : 0.0;
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace ccr
