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

#include "ccr/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "ccr/builder.hpp"
#include "ccr/csv.hpp"
#include "ccr/error.hpp"
#include "ccr/simulator.hpp"
#include "ccr/stats.hpp"
#include "ccr/study_io.hpp"

namespace ccr::pipeline {

using nlohmann::json;

namespace {

void EnsureDir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError(fmt::format("cannot create directory '{}': {}", dir.string(), ec.message()));
}

std::string Dump(const json& doc) { return doc.dump(2) + "\n"; }

std::set<std::pair<std::string, std::string>> AcceptedSet(const fs::path& screened) {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& o : ParseScreened(csv::ReadFile(screened)))
    if (o.accepted) out.insert({o.worker_id, o.assignment_id});
  return out;
}

std::vector<ConditionScore> LoadScores(const fs::path& path) {
  auto scores = ParseConditionScores(csv::ReadFile(path));
  if (scores.empty()) throw InputError(fmt::format("{}: no condition scores", path.filename().string()));
  std::sort(scores.begin(), scores.end(),
            [](const auto& a, const auto& b) { return a.condition_id < b.condition_id; });
  for (std::size_t i = 1; i < scores.size(); ++i)
    if (scores[i].condition_id == scores[i - 1].condition_id)
      throw InputError(fmt::format("{}: duplicate condition '{}'", path.filename().string(),
                                   scores[i].condition_id));
  return scores;
}

void RequireSameConditions(const std::vector<ConditionScore>& a, const fs::path& pa,
                           const std::vector<ConditionScore>& b, const fs::path& pb) {
  bool same = a.size() == b.size() &&
              std::equal(a.begin(), a.end(), b.begin(), [](const auto& x, const auto& y) {
                return x.condition_id == y.condition_id;
              });
  if (!same)
    throw InputError(fmt::format("{} and {} cover different condition sets",
                                 pa.filename().string(), pb.filename().string()));
}

std::vector<double> Means(const std::vector<ConditionScore>& scores) {
  std::vector<double> out;
  for (const auto& s : scores) out.push_back(s.mean);
  return out;
}

json CorrelationJson(const stats::CorrelationResult& r) {
  json j = {{"r", r.r}, {"n", r.n}};
  j["p"] = std::isnan(r.p_value) ? json(nullptr) : json(r.p_value);
  return j;
}

json MapJson(const stats::LinearMap& m) {
  return {{"slope", m.slope},
          {"intercept", m.intercept},
          {"rmse_before", m.rmse_before},
          {"rmse_after", m.rmse_after}};
}

json MatrixJson(const std::vector<std::vector<double>>& m) {
  json out = json::array();
  for (const auto& row : m) out.push_back(row);
  return out;
}

json AnovaRowJson(const stats::AnovaRow& r) {
  json j = {{"ss", r.ss}, {"df", r.df}, {"ms", r.ms}, {"p", r.p}};
  j["f"] = std::isinf(r.f) ? json("inf") : json(r.f);
  return j;
}

}  // namespace

BuildSummary Build(const Study& study, std::uint64_t seed, const fs::path& out_dir) {
  auto violations = ValidateStudy(study);
  if (!violations.empty()) {
    std::string msg = "study definition is invalid:";
    for (const auto& v : violations) msg += fmt::format("\n  {}: {}", v.field, v.rule);
    throw ConfigError(msg);
  }
  auto sections = AssembleSections(study.RatedTrials(), study.GoldPool(), study.config, seed);
  auto manifest = EmitTaskManifest(sections);
  EnsureDir(out_dir);
  csv::WriteText(out_dir / "worker.csv", WorkerCsv(manifest));
  csv::WriteText(out_dir / "answer_key.csv", AnswerKeyCsv(manifest));

  BuildSummary summary{sections.size(), manifest.worker_rows.size(), study.config.Replications()};
  json doc = {{"study_id", study.study_id},
              {"seed", seed},
              {"sections", summary.sections},
              {"items", summary.items},
              {"replications", summary.replications},
              {"section_size", study.config.section_size},
              {"golds_per_section", study.config.golds_per_section}};
  if (study.training) {
    auto training = EmitTaskManifest({AssembleTrainingSection(study, seed)});
    csv::WriteText(out_dir / "training_worker.csv", WorkerCsv(training));
    csv::WriteText(out_dir / "training_key.csv", AnswerKeyCsv(training));
    doc["training_items"] = training.worker_rows.size();
  }
  csv::WriteText(out_dir / "build.json", Dump(doc));
  return summary;
}

ScreeningSummary Screen(const Study& study, const ScreenOptions& options) {
  auto keys = ParseAnswerKeys(csv::ReadFile(options.keys), study.config);
  std::optional<std::vector<AnswerKeyRow>> manifest_key;
  if (options.manifest_key) manifest_key = ParseAnswerKey(csv::ReadFile(*options.manifest_key));
  auto submissions =
      ReadSubmissionsJsonl(options.submissions, manifest_key ? &*manifest_key : nullptr);

  std::vector<ScreeningOutcome> outcomes;
  std::size_t training_flags = 0;
  for (const auto& s : submissions) {
    auto problems = StructuralProblems(s, study);
    if (!problems.empty())
      throw InputError(fmt::format("submission {}/{}: {}", s.worker_id, s.assignment_id,
                                   problems.front()));
    outcomes.push_back(ScreenSubmission(s, keys, study));
    training_flags += ValidateTrainingExposure(s, study.config).size();
  }
  auto summary = SummarizeScreening(outcomes, submissions, study);

  csv::WriteText(options.out, ScreenedCsv(outcomes));
  if (options.votes_out) csv::WriteText(*options.votes_out, VotesCsv(VoteRowsFromSubmissions(submissions, study)));
  if (options.summary_out) {
    json reasons = json::object();
    for (const auto& [r, n] : summary.reason_counts) reasons[std::string(ToString(r))] = n;
    json doc = {{"total", summary.total},
                {"accepted", summary.accepted},
                {"acceptance_rate", summary.acceptance_rate},
                {"reason_counts", reasons},
                {"accepted_votes_per_condition", summary.accepted_votes_per_condition},
                {"mean_votes_per_condition", summary.mean_votes_per_condition},
                {"sd_votes_per_condition", summary.sd_votes_per_condition},
                {"training_flags", training_flags}};
    csv::WriteText(*options.summary_out, Dump(doc));
  }
  return summary;
}

ScoreSummary Score(const ScoreOptions& options) {
  auto votes = ParseVotes(csv::ReadFile(options.votes));
  std::optional<std::set<std::pair<std::string, std::string>>> accepted;
  if (options.screened) accepted = AcceptedSet(*options.screened);
  auto tables = ScoreVotes(votes, options.scale, accepted ? &*accepted : nullptr);
  if (tables.conditions.empty()) throw InputError("no accepted votes to score");
  csv::WriteText(options.out, ConditionScoresCsv(tables.conditions));
  if (options.per_trial_out) csv::WriteText(*options.per_trial_out, TrialScoresCsv(tables.trials));

  const RatingScale scale = options.scale == ScaleKind::kCcr ? RatingScale::Ccr() : RatingScale::Acr();
  const double upper = ScaleBounds(scale, options.orientation).second;
  ScoreSummary summary{tables.conditions.size(), 0};
  for (const auto& c : tables.conditions)
    if (c.mean > upper) ++summary.outside_orientation;
  return summary;
}

std::string StatsCompare(const fs::path& a, const fs::path& b, const fs::path& out_dir) {
  auto sa = LoadScores(a), sb = LoadScores(b);
  RequireSameConditions(sa, a, sb, b);
  auto xa = Means(sa), xb = Means(sb);
  auto pcc = stats::Pearson(xa, xb);
  auto srcc = stats::Spearman(xa, xb);
  double rmse = stats::Rmse(xa, xb);
  auto map = stats::FitLinearMap(xa, xb);
  json doc = {{"a", a.filename().string()},
              {"b", b.filename().string()},
              {"n", xa.size()},
              {"pearson", CorrelationJson(pcc)},
              {"spearman", CorrelationJson(srcc)},
              {"rmse", rmse},
              {"linear_map", MapJson(map)}};
  if (!out_dir.empty()) {
    EnsureDir(out_dir);
    csv::WriteText(out_dir / "compare.json", Dump(doc));
    csv::WriteFile(out_dir / "compare.csv", {"metric", "value"},
                   {{"n", std::to_string(xa.size())},
                    {"pearson", csv::Num(pcc.r)},
                    {"spearman", csv::Num(srcc.r)},
                    {"rmse", csv::Num(rmse)},
                    {"map_slope", csv::Num(map.slope)},
                    {"map_intercept", csv::Num(map.intercept)},
                    {"rmse_after_map", csv::Num(map.rmse_after)}});
  }
  return Dump(doc);
}

std::string StatsIcc(const std::vector<fs::path>& runs, const fs::path& out_dir) {
  if (runs.size() < 2) throw InputError("icc needs at least 2 run tables");
  std::vector<std::vector<ConditionScore>> tables;
  for (const auto& p : runs) {
    tables.push_back(LoadScores(p));
    RequireSameConditions(tables.front(), runs.front(), tables.back(), p);
  }
  auto report = sim::CompareRuns(tables);
  std::vector<std::vector<double>> matrix(tables.front().size());
  for (std::size_t i = 0; i < matrix.size(); ++i)
    for (const auto& t : tables) matrix[i].push_back(t[i].mean);
  auto icc = stats::IccA1(matrix);

  json names = json::array();
  for (const auto& p : runs) names.push_back(p.filename().string());
  json doc = {{"runs", names},
              {"n_conditions", icc.n},
              {"icc_a1", icc.icc},
              {"ms_rows", icc.ms_rows},
              {"ms_columns", icc.ms_columns},
              {"ms_error", icc.ms_error},
              {"pearson", MatrixJson(report.pearson)},
              {"spearman", MatrixJson(report.spearman)},
              {"rmse", MatrixJson(report.rmse)},
              {"mean_ci95", report.mean_ci95},
              {"mean_pairwise_rmse", report.mean_pairwise_rmse},
              {"last_run_map", MapJson(report.last_run_map)},
              {"mean_pairwise_rmse_mapped", report.mean_pairwise_rmse_mapped}};
  if (!out_dir.empty()) {
    EnsureDir(out_dir);
    csv::WriteText(out_dir / "icc.json", Dump(doc));
    std::vector<std::vector<std::string>> rows;
    for (std::size_t a = 0; a < runs.size(); ++a)
      for (std::size_t b = a + 1; b < runs.size(); ++b)
        rows.push_back({names[a].get<std::string>(), names[b].get<std::string>(),
                        csv::Num(report.pearson[a][b]), csv::Num(report.spearman[a][b]),
                        csv::Num(report.rmse[a][b])});
    csv::WriteFile(out_dir / "icc.csv", {"run_a", "run_b", "pearson", "spearman", "rmse"}, rows);
  }
  return Dump(doc);
}

std::string StatsAnova(const Study& study, const AnovaOptions& options, const fs::path& out_dir) {
  auto votes = ParseVotes(csv::ReadFile(options.votes));
  std::optional<std::set<std::pair<std::string, std::string>>> accepted;
  if (options.screened) accepted = AcceptedSet(*options.screened);
  const ScaleKind scale = study.config.scale.kind();

  std::vector<stats::Observation> observations;
  std::map<std::string, std::vector<double>> groups_b;
  for (const auto& v : votes) {
    if (accepted && !accepted->count({v.worker_id, v.assignment_id})) continue;
    const Condition* cond = study.FindCondition(v.condition_id);
    if (cond == nullptr)
      throw InputError(fmt::format("vote references unknown condition '{}'", v.condition_id));
    auto fa = cond->factors.find(options.factor_a), fb = cond->factors.find(options.factor_b);
    if (fa == cond->factors.end() || fb == cond->factors.end()) continue;
    bool keep = true;
    for (const auto& [factor, level] : options.filters) {
      auto it = cond->factors.find(factor);
      keep = keep && it != cond->factors.end() && it->second == level;
    }
    if (!keep) continue;
    double value = scale == ScaleKind::kCcr ? CorrectVote(v.rating, v.order) : v.rating;
    observations.push_back({fa->second, fb->second, value});
    groups_b[fb->second].push_back(value);
  }
  if (observations.empty())
    throw InputError(fmt::format("no votes on conditions tagged with '{}' and '{}'",
                                 options.factor_a, options.factor_b));

  auto table = stats::TwoWayAnova(observations);
  auto pairwise = stats::BonferroniPairwise(groups_b, options.alpha);

  json tests = json::array();
  for (const auto& t : pairwise.tests)
    tests.push_back({{"a", t.a}, {"b", t.b}, {"t", std::isinf(t.test.t) ? json("inf") : json(t.test.t)},
                     {"df", t.test.df}, {"p", t.test.p}, {"significant", t.significant}});
  json doc = {{"factor_a", options.factor_a},
              {"factor_b", options.factor_b},
              {"filters", options.filters},
              {"observations", observations.size()},
              {"balanced", table.balanced},
              {"effects",
               {{"factor_a", AnovaRowJson(table.factor_a)},
                {"factor_b", AnovaRowJson(table.factor_b)},
                {"interaction", AnovaRowJson(table.interaction)},
                {"residual", AnovaRowJson(table.residual)}}},
              {"ss_total", table.ss_total},
              {"pairwise",
               {{"factor", options.factor_b},
                {"alpha", pairwise.alpha},
                {"corrected_alpha", pairwise.corrected_alpha},
                {"comparisons", pairwise.tests.size()},
                {"tests", tests}}}};
  if (!out_dir.empty()) {
    EnsureDir(out_dir);
    csv::WriteText(out_dir / "anova.json", Dump(doc));
    auto row = [](const std::string& name, const stats::AnovaRow& r) {
      return std::vector<std::string>{name, csv::Num(r.ss), csv::Num(r.df), csv::Num(r.ms),
                                      std::isinf(r.f) ? "inf" : csv::Num(r.f), fmt::format("{:.6g}", r.p)};
    };
    csv::WriteFile(out_dir / "anova.csv", {"effect", "ss", "df", "ms", "f", "p"},
                   {row(options.factor_a, table.factor_a), row(options.factor_b, table.factor_b),
                    row(options.factor_a + ":" + options.factor_b, table.interaction),
                    row("residual", table.residual)});
    std::vector<std::vector<std::string>> rows;
    for (const auto& t : pairwise.tests)
      rows.push_back({t.a, t.b, std::isinf(t.test.t) ? "inf" : csv::Num(t.test.t),
                      csv::Num(t.test.df), fmt::format("{:.6g}", t.test.p), t.significant ? "1" : "0"});
    csv::WriteFile(out_dir / "pairwise.csv", {"level_a", "level_b", "t", "df", "p", "significant"},
                   rows);
  }
  return Dump(doc);
}

std::string StatsRankDelta(const fs::path& a, const fs::path& b,
                           const std::optional<fs::path>& dims, const std::string& dims_column,
                           const fs::path& out_dir) {
  std::map<std::string, double> ma, mb;
  for (const auto& s : LoadScores(a)) ma[s.condition_id] = s.mean;
  for (const auto& s : LoadScores(b)) mb[s.condition_id] = s.mean;
  auto deltas = stats::RankOrderDelta(ma, mb);

  json rows = json::array();
  std::vector<std::vector<std::string>> csv_rows;
  std::map<std::string, double> delta_map;
  for (const auto& d : deltas) {
    rows.push_back({{"condition_id", d.condition_id}, {"rank_a", d.rank_a}, {"rank_b", d.rank_b},
                    {"delta", d.delta}});
    csv_rows.push_back({d.condition_id, fmt::format("{:g}", d.rank_a), fmt::format("{:g}", d.rank_b),
                        fmt::format("{:g}", d.delta)});
    delta_map[d.condition_id] = d.delta;
  }
  json doc = {{"a", a.filename().string()}, {"b", b.filename().string()}, {"deltas", rows}};
  if (dims) {
    auto table = csv::ReadFile(*dims);
    auto c_id = table.Column("condition_id"), c_dim = table.Column(dims_column);
    std::map<std::string, double> dim;
    for (const auto& r : table.rows) {
      try {
        dim[r[c_id]] = std::stod(r[c_dim]);
      } catch (const std::exception&) {
        throw InputError(fmt::format("{}: column '{}' holds non-number '{}'", table.source,
                                     dims_column, r[c_dim]));
      }
    }
    auto corr = stats::DeltaDimensionCorrelation(delta_map, dim);
    doc["dimension"] = dims_column;
    doc["delta_dimension_correlation"] = CorrelationJson(corr);
  }
  if (!out_dir.empty()) {
    EnsureDir(out_dir);
    csv::WriteText(out_dir / "rankdelta.json", Dump(doc));
    csv::WriteFile(out_dir / "rankdelta.csv", {"condition_id", "rank_a", "rank_b", "delta"}, csv_rows);
  }
  return Dump(doc);
}

std::string StatsAgreement(const std::vector<fs::path>& pairwise, const fs::path& out_dir) {
  std::vector<stats::SignificanceMatrix> runs;
  for (const auto& path : pairwise) {
    auto table = csv::ReadFile(path);
    auto c_a = table.Column("level_a"), c_b = table.Column("level_b"),
         c_sig = table.Column("significant");
    std::set<std::string> levels;
    for (const auto& r : table.rows) {
      levels.insert(r[c_a]);
      levels.insert(r[c_b]);
    }
    stats::SignificanceMatrix m;
    m.levels.assign(levels.begin(), levels.end());
    m.verdict.assign(m.levels.size(), std::vector<std::optional<bool>>(m.levels.size()));
    auto pos = [&](const std::string& l) {
      return static_cast<std::size_t>(std::lower_bound(m.levels.begin(), m.levels.end(), l) -
                                      m.levels.begin());
    };
    for (const auto& r : table.rows) {
      bool sig = r[c_sig] == "1";
      m.verdict[pos(r[c_a])][pos(r[c_b])] = sig;
      m.verdict[pos(r[c_b])][pos(r[c_a])] = sig;
    }
    runs.push_back(std::move(m));
  }
  double agreement = stats::ConclusionAgreement(runs);
  json names = json::array();
  for (const auto& p : pairwise) names.push_back(p.string());
  std::size_t g = runs.front().levels.size();
  json doc = {{"runs", names}, {"pairs", g * (g - 1) / 2}, {"agreement", agreement}};
  if (!out_dir.empty()) {
    EnsureDir(out_dir);
    csv::WriteText(out_dir / "agreement.json", Dump(doc));
  }
  return Dump(doc);
}

std::string Simulate(const SimulateOptions& options) {
  if (options.runs < 2) throw InputError("simulate needs at least 2 runs");
  auto table = csv::ReadFile(options.true_scores);
  auto c_id = table.Column("condition_id"), c_true = table.Column("true_score");
  std::map<std::string, double> truth;
  for (const auto& r : table.rows) {
    try {
      truth[r[c_id]] = std::stod(r[c_true]);
    } catch (const std::exception&) {
      throw InputError(fmt::format("{}: column 'true_score' holds non-number '{}'", table.source,
                                   r[c_true]));
    }
  }
  if (truth.size() < 2) throw InputError("simulate needs at least 2 conditions");

  std::vector<sim::RaterModel> models(static_cast<std::size_t>(options.runs));
  for (auto& m : models) {
    m.bias_sd = options.sigma_b;
    m.vote_sd = options.sigma_v;
  }
  models.back().offset = options.last_run_offset;
  auto report = sim::RunReplicationExperiment(truth, models, options.raters,
                                              options.votes_per_condition, options.seed);

  EnsureDir(options.out_dir);
  for (std::size_t run = 0; run < models.size(); ++run) {
    std::vector<VoteRow> rows;
    for (const auto& v : report.votes[run])
      rows.push_back({v.rater_id, fmt::format("run{}", run + 1), v.condition_id, v.condition_id,
                      v.vote, PresentationOrder::kReferenceFirst});
    csv::WriteText(options.out_dir / fmt::format("run{}_votes.csv", run + 1), VotesCsv(rows));
    csv::WriteText(options.out_dir / fmt::format("run{}_scores.csv", run + 1),
                   ConditionScoresCsv(report.scores[run]));
  }
  json doc = {{"seed", options.seed},
              {"runs", options.runs},
              {"raters", options.raters},
              {"votes_per_condition", options.votes_per_condition},
              {"sigma_v", options.sigma_v},
              {"sigma_b", options.sigma_b},
              {"last_run_offset", options.last_run_offset},
              {"conditions", truth.size()},
              {"pearson", MatrixJson(report.pearson)},
              {"spearman", MatrixJson(report.spearman)},
              {"rmse", MatrixJson(report.rmse)},
              {"mean_ci95", report.mean_ci95},
              {"icc_a1", report.icc},
              {"mean_pairwise_rmse", report.mean_pairwise_rmse},
              {"last_run_map", MapJson(report.last_run_map)},
              {"mean_pairwise_rmse_mapped", report.mean_pairwise_rmse_mapped}};
  csv::WriteText(options.out_dir / "report.json", Dump(doc));
  return Dump(doc);
}

namespace {

std::pair<double, double> InferBounds(const std::vector<ConditionScore>& scores) {
  bool all_nonpositive = true, all_at_least_one = true;
  for (const auto& s : scores) {
    all_nonpositive = all_nonpositive && s.mean <= 0.0;
    all_at_least_one = all_at_least_one && s.mean >= 1.0;
  }
  if (all_nonpositive) return {-3.0, 0.0};
  if (all_at_least_one) return {1.0, 5.0};
  return {-3.0, 3.0};
}

}  // namespace

std::string Report(const ReportOptions& options) {
  if (options.scores.empty()) throw InputError("report needs at least one score table");
  if (!options.bounds.empty() && options.bounds.size() != options.scores.size())
    throw InputError("report needs one bounds pair per score table");

  std::vector<std::vector<ConditionScore>> tables;
  for (const auto& p : options.scores) tables.push_back(LoadScores(p));
  EnsureDir(options.out_dir);

  json doc;
  doc["config"] = options.config;
  json inputs = json::array();
  for (const auto& p : options.scores) inputs.push_back(p.string());
  if (options.screened) inputs.push_back(options.screened->string());
  doc["inputs"] = inputs;

  std::string text;
  json tables_json = json::array();
  std::vector<std::vector<std::string>> sos_rows;
  for (std::size_t t = 0; t < tables.size(); ++t) {
    const auto& scores = tables[t];
    auto bounds = options.bounds.empty() ? InferBounds(scores) : options.bounds[t];
    std::vector<std::pair<double, double>> mean_sd;
    double ci_sum = 0.0;
    for (const auto& s : scores) {
      mean_sd.emplace_back(s.mean, s.sd);
      ci_sum += s.ci95;
      sos_rows.push_back({options.scores[t].filename().string(), s.condition_id,
                          csv::Num(NormalizeMeanScore(s.mean, bounds.first, bounds.second)),
                          csv::Num(s.sd)});
    }
    json tj = {{"file", options.scores[t].filename().string()},
               {"conditions", scores.size()},
               {"bounds", {bounds.first, bounds.second}},
               {"mean_ci95", ci_sum / static_cast<double>(scores.size())}};
    try {
      auto fit = FitSos(mean_sd, bounds.first, bounds.second);
      tj["sos_a"] = fit.a;
      tj["sos_rmse"] = fit.rmse;
    } catch (const NumericError&) {
      tj["sos_a"] = nullptr;
    }
    text += fmt::format("{}: {} conditions, mean CI95 {:.3f}, SOS a {}\n",
                        options.scores[t].filename().string(), scores.size(),
                        tj["mean_ci95"].get<double>(),
                        tj["sos_a"].is_null() ? "n/a" : fmt::format("{:.4f}", tj["sos_a"].get<double>()));
    tables_json.push_back(std::move(tj));
  }
  doc["tables"] = tables_json;
  csv::WriteFile(options.out_dir / "sos.csv", {"table", "condition_id", "normalized_mean", "sos"},
                 sos_rows);

  std::vector<std::vector<std::string>> scatter_rows;
  if (tables.size() >= 2) {
    RequireSameConditions(tables[0], options.scores[0], tables[1], options.scores[1]);
    for (std::size_t i = 0; i < tables[0].size(); ++i)
      scatter_rows.push_back({tables[0][i].condition_id, csv::Num(tables[0][i].mean),
                              csv::Num(tables[1][i].mean)});
    bool comparable = true;
    for (std::size_t t = 1; t < tables.size(); ++t)
      comparable = comparable && tables[t].size() == tables[0].size() &&
                   std::equal(tables[t].begin(), tables[t].end(), tables[0].begin(),
                              [](const auto& x, const auto& y) { return x.condition_id == y.condition_id; });
    if (comparable) {
      auto cmp = sim::CompareRuns(tables);
      doc["pearson"] = MatrixJson(cmp.pearson);
      doc["spearman"] = MatrixJson(cmp.spearman);
      doc["rmse"] = MatrixJson(cmp.rmse);
      doc["icc_a1"] = cmp.icc;
      text += fmt::format("ICC(A,1) {:.4f}, PCC(1,2) {:.4f}, SRCC(1,2) {:.4f}\n", cmp.icc,
                          cmp.pearson[0][1], cmp.spearman[0][1]);
    }
  }
  csv::WriteFile(options.out_dir / "scatter.csv", {"condition_id", "x", "y"}, scatter_rows);

  if (options.screened) {
    auto outcomes = ParseScreened(csv::ReadFile(*options.screened));
    if (outcomes.empty()) throw InputError("screened table is empty");
    std::size_t accepted = 0;
    for (const auto& o : outcomes) accepted += o.accepted ? 1 : 0;
    double rate = static_cast<double>(accepted) / static_cast<double>(outcomes.size());
    doc["acceptance_rate"] = rate;
    text += fmt::format("accepted {} of {} submissions ({:.2f}%)\n", accepted, outcomes.size(),
                        100.0 * rate);
  }

  std::vector<fs::path> outputs = {options.out_dir / "sos.csv", options.out_dir / "scatter.csv",
                                   options.out_dir / "report.txt", options.out_dir / "report.json"};
  json out_json = json::array();
  for (const auto& p : outputs) out_json.push_back(p.string());
  doc["outputs"] = out_json;
  csv::WriteText(options.out_dir / "report.txt", text);
  csv::WriteText(options.out_dir / "report.json", Dump(doc));
  for (const auto& p : outputs)
    if (!fs::exists(p)) throw IoError(fmt::format("report output '{}' was not written", p.string()));
  for (const auto& p : options.scores)
    if (!fs::exists(p)) throw IoError(fmt::format("report input '{}' vanished", p.string()));
  return Dump(doc);
}

}  // namespace ccr::pipeline
