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

#include "ccr/ccr.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "ccr/csv.hpp"
#include "ccr/distributions.hpp"
#include "ccr/error.hpp"
#include "ccr/pipeline.hpp"
#include "ccr/scoring.hpp"
#include "ccr/stats.hpp"
#include "ccr/builder.hpp"
#include "ccr/study_io.hpp"

struct ccr_study {
  ccr::Study study;
  std::vector<std::string> violations;
};

struct ccr_score_table {
  std::vector<ccr::ConditionScore> scores;
};

namespace {

thread_local std::string g_last_error;

ccr_status Fail(ccr_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
ccr_status Guard(F&& body) {
  g_last_error.clear();
  try {
    body();
    return CCR_OK;
  } catch (const ccr::InputError& e) {
    return Fail(CCR_ERR_INPUT, e.what());
  } catch (const ccr::ConfigError& e) {
    return Fail(CCR_ERR_CONFIG, e.what());
  } catch (const ccr::SerializationError& e) {
    return Fail(CCR_ERR_SERIALIZE, e.what());
  } catch (const ccr::NumericError& e) {
    return Fail(CCR_ERR_NUMERIC, e.what());
  } catch (const ccr::UsageError& e) {
    return Fail(CCR_ERR_USAGE, e.what());
  } catch (const ccr::IoError& e) {
    return Fail(CCR_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return Fail(CCR_ERR_INTERNAL, e.what());
  } catch (...) {
    return Fail(CCR_ERR_INTERNAL, "unknown error");
  }
}

char* Duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void Emit(const std::string& json, char** out) {
  if (out != nullptr) *out = Duplicate(json);
}

std::optional<std::filesystem::path> OptionalPath(const char* p) {
  if (p == nullptr || *p == '\0') return std::nullopt;
  return std::filesystem::path(p);
}

std::filesystem::path PathOrEmpty(const char* p) {
  return p == nullptr ? std::filesystem::path() : std::filesystem::path(p);
}

#define CCR_REQUIRE(cond, what) \
  if (!(cond)) return Fail(CCR_ERR_ARGUMENT, what)

ccr_study* MakeStudy(ccr::Study study) {
  auto* handle = new ccr_study{std::move(study), {}};
  for (const auto& v : ccr::ValidateStudy(handle->study))
    handle->violations.push_back(v.field + ": " + v.rule);
  return handle;
}

}  // namespace

extern "C" {

const char* ccr_version(void) { return "1.0.0"; }

const char* ccr_status_string(ccr_status status) {
  switch (status) {
    case CCR_OK: return "ok";
    case CCR_ERR_ARGUMENT: return "invalid argument";
    case CCR_ERR_INPUT: return "input error";
    case CCR_ERR_CONFIG: return "configuration error";
    case CCR_ERR_SERIALIZE: return "serialization error";
    case CCR_ERR_NUMERIC: return "numeric error";
    case CCR_ERR_USAGE: return "usage error";
    case CCR_ERR_IO: return "i/o error";
    case CCR_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* ccr_last_error(void) { return g_last_error.c_str(); }

void ccr_string_free(char* s) { std::free(s); }

ccr_status ccr_study_load(const char* path, ccr_study** out) {
  CCR_REQUIRE(path && out, "path and out are required");
  return Guard([&] { *out = MakeStudy(ccr::LoadStudy(path)); });
}

ccr_status ccr_study_parse(const char* json, ccr_study** out) {
  CCR_REQUIRE(json && out, "json and out are required");
  return Guard([&] { *out = MakeStudy(ccr::ParseStudy(json)); });
}

void ccr_study_free(ccr_study* study) { delete study; }

const char* ccr_study_id(const ccr_study* study) {
  return study ? study->study.study_id.c_str() : "";
}

size_t ccr_study_condition_count(const ccr_study* study) {
  return study ? study->study.conditions.size() : 0;
}

size_t ccr_study_violation_count(const ccr_study* study) {
  return study ? study->violations.size() : 0;
}

const char* ccr_study_violation(const ccr_study* study, size_t index) {
  if (!study || index >= study->violations.size()) return nullptr;
  return study->violations[index].c_str();
}

ccr_status ccr_validate_submission(const ccr_study* study, const char* payload_json,
                                   const char* manifest_key_path, size_t* problem_count) {
  CCR_REQUIRE(study && payload_json && problem_count, "study, payload and problem_count are required");
  std::vector<std::string> problems;
  auto status = Guard([&] {
    std::optional<std::vector<ccr::AnswerKeyRow>> key;
    if (auto p = OptionalPath(manifest_key_path)) key = ccr::ParseAnswerKey(ccr::csv::ReadFile(*p));
    problems = ccr::ValidateSubmissionPayload(payload_json, study->study, key ? &*key : nullptr);
  });
  if (status != CCR_OK) return status;
  *problem_count = problems.size();
  std::string joined;
  for (const auto& p : problems) joined += p + "\n";
  g_last_error = joined;
  return CCR_OK;
}

ccr_status ccr_score_table_load(const char* path, ccr_score_table** out) {
  CCR_REQUIRE(path && out, "path and out are required");
  return Guard([&] {
    *out = new ccr_score_table{ccr::ParseConditionScores(ccr::csv::ReadFile(path))};
  });
}

void ccr_score_table_free(ccr_score_table* table) { delete table; }

size_t ccr_score_table_size(const ccr_score_table* table) {
  return table ? table->scores.size() : 0;
}

ccr_status ccr_score_table_get(const ccr_score_table* table, size_t index,
                               ccr_condition_score* out) {
  CCR_REQUIRE(table && out, "table and out are required");
  CCR_REQUIRE(index < table->scores.size(), "index out of range");
  const auto& s = table->scores[index];
  *out = {s.condition_id.c_str(), s.mean, s.n, s.sd, s.ci95};
  return CCR_OK;
}

ccr_status ccr_build(const ccr_study* study, uint64_t seed, const char* out_dir, size_t* sections,
                     size_t* items) {
  CCR_REQUIRE(study && out_dir, "study and out_dir are required");
  return Guard([&] {
    auto summary = ccr::pipeline::Build(study->study, seed, out_dir);
    if (sections) *sections = summary.sections;
    if (items) *items = summary.items;
  });
}

ccr_status ccr_screen(const ccr_study* study, const ccr_screen_options* options, size_t* total,
                      size_t* accepted) {
  CCR_REQUIRE(study && options && options->keys_path && options->submissions_path &&
                  options->out_path,
              "study, keys, submissions and out paths are required");
  return Guard([&] {
    ccr::pipeline::ScreenOptions o{options->keys_path,
                                   options->submissions_path,
                                   OptionalPath(options->manifest_key_path),
                                   options->out_path,
                                   OptionalPath(options->votes_out_path),
                                   OptionalPath(options->summary_out_path)};
    auto summary = ccr::pipeline::Screen(study->study, o);
    if (total) *total = summary.total;
    if (accepted) *accepted = summary.accepted;
  });
}

ccr_status ccr_score(const ccr_score_options* options, size_t* conditions,
                     size_t* outside_orientation) {
  CCR_REQUIRE(options && options->votes_path && options->out_path, "votes and out paths are required");
  return Guard([&] {
    ccr::pipeline::ScoreOptions o;
    o.screened = OptionalPath(options->screened_path);
    o.votes = options->votes_path;
    o.out = options->out_path;
    o.per_trial_out = OptionalPath(options->per_trial_out_path);
    o.scale = options->scale == CCR_SCALE_ACR ? ccr::ScaleKind::kAcr : ccr::ScaleKind::kCcr;
    o.orientation = options->orientation == CCR_ORIENT_DEGRADATION
                        ? ccr::Orientation::kDegradation
                        : ccr::Orientation::kProcessedVsReference;
    auto summary = ccr::pipeline::Score(o);
    if (conditions) *conditions = summary.conditions;
    if (outside_orientation) *outside_orientation = summary.outside_orientation;
  });
}

ccr_status ccr_stats_compare(const char* a_path, const char* b_path, const char* out_dir,
                             char** json_out) {
  CCR_REQUIRE(a_path && b_path, "both score tables are required");
  return Guard([&] { Emit(ccr::pipeline::StatsCompare(a_path, b_path, PathOrEmpty(out_dir)), json_out); });
}

ccr_status ccr_stats_icc(const char* const* run_paths, size_t run_count, const char* out_dir,
                         char** json_out) {
  CCR_REQUIRE(run_paths || run_count == 0, "run_paths is required");
  return Guard([&] {
    std::vector<std::filesystem::path> runs(run_paths, run_paths + run_count);
    Emit(ccr::pipeline::StatsIcc(runs, PathOrEmpty(out_dir)), json_out);
  });
}

ccr_status ccr_stats_anova(const ccr_study* study, const ccr_anova_options* options,
                           const char* out_dir, char** json_out) {
  CCR_REQUIRE(study && options && options->votes_path && options->factor_a && options->factor_b,
              "study, votes and both factors are required");
  CCR_REQUIRE(options->filters || options->filter_count == 0, "filters is required");
  CCR_REQUIRE(options->alpha > 0.0 && options->alpha < 1.0, "alpha must lie in (0, 1)");
  return Guard([&] {
    ccr::pipeline::AnovaOptions o;
    o.votes = options->votes_path;
    o.screened = OptionalPath(options->screened_path);
    o.factor_a = options->factor_a;
    o.factor_b = options->factor_b;
    o.alpha = options->alpha;
    for (size_t i = 0; i < options->filter_count; ++i) {
      std::string f = options->filters[i];
      auto eq = f.find('=');
      if (eq == std::string::npos || eq == 0)
        throw ccr::UsageError(fmt::format("filter '{}' is not factor=level", f));
      o.filters[f.substr(0, eq)] = f.substr(eq + 1);
    }
    Emit(ccr::pipeline::StatsAnova(study->study, o, PathOrEmpty(out_dir)), json_out);
  });
}

ccr_status ccr_stats_rankdelta(const char* a_path, const char* b_path, const char* dims_path,
                               const char* dims_column, const char* out_dir, char** json_out) {
  CCR_REQUIRE(a_path && b_path, "both score tables are required");
  return Guard([&] {
    Emit(ccr::pipeline::StatsRankDelta(a_path, b_path, OptionalPath(dims_path),
                                       dims_column ? dims_column : "discontinuity",
                                       PathOrEmpty(out_dir)),
         json_out);
  });
}

ccr_status ccr_stats_agreement(const char* const* pairwise_paths, size_t count, const char* out_dir,
                               char** json_out) {
  CCR_REQUIRE(pairwise_paths && count > 0, "at least one pairwise table is required");
  return Guard([&] {
    std::vector<std::filesystem::path> paths(pairwise_paths, pairwise_paths + count);
    Emit(ccr::pipeline::StatsAgreement(paths, PathOrEmpty(out_dir)), json_out);
  });
}

ccr_status ccr_simulate(const ccr_simulate_options* options, char** json_out) {
  CCR_REQUIRE(options && options->true_scores_path && options->out_dir,
              "true scores path and out_dir are required");
  return Guard([&] {
    ccr::pipeline::SimulateOptions o;
    o.true_scores = options->true_scores_path;
    o.runs = options->runs;
    o.raters = options->raters;
    o.votes_per_condition = options->votes_per_condition;
    o.sigma_v = options->sigma_v;
    o.sigma_b = options->sigma_b;
    o.last_run_offset = options->last_run_offset;
    o.seed = options->seed;
    o.out_dir = options->out_dir;
    Emit(ccr::pipeline::Simulate(o), json_out);
  });
}

ccr_status ccr_report(const ccr_report_options* options, char** json_out) {
  CCR_REQUIRE(options && options->out_dir, "out_dir is required");
  CCR_REQUIRE(options->score_paths || options->score_count == 0, "score_paths is required");
  CCR_REQUIRE(options->config_count == 0 || (options->config_keys && options->config_values),
              "config keys and values are required");
  return Guard([&] {
    ccr::pipeline::ReportOptions o;
    o.scores.assign(options->score_paths, options->score_paths + options->score_count);
    if (options->bounds)
      for (size_t i = 0; i < options->score_count; ++i)
        o.bounds.emplace_back(options->bounds[2 * i], options->bounds[2 * i + 1]);
    o.screened = OptionalPath(options->screened_path);
    o.out_dir = options->out_dir;
    for (size_t i = 0; i < options->config_count; ++i)
      o.config[options->config_keys[i]] = options->config_values[i];
    Emit(ccr::pipeline::Report(o), json_out);
  });
}

ccr_status ccr_correct_vote(int raw, ccr_order order, int* out) {
  CCR_REQUIRE(out, "out is required");
  return Guard([&] {
    std::optional<ccr::PresentationOrder> o;
    if (order == CCR_ORDER_REFERENCE_FIRST) o = ccr::PresentationOrder::kReferenceFirst;
    if (order == CCR_ORDER_PROCESSED_FIRST) o = ccr::PresentationOrder::kProcessedFirst;
    *out = ccr::CorrectVote(raw, o);
  });
}

ccr_status ccr_aggregate(const int* votes, size_t n, double* mean, double* sd, double* ci95) {
  CCR_REQUIRE(votes || n == 0, "votes is required");
  return Guard([&] {
    auto s = ccr::AggregateCondition(std::span<const int>(votes, n), "");
    if (mean) *mean = s.mean;
    if (sd) *sd = s.sd;
    if (ci95) *ci95 = s.ci95;
  });
}

ccr_status ccr_pearson(const double* x, const double* y, size_t n, double* r, double* p_value) {
  CCR_REQUIRE(x && y && r, "x, y and r are required");
  return Guard([&] {
    auto res = ccr::stats::Pearson({x, n}, {y, n});
    *r = res.r;
    if (p_value) *p_value = res.p_value;
  });
}

ccr_status ccr_spearman(const double* x, const double* y, size_t n, double* r, double* p_value) {
  CCR_REQUIRE(x && y && r, "x, y and r are required");
  return Guard([&] {
    auto res = ccr::stats::Spearman({x, n}, {y, n});
    *r = res.r;
    if (p_value) *p_value = res.p_value;
  });
}

ccr_status ccr_icc_a1(const double* matrix, size_t n, size_t k, double* icc) {
  CCR_REQUIRE(matrix && icc, "matrix and icc are required");
  return Guard([&] {
    std::vector<std::vector<double>> m(n, std::vector<double>(k));
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < k; ++j) m[i][j] = matrix[i * k + j];
    *icc = ccr::stats::IccA1(m).icc;
  });
}

ccr_status ccr_fit_linear_map(const double* source, const double* target, size_t n, double* slope,
                              double* intercept, double* rmse_before, double* rmse_after) {
  CCR_REQUIRE(source && target, "source and target are required");
  return Guard([&] {
    auto map = ccr::stats::FitLinearMap({source, n}, {target, n});
    if (slope) *slope = map.slope;
    if (intercept) *intercept = map.intercept;
    if (rmse_before) *rmse_before = map.rmse_before;
    if (rmse_after) *rmse_after = map.rmse_after;
  });
}

ccr_status ccr_fit_sos(const double* means, const double* sds, size_t n, double lo, double hi,
                       double* a, double* rmse) {
  CCR_REQUIRE(means && sds && a, "means, sds and a are required");
  return Guard([&] {
    std::vector<std::pair<double, double>> pairs;
    for (size_t i = 0; i < n; ++i) pairs.emplace_back(means[i], sds[i]);
    auto fit = ccr::FitSos(pairs, lo, hi);
    *a = fit.a;
    if (rmse) *rmse = fit.rmse;
  });
}

ccr_status ccr_t_quantile(double p, double df, double* out) {
  CCR_REQUIRE(out, "out is required");
  return Guard([&] { *out = ccr::dist::StudentTQuantile(p, df); });
}

ccr_status ccr_f_survival(double f, double d1, double d2, double* out) {
  CCR_REQUIRE(out, "out is required");
  return Guard([&] { *out = ccr::dist::FSurvival(f, d1, d2); });
}

}  // extern "C"
