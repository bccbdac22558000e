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

/* C interface to the ccrkit library.
 *
 * Conventions: every fallible call returns a ccr_status; on failure the
 * message is available from ccr_last_error() on the calling thread until the
 * next call. Handles are opaque and released with their *_free function.
 * Strings returned through char** are heap-allocated and released with
 * ccr_string_free(). Optional path arguments accept NULL.
 */
#ifndef CCR_CCR_H_
#define CCR_CCR_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CCR_API __declspec(dllexport)
#else
#define CCR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ccr_status {
  CCR_OK = 0,
  CCR_ERR_ARGUMENT = 1,  /* null or out-of-range argument */
  CCR_ERR_INPUT = 2,     /* malformed or inconsistent input data */
  CCR_ERR_CONFIG = 3,    /* study cannot produce a valid plan */
  CCR_ERR_SERIALIZE = 4,
  CCR_ERR_NUMERIC = 5,   /* statistic undefined for the data */
  CCR_ERR_USAGE = 6,
  CCR_ERR_IO = 7,
  CCR_ERR_INTERNAL = 99
} ccr_status;

typedef enum ccr_order {
  CCR_ORDER_NONE = 0, /* ACR vote */
  CCR_ORDER_REFERENCE_FIRST = 1,
  CCR_ORDER_PROCESSED_FIRST = 2
} ccr_order;

typedef enum ccr_scale { CCR_SCALE_CCR = 0, CCR_SCALE_ACR = 1 } ccr_scale;

typedef enum ccr_orientation {
  CCR_ORIENT_PROCESSED_VS_REFERENCE = 0,
  CCR_ORIENT_DEGRADATION = 1
} ccr_orientation;

CCR_API const char* ccr_version(void);
CCR_API const char* ccr_status_string(ccr_status status);
CCR_API const char* ccr_last_error(void);
CCR_API void ccr_string_free(char* s);

/* ---- study definition ---------------------------------------------------- */

typedef struct ccr_study ccr_study;

CCR_API ccr_status ccr_study_load(const char* path, ccr_study** out);
CCR_API ccr_status ccr_study_parse(const char* json, ccr_study** out);
CCR_API void ccr_study_free(ccr_study* study);
CCR_API const char* ccr_study_id(const ccr_study* study);
CCR_API size_t ccr_study_condition_count(const ccr_study* study);

/* Violations of the config and table invariants; "field: rule" strings
 * owned by the handle. */
CCR_API size_t ccr_study_violation_count(const ccr_study* study);
CCR_API const char* ccr_study_violation(const ccr_study* study, size_t index);

/* Structural check of one submission payload (one JSON object). Sets
 * *problem_count; when non-zero, ccr_last_error() lists the problems one
 * per line. manifest_key_path resolves "items" payloads. */
CCR_API ccr_status ccr_validate_submission(const ccr_study* study, const char* payload_json,
                                           const char* manifest_key_path, size_t* problem_count);

/* ---- condition score tables --------------------------------------------- */

typedef struct ccr_score_table ccr_score_table;

typedef struct ccr_condition_score {
  const char* condition_id; /* owned by the table */
  double mean;
  int n;
  double sd;
  double ci95;
} ccr_condition_score;

CCR_API ccr_status ccr_score_table_load(const char* path, ccr_score_table** out);
CCR_API void ccr_score_table_free(ccr_score_table* table);
CCR_API size_t ccr_score_table_size(const ccr_score_table* table);
CCR_API ccr_status ccr_score_table_get(const ccr_score_table* table, size_t index,
                                       ccr_condition_score* out);

/* ---- pipeline stages ------------------------------------------------------ */

CCR_API ccr_status ccr_build(const ccr_study* study, uint64_t seed, const char* out_dir,
                             size_t* sections, size_t* items);

typedef struct ccr_screen_options {
  const char* keys_path;
  const char* submissions_path;
  const char* manifest_key_path; /* optional */
  const char* out_path;
  const char* votes_out_path;    /* optional */
  const char* summary_out_path;  /* optional */
} ccr_screen_options;

CCR_API ccr_status ccr_screen(const ccr_study* study, const ccr_screen_options* options,
                              size_t* total, size_t* accepted);

typedef struct ccr_score_options {
  const char* screened_path;  /* optional */
  const char* votes_path;
  const char* out_path;
  const char* per_trial_out_path; /* optional */
  ccr_scale scale;
  ccr_orientation orientation;
} ccr_score_options;

CCR_API ccr_status ccr_score(const ccr_score_options* options, size_t* conditions,
                             size_t* outside_orientation);

CCR_API ccr_status ccr_stats_compare(const char* a_path, const char* b_path, const char* out_dir,
                                     char** json_out);
CCR_API ccr_status ccr_stats_icc(const char* const* run_paths, size_t run_count,
                                 const char* out_dir, char** json_out);

typedef struct ccr_anova_options {
  const char* votes_path;
  const char* screened_path; /* optional */
  const char* factor_a;
  const char* factor_b;
  const char* const* filters; /* "factor=level" strings */
  size_t filter_count;
  double alpha;
} ccr_anova_options;

CCR_API ccr_status ccr_stats_anova(const ccr_study* study, const ccr_anova_options* options,
                                   const char* out_dir, char** json_out);
CCR_API ccr_status ccr_stats_rankdelta(const char* a_path, const char* b_path,
                                       const char* dims_path, const char* dims_column,
                                       const char* out_dir, char** json_out);
CCR_API ccr_status ccr_stats_agreement(const char* const* pairwise_paths, size_t count,
                                       const char* out_dir, char** json_out);

typedef struct ccr_simulate_options {
  const char* true_scores_path;
  int runs;
  int raters;
  int votes_per_condition;
  double sigma_v;
  double sigma_b;
  double last_run_offset;
  uint64_t seed;
  const char* out_dir;
} ccr_simulate_options;

CCR_API ccr_status ccr_simulate(const ccr_simulate_options* options, char** json_out);

typedef struct ccr_report_options {
  const char* const* score_paths;
  size_t score_count;
  const double* bounds; /* optional, 2 * score_count values (lo, hi) */
  const char* screened_path; /* optional */
  const char* out_dir;
  const char* const* config_keys;
  const char* const* config_values;
  size_t config_count;
} ccr_report_options;

CCR_API ccr_status ccr_report(const ccr_report_options* options, char** json_out);

/* ---- numerics ------------------------------------------------------------- */

CCR_API ccr_status ccr_correct_vote(int raw, ccr_order order, int* out);
CCR_API ccr_status ccr_aggregate(const int* votes, size_t n, double* mean, double* sd,
                                 double* ci95);
CCR_API ccr_status ccr_pearson(const double* x, const double* y, size_t n, double* r,
                               double* p_value);
CCR_API ccr_status ccr_spearman(const double* x, const double* y, size_t n, double* r,
                                double* p_value);
/* matrix is row-major, n conditions by k runs. */
CCR_API ccr_status ccr_icc_a1(const double* matrix, size_t n, size_t k, double* icc);
CCR_API ccr_status ccr_fit_linear_map(const double* source, const double* target, size_t n,
                                      double* slope, double* intercept, double* rmse_before,
                                      double* rmse_after);
CCR_API ccr_status ccr_fit_sos(const double* means, const double* sds, size_t n, double lo,
                               double hi, double* a, double* rmse);
CCR_API ccr_status ccr_t_quantile(double p, double df, double* out);
CCR_API ccr_status ccr_f_survival(double f, double d1, double d2, double* out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CCR_CCR_H_ */
