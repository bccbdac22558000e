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

#include <cmath>
#include <string>

#include <gtest/gtest.h>

#include "ccr/ccr.h"
#include "ccr/csv.hpp"
#include "ccr/study_io.hpp"
#include "test_util.hpp"

namespace {

using ccr::testing::TempDir;

class CApi : public ::testing::Test {
 protected:
  void SetUp() override {
    auto s = ccr::testing::MakeStudy(2, 5, 2, 2);
    s.config.target_votes_per_trial = 2;
    ASSERT_EQ(ccr_study_parse(ccr::StudyToJson(s).c_str(), &study_), CCR_OK) << ccr_last_error();
  }
  void TearDown() override { ccr_study_free(study_); }

  ccr_study* study_ = nullptr;
  TempDir dir_;
};

TEST_F(CApi, StudyHandle) {
  EXPECT_STREQ(ccr_study_id(study_), "unit");
  EXPECT_EQ(ccr_study_condition_count(study_), 10u);
  EXPECT_EQ(ccr_study_violation_count(study_), 0u);
  EXPECT_EQ(ccr_study_violation(study_, 0), nullptr);
}

TEST_F(CApi, ErrorsCarryStatusAndMessage) {
  ccr_study* bad = nullptr;
  EXPECT_EQ(ccr_study_parse("{\"config\": {}}", &bad), CCR_ERR_INPUT);
  EXPECT_NE(std::string(ccr_last_error()).find("study_id"), std::string::npos);
  EXPECT_EQ(bad, nullptr);
  EXPECT_EQ(ccr_study_load((dir_ / "none.json").c_str(), &bad), CCR_ERR_IO);
  EXPECT_EQ(ccr_study_load(nullptr, &bad), CCR_ERR_ARGUMENT);
  EXPECT_STREQ(ccr_status_string(CCR_ERR_NUMERIC), "numeric error");

  int out = 0;
  EXPECT_EQ(ccr_correct_vote(2, CCR_ORDER_NONE, &out), CCR_ERR_USAGE);
  EXPECT_EQ(ccr_correct_vote(2, CCR_ORDER_PROCESSED_FIRST, &out), CCR_OK);
  EXPECT_EQ(out, -2);
  EXPECT_STREQ(ccr_last_error(), "");
}

TEST_F(CApi, ConfigViolationsSurfaceThroughHandle) {
  auto s = ccr::testing::MakeStudy(2, 5, 2, 2);
  s.config.section_size = 9;
  ccr_study* h = nullptr;
  ASSERT_EQ(ccr_study_parse(ccr::StudyToJson(s).c_str(), &h), CCR_OK);
  ASSERT_EQ(ccr_study_violation_count(h), 1u);
  EXPECT_NE(std::string(ccr_study_violation(h, 0)).find("section_size"), std::string::npos);
  size_t sections = 0;
  EXPECT_EQ(ccr_build(h, 1, (dir_ / "out").c_str(), &sections, nullptr), CCR_ERR_CONFIG);
  ccr_study_free(h);
}

TEST_F(CApi, BuildWritesManifest) {
  size_t sections = 0, items = 0;
  ASSERT_EQ(ccr_build(study_, 4, dir_.path().c_str(), &sections, &items), CCR_OK) << ccr_last_error();
  EXPECT_EQ(sections, 4u);
  EXPECT_EQ(items, 44u);
  EXPECT_TRUE(std::filesystem::exists(dir_ / "worker.csv"));

  size_t problems = 99;
  const char* payload = R"({"worker_id":"w","assignment_id":"a","session_timestamp":"2021-01-01T00:00:00Z",
    "items":[{"section_id":"S0001","item_index":1,"rating":0}]})";
  ASSERT_EQ(ccr_validate_submission(study_, payload, (dir_ / "answer_key.csv").c_str(), &problems), CCR_OK);
  EXPECT_EQ(problems, 0u);
  ASSERT_EQ(ccr_validate_submission(study_, "{}", nullptr, &problems), CCR_OK);
  EXPECT_GT(problems, 0u);
  EXPECT_NE(std::string(ccr_last_error()).find("worker_id"), std::string::npos);
}

TEST_F(CApi, ScoreTableAndStats) {
  ccr::csv::WriteText(dir_ / "a.csv", "condition_id,n,mean,sd,ci95\nA,3,-1,0.5,0.2\nB,3,-2,0.5,0.2\nC,3,-0.5,0.5,0.2\n");
  ccr::csv::WriteText(dir_ / "b.csv", "condition_id,n,mean,sd,ci95\nA,3,-1.1,0.5,0.2\nB,3,-1.9,0.5,0.2\nC,3,-0.4,0.5,0.2\n");
  ccr_score_table* t = nullptr;
  ASSERT_EQ(ccr_score_table_load((dir_ / "a.csv").c_str(), &t), CCR_OK);
  ASSERT_EQ(ccr_score_table_size(t), 3u);
  ccr_condition_score row;
  ASSERT_EQ(ccr_score_table_get(t, 1, &row), CCR_OK);
  EXPECT_STREQ(row.condition_id, "B");
  EXPECT_DOUBLE_EQ(row.mean, -2);
  EXPECT_EQ(ccr_score_table_get(t, 3, &row), CCR_ERR_ARGUMENT);
  ccr_score_table_free(t);

  char* json = nullptr;
  ASSERT_EQ(ccr_stats_compare((dir_ / "a.csv").c_str(), (dir_ / "b.csv").c_str(), nullptr, &json), CCR_OK);
  EXPECT_NE(std::string(json).find("pearson"), std::string::npos);
  ccr_string_free(json);

  std::string a = (dir_ / "a.csv").string(), b = (dir_ / "b.csv").string();
  const char* runs[] = {a.c_str(), b.c_str(), a.c_str()};
  ASSERT_EQ(ccr_stats_icc(runs, 3, dir_.path().c_str(), &json), CCR_OK) << ccr_last_error();
  ccr_string_free(json);
  EXPECT_TRUE(std::filesystem::exists(dir_ / "icc.csv"));
}

TEST(CApiNumerics, MatchLibrary) {
  int votes[] = {-3, -1};
  double mean, sd, ci;
  ASSERT_EQ(ccr_aggregate(votes, 2, &mean, &sd, &ci), CCR_OK);
  EXPECT_NEAR(ci, 12.706, 1e-3);
  EXPECT_EQ(ccr_aggregate(votes, 0, &mean, &sd, &ci), CCR_ERR_INPUT);

  double x[] = {1, 2, 2, 3}, y[] = {1, 2, 3, 4}, r, p;
  ASSERT_EQ(ccr_spearman(x, y, 4, &r, &p), CCR_OK);
  EXPECT_NEAR(r, 0.9487, 1e-4);
  ASSERT_EQ(ccr_pearson(x, y, 4, &r, nullptr), CCR_OK);

  double m[] = {1, 2, 2, 3, 3, 5, 4, 4}, icc;
  ASSERT_EQ(ccr_icc_a1(m, 4, 2, &icc), CCR_OK);
  EXPECT_NEAR(icc, 0.64, 1e-12);

  double slope, intercept, before, after;
  ASSERT_EQ(ccr_fit_linear_map(x, y, 4, &slope, &intercept, &before, &after), CCR_OK);
  EXPECT_LE(after, before);

  double means[] = {2, 3, 4}, sds[] = {std::sqrt(0.6), std::sqrt(0.8), std::sqrt(0.6)}, a, rmse;
  ASSERT_EQ(ccr_fit_sos(means, sds, 3, 1, 5, &a, &rmse), CCR_OK);
  EXPECT_NEAR(a, 0.2, 1e-12);

  double q, s;
  ASSERT_EQ(ccr_t_quantile(0.975, 1, &q), CCR_OK);
  EXPECT_NEAR(q, 12.706, 1e-3);
  ASSERT_EQ(ccr_f_survival(4.965, 1, 10, &s), CCR_OK);
  EXPECT_NEAR(s, 0.05, 1e-3);
  EXPECT_EQ(ccr_t_quantile(0.975, 1, nullptr), CCR_ERR_ARGUMENT);
}

}  // namespace
