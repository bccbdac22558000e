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

// ccrkit: command-line front end over the C API.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "ccr/ccr.h"

namespace {

constexpr int kExitError = 1;
constexpr int kExitUsage = 2;

struct Failure {
  ccr_status status;
};

// Throws Failure after logging when `status` is not CCR_OK.
void Check(ccr_status status, const std::string& what) {
  if (status == CCR_OK) return;
  spdlog::error("{}: {}: {}", what, ccr_status_string(status), ccr_last_error());
  throw Failure{status};
}

void ConfigureLogging() {
  auto logger = spdlog::stderr_color_mt("ccrkit");
  logger->set_pattern("%^%l%$: %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("CCR_LOG")) {
    auto level = spdlog::level::from_str(env);
    if (level == spdlog::level::off && std::string(env) != "off")
      spdlog::warn("unrecognized CCR_LOG level '{}'", env);
    else
      spdlog::set_level(level);
  }
}

class Study {
 public:
  explicit Study(const std::string& path) {
    Check(ccr_study_load(path.c_str(), &handle_), "loading " + path);
  }
  ~Study() { ccr_study_free(handle_); }
  Study(const Study&) = delete;
  Study& operator=(const Study&) = delete;

  const ccr_study* get() const { return handle_; }

  void LogViolations() const {
    for (size_t i = 0; i < ccr_study_violation_count(handle_); ++i)
      spdlog::error("{}", ccr_study_violation(handle_, i));
  }

 private:
  ccr_study* handle_ = nullptr;
};

// Prints a JSON string returned by the library and frees it.
void PrintJson(char* json) {
  if (json == nullptr) return;
  std::cout << json << '\n';
  ccr_string_free(json);
}

const char* OrNull(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

std::vector<const char*> CStrings(const std::vector<std::string>& v) {
  std::vector<const char*> out;
  out.reserve(v.size());
  for (const auto& s : v) out.push_back(s.c_str());
  return out;
}

struct Globals {
  uint64_t seed = 0;
  std::string out;
};

}  // namespace

int main(int argc, char** argv) {
  ConfigureLogging();

  CLI::App app{"ccrkit: crowdsourced CCR/ACR listening tests"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML/INI file with option values");
  Globals globals;
  app.add_option("--seed", globals.seed, "Seed for randomized stages");
  app.add_option("--out", globals.out, "Output file or directory");
  app.set_version_flag("--version", std::string(ccr_version()));

  // build
  auto* build = app.add_subcommand("build", "Assemble rating sections and the answer key");
  std::string study_path;
  build->add_option("--study", study_path, "Study definition JSON")->required()->check(CLI::ExistingFile);

  // screen
  auto* screen = app.add_subcommand("screen", "Apply qualification and gold checks to submissions");
  std::string keys_path, subs_path, manifest_key, votes_out, summary_out;
  screen->add_option("--study", study_path)->required()->check(CLI::ExistingFile);
  screen->add_option("--keys", keys_path, "Qualification answer keys CSV")->required()->check(CLI::ExistingFile);
  screen->add_option("--subs", subs_path, "Submissions JSON-lines")->required()->check(CLI::ExistingFile);
  screen->add_option("--manifest-key", manifest_key, "answer_key.csv from build")->check(CLI::ExistingFile);
  screen->add_option("--votes-out", votes_out, "Write the votes table here");
  screen->add_option("--summary-out", summary_out, "Write the screening summary JSON here");

  // score
  auto* score = app.add_subcommand("score", "Order-correct votes and aggregate per condition");
  std::string screened_path, votes_path, per_trial_out, orient = "processed", scale = "ccr";
  score->add_option("--screened", screened_path)->check(CLI::ExistingFile);
  score->add_option("--votes", votes_path)->required()->check(CLI::ExistingFile);
  score->add_option("--per-trial-out", per_trial_out);
  score->add_option("--orient", orient)->check(CLI::IsMember({"processed", "degradation"}));
  score->add_option("--scale", scale)->check(CLI::IsMember({"ccr", "acr"}));

  // stats
  auto* stats = app.add_subcommand("stats", "Agreement and significance statistics");
  stats->require_subcommand(1);
  stats->fallthrough();
  std::string a_path, b_path, dims_path, dims_column = "discontinuity";
  std::vector<std::string> runs;
  auto* compare = stats->add_subcommand("compare", "PCC, SRCC, RMSE and linear map between two tables");
  compare->add_option("--a", a_path)->required()->check(CLI::ExistingFile);
  compare->add_option("--b", b_path)->required()->check(CLI::ExistingFile);
  auto* icc = stats->add_subcommand("icc", "ICC(A,1) across runs");
  icc->add_option("--runs", runs)->required()->check(CLI::ExistingFile);
  auto* anova = stats->add_subcommand("anova", "Two-way ANOVA with Bonferroni pairwise tests");
  std::string factor_a, factor_b;
  std::vector<std::string> filters;
  double alpha = 0.05;
  anova->add_option("--study", study_path)->required()->check(CLI::ExistingFile);
  anova->add_option("--votes", votes_path)->required()->check(CLI::ExistingFile);
  anova->add_option("--screened", screened_path)->check(CLI::ExistingFile);
  anova->add_option("--factor-a", factor_a)->required();
  anova->add_option("--factor-b", factor_b)->required();
  anova->add_option("--filter", filters, "factor=level restriction, repeatable");
  anova->add_option("--alpha", alpha)->check(CLI::Range(1e-9, 0.999999));
  auto* rankdelta = stats->add_subcommand("rankdelta", "Per-condition rank differences between two tables");
  rankdelta->add_option("--a", a_path)->required()->check(CLI::ExistingFile);
  rankdelta->add_option("--b", b_path)->required()->check(CLI::ExistingFile);
  rankdelta->add_option("--dims", dims_path, "Per-condition perceptual dimensions CSV")->check(CLI::ExistingFile);
  rankdelta->add_option("--dims-column", dims_column);
  auto* agreement = stats->add_subcommand("agreement", "Agreement of significance conclusions");
  std::vector<std::string> pairwise;
  agreement->add_option("--pairwise", pairwise)->required()->check(CLI::ExistingFile);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Synthetic replication runs");
  std::string true_path;
  int sim_runs = 3, raters = 60, votes_per_condition = 60;
  double sigma_v = 0.7, sigma_b = 0.1, offset = 0.0;
  simulate->add_option("--true", true_path, "condition_id,true_score CSV")->required()->check(CLI::ExistingFile);
  simulate->add_option("--runs", sim_runs)->check(CLI::Range(1, 1000));
  simulate->add_option("--raters", raters)->check(CLI::Range(1, 1000000));
  simulate->add_option("--votes", votes_per_condition, "Votes per condition per run")->check(CLI::Range(1, 1000000));
  simulate->add_option("--sigma-v", sigma_v)->check(CLI::NonNegativeNumber);
  simulate->add_option("--sigma-b", sigma_b)->check(CLI::NonNegativeNumber);
  simulate->add_option("--last-run-offset", offset);

  // report
  auto* report = app.add_subcommand("report", "Summary report and plot-ready CSVs");
  std::vector<std::string> score_paths, bounds;
  report->add_option("--scores", score_paths)->required()->check(CLI::ExistingFile);
  report->add_option("--bounds", bounds, "lo,hi per score table");
  report->add_option("--screened", screened_path)->check(CLI::ExistingFile);

  // check
  auto* check = app.add_subcommand("check", "Validate a study and, optionally, one submission payload");
  std::string payload_path;
  check->add_option("--study", study_path)->required()->check(CLI::ExistingFile);
  check->add_option("--payload", payload_path, "Submission JSON")->check(CLI::ExistingFile);
  check->add_option("--manifest-key", manifest_key)->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, std::cerr, std::cerr);
    return code == 0 ? 0 : kExitUsage;
  }

  auto require_out = [&](CLI::App* sub) {
    if (globals.out.empty()) {
      spdlog::error("{}: --out is required", sub->get_name());
      throw Failure{CCR_ERR_USAGE};
    }
  };

  try {
    if (build->parsed()) {
      require_out(build);
      Study study(study_path);
      study.LogViolations();
      size_t sections = 0, items = 0;
      Check(ccr_build(study.get(), globals.seed, globals.out.c_str(), &sections, &items), "build");
      spdlog::info("built {} sections, {} worker rows", sections, items);
    } else if (screen->parsed()) {
      require_out(screen);
      Study study(study_path);
      ccr_screen_options o{keys_path.c_str(), subs_path.c_str(), OrNull(manifest_key), globals.out.c_str(),
                           OrNull(votes_out), OrNull(summary_out)};
      size_t total = 0, accepted = 0;
      Check(ccr_screen(study.get(), &o, &total, &accepted), "screen");
      spdlog::info("accepted {} of {} submissions", accepted, total);
    } else if (score->parsed()) {
      require_out(score);
      ccr_score_options o{OrNull(screened_path),
                          votes_path.c_str(),
                          globals.out.c_str(),
                          OrNull(per_trial_out),
                          scale == "acr" ? CCR_SCALE_ACR : CCR_SCALE_CCR,
                          orient == "degradation" ? CCR_ORIENT_DEGRADATION
                                                  : CCR_ORIENT_PROCESSED_VS_REFERENCE};
      size_t conditions = 0, outside = 0;
      Check(ccr_score(&o, &conditions, &outside), "score");
      spdlog::info("scored {} conditions", conditions);
      if (outside > 0)
        spdlog::warn("{} condition(s) score above the upper bound of the chosen orientation", outside);
    } else if (stats->parsed()) {
      char* json = nullptr;
      const char* out = OrNull(globals.out);
      if (compare->parsed()) {
        Check(ccr_stats_compare(a_path.c_str(), b_path.c_str(), out, &json), "stats compare");
      } else if (icc->parsed()) {
        auto paths = CStrings(runs);
        Check(ccr_stats_icc(paths.data(), paths.size(), out, &json), "stats icc");
      } else if (anova->parsed()) {
        Study study(study_path);
        auto f = CStrings(filters);
        ccr_anova_options o{votes_path.c_str(), OrNull(screened_path), factor_a.c_str(),
                            factor_b.c_str(), f.data(), f.size(), alpha};
        Check(ccr_stats_anova(study.get(), &o, out, &json), "stats anova");
      } else if (rankdelta->parsed()) {
        Check(ccr_stats_rankdelta(a_path.c_str(), b_path.c_str(), OrNull(dims_path),
                                  dims_column.c_str(), out, &json),
              "stats rankdelta");
      } else if (agreement->parsed()) {
        auto paths = CStrings(pairwise);
        Check(ccr_stats_agreement(paths.data(), paths.size(), out, &json), "stats agreement");
      }
      PrintJson(json);
    } else if (simulate->parsed()) {
      require_out(simulate);
      ccr_simulate_options o{true_path.c_str(), sim_runs, raters, votes_per_condition, sigma_v,
                             sigma_b, offset, globals.seed, globals.out.c_str()};
      char* json = nullptr;
      Check(ccr_simulate(&o, &json), "simulate");
      PrintJson(json);
    } else if (report->parsed()) {
      require_out(report);
      std::vector<double> b;
      for (const auto& pair : bounds) {
        double lo = 0, hi = 0;
        char tail = 0;
        if (std::sscanf(pair.c_str(), "%lf,%lf%c", &lo, &hi, &tail) != 2 || !(lo < hi)) {
          spdlog::error("report: --bounds expects lo,hi with lo < hi, got '{}'", pair);
          throw Failure{CCR_ERR_USAGE};
        }
        b.push_back(lo);
        b.push_back(hi);
      }
      if (!b.empty() && b.size() != 2 * score_paths.size()) {
        spdlog::error("report: {} --bounds given for {} score tables", b.size() / 2, score_paths.size());
        throw Failure{CCR_ERR_USAGE};
      }
      std::map<std::string, std::string> config{{"seed", std::to_string(globals.seed)},
                                                {"out", globals.out}};
      for (size_t i = 0; i < score_paths.size(); ++i)
        config[fmt::format("scores[{}]", i)] = score_paths[i];
      for (size_t i = 0; i < bounds.size(); ++i) config[fmt::format("bounds[{}]", i)] = bounds[i];
      if (!screened_path.empty()) config["screened"] = screened_path;
      std::vector<std::string> keys, values;
      for (const auto& [k, v] : config) {
        keys.push_back(k);
        values.push_back(v);
      }
      auto paths = CStrings(score_paths);
      auto ck = CStrings(keys);
      auto cv = CStrings(values);
      ccr_report_options o{paths.data(), paths.size(), b.empty() ? nullptr : b.data(),
                           OrNull(screened_path), globals.out.c_str(), ck.data(), cv.data(), ck.size()};
      char* json = nullptr;
      Check(ccr_report(&o, &json), "report");
      PrintJson(json);
    } else if (check->parsed()) {
      Study study(study_path);
      size_t violations = ccr_study_violation_count(study.get());
      study.LogViolations();
      size_t problems = 0;
      if (!payload_path.empty()) {
        std::ifstream in(payload_path, std::ios::binary);
        std::string payload((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        Check(ccr_validate_submission(study.get(), payload.c_str(), OrNull(manifest_key), &problems),
              "check payload");
        if (problems > 0) spdlog::error("payload problems:\n{}", ccr_last_error());
      }
      if (violations + problems > 0) return kExitError;
      std::cout << "ok\n";
    }
  } catch (const Failure& f) {
    return f.status == CCR_ERR_USAGE ? kExitUsage : kExitError;
  }
  return 0;
}
