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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ccr/builder.hpp"
#include "ccr/model.hpp"

namespace ccr {

/// Study definition JSON; field names are documented in
/// schema/study.schema.json. Throws InputError on schema violations.
Study ParseStudy(std::string_view json_text, std::string_view source = "<memory>");
Study LoadStudy(const std::filesystem::path& path);
std::string StudyToJson(const Study& study);

/// One submission object. Ratings are given either directly ("votes" and
/// "gold_answers" keyed by trial_id) or as worker-visible "items" keyed by
/// (section_id, item_index), which requires `answer_key` to resolve trial,
/// hidden order and gold status.
Submission ParseSubmission(std::string_view json_text,
                           const std::vector<AnswerKeyRow>* answer_key = nullptr);
std::vector<Submission> ReadSubmissionsJsonl(const std::filesystem::path& path,
                                             const std::vector<AnswerKeyRow>* answer_key = nullptr);
std::string SubmissionToJson(const Submission& submission);

/// Structural validation of an ingested payload against a study: parse
/// errors, timestamps, ratings on scale, known trials, disjoint gold and vote
/// trial sets, orders present for CCR. Empty result means valid.
std::vector<std::string> ValidateSubmissionPayload(std::string_view json_text, const Study& study,
                                                   const std::vector<AnswerKeyRow>* answer_key = nullptr);

/// Structural problems of an already-parsed submission.
std::vector<std::string> StructuralProblems(const Submission& submission, const Study& study);

}  // namespace ccr
