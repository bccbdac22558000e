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
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace ccr::csv {

struct WriteOptions {
  char delimiter = ',';
  // RFC 4180 quoting of fields holding the delimiter, quotes or newlines.
  // With quoting off such fields raise SerializationError.
  bool quote = true;
};

std::string FormatRow(const std::vector<std::string>& fields,
                      const WriteOptions& options = {});

struct Table {
  std::string source;  // file name used in error messages
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a named column; InputError naming source and column if absent.
  std::size_t Column(std::string_view name) const;
  bool HasColumn(std::string_view name) const;
};

/// Parses text with a header line. Rows whose width differs from the header
/// are rejected.
Table Parse(std::string_view text, std::string source = "<memory>");
Table ReadFile(const std::filesystem::path& path);

void WriteFile(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows,
               const WriteOptions& options = {});

std::string ReadText(const std::filesystem::path& path);
void WriteText(const std::filesystem::path& path, std::string_view text);

/// Fixed six-decimal rendering used in every numeric output column.
std::string Num(double value);

}  // namespace ccr::csv
