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

#include "ccr/csv.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "ccr/error.hpp"

namespace ccr::csv {

std::string FormatRow(const std::vector<std::string>& fields,
                      const WriteOptions& options) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += options.delimiter;
    const std::string& f = fields[i];
    bool special = f.find_first_of(std::string{options.delimiter, '"', '\n', '\r'}) !=
                   std::string::npos;
    if (!special) {
      line += f;
      continue;
    }
    if (!options.quote)
      throw SerializationError(
          fmt::format("field '{}' contains the delimiter or a quote and quoting is disabled", f));
    line += '"';
    for (char c : f) {
      if (c == '"') line += '"';
      line += c;
    }
    line += '"';
  }
  line += '\n';
  return line;
}

std::size_t Table::Column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw InputError(fmt::format("{}: missing column '{}'", source, name));
}

bool Table::HasColumn(std::string_view name) const {
  for (const auto& h : header)
    if (h == name) return true;
  return false;
}

Table Parse(std::string_view text, std::string source) {
  Table table;
  table.source = std::move(source);
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t line = 1;

  auto end_record = [&] {
    record.push_back(std::move(field));
    field.clear();
    records.push_back(std::move(record));
    record.clear();
    field_started = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty())
          throw InputError(fmt::format("{}:{}: stray quote inside unquoted field", table.source, line));
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        record.push_back(std::move(field));
        field.clear();
        field_started = true;
        break;
      case '\r':
        break;
      case '\n':
        end_record();
        ++line;
        break;
      default:
        field += c;
        field_started = true;
    }
  }
  if (in_quotes) throw InputError(fmt::format("{}: unterminated quoted field", table.source));
  if (field_started || !record.empty()) end_record();

  if (records.empty()) throw InputError(fmt::format("{}: empty CSV (no header)", table.source));
  table.header = std::move(records.front());
  for (std::size_t r = 1; r < records.size(); ++r) {
    auto& row = records[r];
    if (row.size() == 1 && row[0].empty()) continue;  // blank line
    if (row.size() != table.header.size())
      throw InputError(fmt::format("{}: row {} has {} fields, header has {}", table.source, r + 1,
                                   row.size(), table.header.size()));
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string ReadText(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}' for reading", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteText(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError(fmt::format("write to '{}' failed", path.string()));
}

Table ReadFile(const std::filesystem::path& path) {
  return Parse(ReadText(path), path.filename().string());
}

void WriteFile(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows,
               const WriteOptions& options) {
  std::string text = FormatRow(header, options);
  for (const auto& row : rows) text += FormatRow(row, options);
  WriteText(path, text);
}

std::string Num(double value) {
  if (std::isnan(value)) return "nan";
  std::string s = fmt::format("{:.6f}", value);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

}  // namespace ccr::csv
