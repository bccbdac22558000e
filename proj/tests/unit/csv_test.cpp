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

#include <gtest/gtest.h>

#include "ccr/csv.hpp"
#include "ccr/error.hpp"
#include "test_util.hpp"

namespace ccr::csv {
namespace {

TEST(Csv, QuotesOnlyWhenNeeded) {
  EXPECT_EQ(FormatRow({"a", "b,c", "say \"hi\"", ""}), "a,\"b,c\",\"say \"\"hi\"\"\",\n");
  EXPECT_THROW(FormatRow({"a,b"}, {',', false}), SerializationError);
  EXPECT_EQ(FormatRow({"a,b", "c"}, {';', false}), "a,b;c\n");
}

TEST(Csv, RoundTripsAwkwardFields) {
  std::vector<std::vector<std::string>> rows = {
      {"plain", "with,comma", "line\nbreak"}, {"\"quoted\"", "", " spaced "}};
  std::string text = FormatRow({"x", "y", "z"});
  for (const auto& r : rows) text += FormatRow(r);
  auto t = Parse(text);
  EXPECT_EQ(t.header, (std::vector<std::string>{"x", "y", "z"}));
  EXPECT_EQ(t.rows, rows);
}

TEST(Csv, AcceptsCrlfAndMissingTrailingNewline) {
  auto t = Parse("a,b\r\n1,2\r\n3,4");
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[1][1], "4");
}

TEST(Csv, RejectsRaggedRowsAndNamesMissingColumns) {
  EXPECT_THROW(Parse("a,b\n1\n", "f.csv"), InputError);
  auto t = Parse("a,b\n1,2\n", "votes.csv");
  try {
    t.Column("rating");
    FAIL();
  } catch (const InputError& e) {
    std::string what = e.what();
    EXPECT_NE(what.find("votes.csv"), std::string::npos);
    EXPECT_NE(what.find("rating"), std::string::npos);
  }
}

TEST(Csv, FileRoundTrip) {
  testing::TempDir dir;
  WriteFile(dir / "t.csv", {"k", "v"}, {{"a", "1"}, {"b", "2"}});
  auto t = ReadFile(dir / "t.csv");
  EXPECT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.source, "t.csv");
  EXPECT_THROW(ReadFile(dir / "missing.csv"), IoError);
}

TEST(Csv, NumIsFixedAndSignless) {
  EXPECT_EQ(Num(1.0 / 3.0), "0.333333");
  EXPECT_EQ(Num(-0.0), "0.000000");
  EXPECT_EQ(Num(-1e-9), "0.000000");
}

}  // namespace
}  // namespace ccr::csv
