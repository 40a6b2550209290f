// Copyright 2026 The tinyrel Authors
// SPDX-License-Identifier: Apache-2.0

#include "tinyrel/tsv.h"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "../support/test_support.h"
#include "tinyrel/errors.h"
#include "tinyrel/random.h"

namespace tinyrel {
namespace {

using testing::TempDir;
using testing::WriteFile;

TEST(SplitTabs, KeepsEmptyFields) {
  EXPECT_EQ(SplitTabs("a\tb\tc"), (std::vector<std::string_view>{"a", "b", "c"}));
  EXPECT_EQ(SplitTabs(""), (std::vector<std::string_view>{""}));
  EXPECT_EQ(SplitTabs("\t"), (std::vector<std::string_view>{"", ""}));
  EXPECT_EQ(SplitTabs("a\t\tb"), (std::vector<std::string_view>{"a", "", "b"}));
}

TEST(ParseNumbers, StrictFullString) {
  EXPECT_EQ(ParseDouble("0.25"), 0.25);
  EXPECT_EQ(ParseDouble("-1e3"), -1000.0);
  EXPECT_FALSE(ParseDouble(""));
  EXPECT_FALSE(ParseDouble("1.0x"));
  EXPECT_FALSE(ParseDouble(" 1"));
  EXPECT_EQ(ParseUint("42"), 42u);
  EXPECT_FALSE(ParseUint("-1"));
  EXPECT_FALSE(ParseUint("4 2"));
  EXPECT_FALSE(ParseUint("99999999999999999999999"));
}

TEST(FormatDoubleProperty, RoundTripsExactly) {
  Rng rng(1);
  for (int i = 0; i < 5000; ++i) {
    const double v = rng.Normal() * std::pow(10.0, rng.Uniform(-30, 30));
    EXPECT_EQ(*ParseDouble(FormatDouble(v)), v);
    const float f = static_cast<float>(v);
    if (std::isfinite(f)) EXPECT_EQ(static_cast<float>(*ParseDouble(FormatFloat(f))), f);
  }
  EXPECT_EQ(FormatDouble(0.5), "0.5");
  EXPECT_EQ(FormatDouble(1.0), "1");
}

TEST(ParseHeader, FieldsAndRejections) {
  const auto h = ParseHeader("#teacher-scores v1 teacher=bert kind=logits", "teacher-scores");
  ASSERT_TRUE(h);
  EXPECT_EQ(h->at("teacher"), "bert");
  EXPECT_EQ(h->at("kind"), "logits");
  EXPECT_TRUE(ParseHeader("#behavior v1", "behavior"));
  EXPECT_FALSE(ParseHeader("#behavior v2", "behavior"));
  EXPECT_FALSE(ParseHeader("#behavior v10", "behavior"));
  EXPECT_FALSE(ParseHeader("#behavior v1 noequals", "behavior"));
  EXPECT_FALSE(ParseHeader("behavior v1", "behavior"));
}

TEST(LineReader, StripsLineEndingsAndCountsLines) {
  TempDir dir;
  WriteFile(dir.File("x.tsv"), "a\r\nb\n\nc");
  LineReader reader(dir.File("x.tsv"));
  std::string line;
  std::vector<std::string> lines;
  while (reader.Next(line)) lines.push_back(line);
  EXPECT_EQ(lines, (std::vector<std::string>{"a", "b", "", "c"}));
  EXPECT_EQ(reader.line_number(), 4u);
}

TEST(LineReader, MissingFileIsIoError) {
  try {
    LineReader reader("/nonexistent/file.tsv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kIo);
    EXPECT_NE(std::string(e.what()).find("/nonexistent/file.tsv"), std::string::npos);
  }
  EXPECT_THROW(OpenForWrite("/nonexistent/dir/out.tsv"), Error);
}

}  // namespace
}  // namespace tinyrel
