// Copyright 2026 The tinyrel Authors
// SPDX-License-Identifier: Apache-2.0

// Line-oriented TSV helpers shared by the file formats.

#pragma once

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tinyrel {

std::vector<std::string_view> SplitTabs(std::string_view line);

// Strict full-string parses; nullopt on any trailing garbage.
std::optional<double> ParseDouble(std::string_view s);
std::optional<std::uint64_t> ParseUint(std::string_view s);

// Shortest decimal text that parses back to exactly `value`.
std::string FormatDouble(double value);
std::string FormatFloat(float value);

// Parses "#<tag> v1 key=value ..." into its key/value fields. Returns nullopt
// when the line does not start with "#<tag> v1".
std::optional<std::map<std::string, std::string>> ParseHeader(std::string_view line,
                                                              std::string_view tag);

class LineReader {
 public:
  // Throws Error(kIo) if the file cannot be opened.
  explicit LineReader(const std::string& path);

  // Reads the next line (without the trailing '\n' or '\r\n').
  bool Next(std::string& line);
  std::size_t line_number() const { return line_number_; }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ifstream in_;
  std::size_t line_number_ = 0;
};

// Opens `path` for writing or throws Error(kIo).
std::ofstream OpenForWrite(const std::string& path, bool binary = false);

}  // namespace tinyrel
