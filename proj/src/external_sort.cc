// Copyright 2026 The tinyrel Authors
// SPDX-License-Identifier: Apache-2.0

#include "tinyrel/external_sort.h"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <memory>
#include <queue>
#include <string_view>
#include <unistd.h>
#include <vector>

#include "tinyrel/errors.h"
#include "tinyrel/tsv.h"

namespace tinyrel {
namespace {

namespace fs = std::filesystem;

// Byte-order comparison of the (field0, field1) key of two lines.
bool KeyLess(std::string_view a, std::string_view b) {
  const std::size_t a1 = a.find('\t');
  const std::size_t b1 = b.find('\t');
  const std::string_view aq = a.substr(0, a1), bq = b.substr(0, b1);
  if (aq != bq) return aq < bq;
  const std::string_view ar = a.substr(a1 + 1), br = b.substr(b1 + 1);
  const std::string_view at = ar.substr(0, ar.find('\t')), bt = br.substr(0, br.find('\t'));
  return at < bt;
}

// Owns the run files and removes them on scope exit.
class RunFiles {
 public:
  explicit RunFiles(const std::string& temp_dir) {
    static std::atomic<unsigned> counter{0};
    const fs::path base = temp_dir.empty() ? fs::temp_directory_path() : fs::path(temp_dir);
    dir_ = base / ("tinyrel-sort-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::create_directories(dir_);
  }
  ~RunFiles() {
    std::error_code ec;
    fs::remove_all(dir_, ec);
  }
  RunFiles(const RunFiles&) = delete;
  RunFiles& operator=(const RunFiles&) = delete;

  std::string Next() { return (dir_ / ("run" + std::to_string(count_++) + ".tsv")).string(); }

 private:
  fs::path dir_;
  std::size_t count_ = 0;
};

void WriteRun(const std::string& path, const std::vector<std::string>& lines) {
  std::ofstream out = OpenForWrite(path, true);
  for (const auto& line : lines) out << line << '\n';
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace

ExternalSortStats ExternalSortByKey(const std::string& in_path, const std::string& out_path,
                                    const ExternalSortOptions& options) {
  if (options.run_lines == 0) throw UsageError("run_lines must be positive");
  LineReader reader(in_path);
  RunFiles runs(options.temp_dir);
  std::vector<std::string> run_paths;
  std::vector<std::string> buffer;
  std::string header;
  bool has_header = false;
  ExternalSortStats stats;

  const auto spill = [&] {
    if (buffer.empty()) return;
    std::stable_sort(buffer.begin(), buffer.end(), KeyLess);
    run_paths.push_back(runs.Next());
    WriteRun(run_paths.back(), buffer);
    buffer.clear();
  };

  std::string line;
  while (reader.Next(line)) {
    if (reader.line_number() == 1 && !line.empty() && line.front() == '#') {
      header = line;
      has_header = true;
      continue;
    }
    if (line.find('\t') == std::string::npos) {
      throw FormatError(in_path, reader.line_number(), "expected at least two tab-separated fields");
    }
    buffer.push_back(line);
    ++stats.lines;
    if (buffer.size() >= options.run_lines) spill();
  }
  spill();
  stats.runs = run_paths.size();

  std::ofstream out = OpenForWrite(out_path, true);
  if (has_header) out << header << '\n';

  // k-way merge; ties resolved by run index, which preserves input order.
  std::vector<std::unique_ptr<LineReader>> readers;
  std::vector<std::string> heads(run_paths.size());
  const auto after = [&](std::size_t a, std::size_t b) {
    if (KeyLess(heads[b], heads[a])) return true;
    if (KeyLess(heads[a], heads[b])) return false;
    return a > b;
  };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(after)> queue(after);
  for (std::size_t i = 0; i < run_paths.size(); ++i) {
    readers.push_back(std::make_unique<LineReader>(run_paths[i]));
    if (readers[i]->Next(heads[i])) queue.push(i);
  }
  while (!queue.empty()) {
    const std::size_t i = queue.top();
    queue.pop();
    out << heads[i] << '\n';
    if (readers[i]->Next(heads[i])) queue.push(i);
  }
  out.flush();
  if (!out) throw IoError("write failed: " + out_path);
  return stats;
}

}  // namespace tinyrel
