// Copyright 2026 The tinyrel Authors
// SPDX-License-Identifier: Apache-2.0

#include "tinyrel/dataset.h"

#include "tinyrel/errors.h"
#include "tinyrel/tsv.h"

namespace tinyrel {

std::vector<TextPair> ReadPairs(const std::string& path, std::size_t* skipped) {
  LineReader reader(path);
  std::vector<TextPair> pairs;
  std::size_t bad = 0;
  std::string line;
  while (reader.Next(line)) {
    if (line.empty() || line.front() == '#') continue;
    const auto f = SplitTabs(line);
    if (f.size() < 2) {
      ++bad;
      continue;
    }
    pairs.push_back({std::string(f[0]), std::string(f[1])});
  }
  if (skipped) *skipped = bad;
  return pairs;
}

std::vector<LabeledPair> ReadLabeledPairs(const std::string& path) {
  LineReader reader(path);
  std::vector<LabeledPair> rows;
  std::string line;
  while (reader.Next(line)) {
    if (line.empty() || line.front() == '#') continue;
    const auto f = SplitTabs(line);
    if (f.size() < 3) throw FormatError(path, reader.line_number(), "expected query<TAB>title<TAB>label");
    const auto label = ParseDouble(f[2]);
    if (!label || !(*label >= 0.0 && *label <= 1.0)) {
      throw FormatError(path, reader.line_number(), "label must be a number in [0, 1]");
    }
    rows.push_back({{std::string(f[0]), std::string(f[1])}, *label});
  }
  return rows;
}

EncodedPair EncodePair(const TextPair& pair, const Vocab& vocab, const TokenizerOptions& options) {
  return {vocab.Encode(pair.query, options), vocab.Encode(pair.title, options)};
}

std::vector<EncodedPair> EncodePairs(std::span<const TextPair> pairs, const Vocab& vocab,
                                     const TokenizerOptions& options) {
  std::vector<EncodedPair> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(EncodePair(p, vocab, options));
  return out;
}

std::vector<TrainingExample> EncodeTransferSet(std::span<const TransferExample> examples,
                                               const Vocab& vocab, const TokenizerOptions& options) {
  std::vector<TrainingExample> out;
  out.reserve(examples.size());
  for (const auto& e : examples) {
    out.push_back({{vocab.Encode(e.query, options), vocab.Encode(e.title, options)}, e.soft_label});
  }
  return out;
}

}  // namespace tinyrel
