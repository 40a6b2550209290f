// Copyright 2026 The tinyrel Authors
// SPDX-License-Identifier: Apache-2.0

#include "tinyrel/vocab.h"

#include <algorithm>
#include <numeric>

#include "tinyrel/errors.h"
#include "tinyrel/tsv.h"

namespace tinyrel {
namespace {

// Id order: descending count, then ascending bytes.
bool Precedes(std::uint64_t count_a, const std::string& a, std::uint64_t count_b,
              const std::string& b) {
  if (count_a != count_b) return count_a > count_b;
  return a < b;
}

}  // namespace

Vocab Vocab::FromOrdered(std::vector<std::string> tokens, std::vector<std::uint64_t> counts) {
  if (tokens.size() != counts.size()) throw UsageError("vocab: tokens/counts length mismatch");
  if (tokens.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw UsageError("vocab: too many entries");
  }
  Vocab v;
  v.index_.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].empty()) throw Error(ErrorKind::kFormat, "vocab: empty token at id " + std::to_string(i));
    if (counts[i] == 0) throw Error(ErrorKind::kFormat, "vocab: zero count for token " + tokens[i]);
    if (!v.index_.emplace(tokens[i], static_cast<std::uint32_t>(i)).second) {
      throw Error(ErrorKind::kFormat, "vocab: duplicate token " + tokens[i]);
    }
    if (i > 0 && (counts[i] > counts[i - 1] || (counts[i] == counts[i - 1] && tokens[i] < tokens[i - 1]))) {
      throw Error(ErrorKind::kFormat, "vocab: entry " + std::to_string(i) +
                                          " breaks count-descending, token-ascending order");
    }
  }
  v.tokens_ = std::move(tokens);
  v.counts_ = std::move(counts);
  return v;
}

std::optional<std::uint32_t> Vocab::Lookup(std::string_view token) const {
  if (token.empty()) return std::nullopt;
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::uint32_t> Vocab::Encode(const TokenSequence& seq) const {
  std::vector<std::uint32_t> ids;
  ids.reserve(seq.unigrams.size() + seq.bigrams.size());
  const auto add = [&](const std::string& tok) {
    auto it = index_.find(tok);
    if (it != index_.end()) ids.push_back(it->second);
  };
  for (const auto& tok : seq.unigrams) add(tok);
  for (const auto& tok : seq.bigrams) add(tok);
  return ids;
}

std::vector<std::uint32_t> Vocab::Encode(std::string_view text,
                                         const TokenizerOptions& options) const {
  return Encode(Tokenize(text, options));
}

void VocabCounter::AddText(std::string_view text) {
  const TokenSequence seq = Tokenize(text, options_);
  for (const auto& tok : seq.unigrams) ++counts_[tok];
  for (const auto& tok : seq.bigrams) ++counts_[tok];
}

void VocabCounter::AddPair(std::string_view query, std::string_view title) {
  AddText(query);
  AddText(title);
}

void VocabCounter::Merge(const VocabCounter& other) {
  for (const auto& [tok, n] : other.counts_) counts_[tok] += n;
}

Vocab VocabCounter::Finalize(std::uint64_t min_count, std::size_t max_size) const {
  if (min_count < 1) throw UsageError("min_count must be >= 1");
  std::vector<std::pair<const std::string*, std::uint64_t>> kept;
  for (const auto& [tok, n] : counts_) {
    if (n >= min_count) kept.emplace_back(&tok, n);
  }
  const auto order = [](const auto& a, const auto& b) {
    return Precedes(a.second, *a.first, b.second, *b.first);
  };
  if (kept.size() > max_size) {
    std::partial_sort(kept.begin(), kept.begin() + static_cast<std::ptrdiff_t>(max_size),
                      kept.end(), order);
    kept.resize(max_size);
  } else {
    std::sort(kept.begin(), kept.end(), order);
  }
  std::vector<std::string> tokens;
  std::vector<std::uint64_t> counts;
  tokens.reserve(kept.size());
  counts.reserve(kept.size());
  for (const auto& [tok, n] : kept) {
    tokens.push_back(*tok);
    counts.push_back(n);
  }
  return Vocab::FromOrdered(std::move(tokens), std::move(counts));
}

Vocab BuildVocab(std::span<const TextPair> corpus, const VocabOptions& options) {
  VocabCounter counter(options.tokenizer);
  for (const auto& pair : corpus) counter.AddPair(pair.query, pair.title);
  return counter.Finalize(options.min_count, options.max_size);
}

Vocab BuildVocabFromFile(const std::string& path, const VocabOptions& options,
                         VocabBuildStats* stats) {
  VocabCounter counter(options.tokenizer);
  VocabBuildStats local;
  LineReader reader(path);
  std::string line;
  while (reader.Next(line)) {
    if (line.empty() || line.front() == '#') continue;
    const auto fields = SplitTabs(line);
    if (fields.size() < 2 || !IsValidUtf8(fields[0]) || !IsValidUtf8(fields[1])) {
      ++local.skipped;
      continue;
    }
    counter.AddPair(fields[0], fields[1]);
    ++local.records;
  }
  local.distinct_tokens = counter.distinct();
  if (stats) *stats = local;
  return counter.Finalize(options.min_count, options.max_size);
}

void SaveVocab(const Vocab& vocab, const std::string& path) {
  std::ofstream out = OpenForWrite(path, true);
  out << "#cwub-vocab v1 size=" << vocab.size() << '\n';
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    out << vocab.tokens()[i] << '\t' << i << '\t' << vocab.counts()[i] << '\n';
  }
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

Vocab LoadVocab(const std::string& path) {
  LineReader reader(path);
  std::string line;
  if (!reader.Next(line)) throw FormatError(path, 1, "missing #cwub-vocab header");
  const auto header = ParseHeader(line, "cwub-vocab");
  if (!header || !header->contains("size")) {
    throw FormatError(path, 1, "expected '#cwub-vocab v1 size=<N>'");
  }
  const auto declared = ParseUint(header->at("size"));
  if (!declared) throw FormatError(path, 1, "bad size field");

  std::vector<std::string> tokens;
  std::vector<std::uint64_t> counts;
  std::unordered_map<std::string, std::size_t> seen;
  while (reader.Next(line)) {
    const std::size_t ln = reader.line_number();
    const auto fields = SplitTabs(line);
    if (fields.size() != 3) throw FormatError(path, ln, "expected token<TAB>id<TAB>count");
    const auto id = ParseUint(fields[1]);
    const auto count = ParseUint(fields[2]);
    if (fields[0].empty()) throw FormatError(path, ln, "empty token");
    if (!id || !count) throw FormatError(path, ln, "non-numeric id or count");
    if (*count == 0) throw FormatError(path, ln, "zero count");
    if (*id != tokens.size()) {
      throw FormatError(path, ln, "non-dense id " + std::to_string(*id) + ", expected " +
                                      std::to_string(tokens.size()));
    }
    std::string tok(fields[0]);
    if (auto [it, fresh] = seen.emplace(tok, ln); !fresh) {
      throw FormatError(path, ln, "duplicate token '" + tok + "' (first on line " +
                                      std::to_string(it->second) + ")");
    }
    if (!tokens.empty() && !Precedes(counts.back(), tokens.back(), *count, tok)) {
      throw FormatError(path, ln, "entries not in (count desc, token asc) order");
    }
    tokens.push_back(std::move(tok));
    counts.push_back(*count);
  }
  if (tokens.size() != *declared) {
    throw FormatError(path, reader.line_number(),
                      "header size=" + std::to_string(*declared) + " but " +
                          std::to_string(tokens.size()) + " entries");
  }
  return Vocab::FromOrdered(std::move(tokens), std::move(counts));
}

}  // namespace tinyrel
