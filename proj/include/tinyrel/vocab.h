// Copyright 2026 The tinyrel Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tinyrel/tokenizer.h"

namespace tinyrel {

struct TextPair {
  std::string query;
  std::string title;
};

struct VocabOptions {
  std::uint64_t min_count = 5;
  std::size_t max_size = std::numeric_limits<std::size_t>::max();  // unlimited
  TokenizerOptions tokenizer;
};

// Dense token -> id map. Ids follow descending count, ties by ascending byte
// order of the token.
class Vocab {
 public:
  Vocab() = default;

  // Takes (token, count) pairs already in id order. Throws Error(kFormat)
  // on empty or duplicate tokens, zero counts, or entries out of
  // count-descending, token-ascending order.
  static Vocab FromOrdered(std::vector<std::string> tokens, std::vector<std::uint64_t> counts);

  std::optional<std::uint32_t> Lookup(std::string_view token) const;

  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }
  const std::string& token(std::uint32_t id) const { return tokens_[id]; }
  std::uint64_t count(std::uint32_t id) const { return counts_[id]; }
  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::vector<std::uint64_t>& counts() const { return counts_; }

  // Ids of the in-vocab tokens of `text`'s token set, OOV dropped.
  std::vector<std::uint32_t> Encode(std::string_view text,
                                    const TokenizerOptions& options = {}) const;
  std::vector<std::uint32_t> Encode(const TokenSequence& seq) const;

  bool operator==(const Vocab& other) const {
    return tokens_ == other.tokens_ && counts_ == other.counts_;
  }

 private:
  std::vector<std::string> tokens_;
  std::vector<std::uint64_t> counts_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

// Exact token counter; shards can count independently and Merge.
class VocabCounter {
 public:
  explicit VocabCounter(TokenizerOptions options = {}) : options_(std::move(options)) {}

  void AddText(std::string_view text);
  void AddPair(std::string_view query, std::string_view title);
  void Merge(const VocabCounter& other);

  Vocab Finalize(std::uint64_t min_count, std::size_t max_size) const;

  std::size_t distinct() const { return counts_.size(); }

 private:
  TokenizerOptions options_;
  std::unordered_map<std::string, std::uint64_t> counts_;
};

struct VocabBuildStats {
  std::size_t records = 0;
  std::size_t skipped = 0;  // malformed or non-UTF-8 records
  std::size_t distinct_tokens = 0;
};

Vocab BuildVocab(std::span<const TextPair> corpus, const VocabOptions& options);

// Streams a TSV corpus whose first two columns are query and title. Lines
// starting with '#' are skipped; malformed lines are tallied in `stats`.
Vocab BuildVocabFromFile(const std::string& path, const VocabOptions& options,
                         VocabBuildStats* stats = nullptr);

// "#cwub-vocab v1 size=<N>" then "token\tid\tcount" per line, in id order.
void SaveVocab(const Vocab& vocab, const std::string& path);
Vocab LoadVocab(const std::string& path);

}  // namespace tinyrel
