// Copyright 2026 The tinyrel Authors
// SPDX-License-Identifier: Apache-2.0

// CWUB tokenization: single CJK characters and lower-cased ASCII words as
// unigrams, adjacent pairs as bigrams, plus "^first" and "last$" boundary
// bigrams. Everything else (digits, punctuation, whitespace, other scripts,
// invalid UTF-8) separates tokens and is dropped.

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace tinyrel {

// Joins two ASCII words inside a bigram. It is a separator character in input
// text, so it never occurs inside a unigram.
inline constexpr std::string_view kDefaultBigramJoiner = "\x1f";

struct TokenizerOptions {
  std::string joiner{kDefaultBigramJoiner};
};

struct TokenSequence {
  std::vector<std::string> unigrams;
  std::vector<std::string> bigrams;
  // Number of unigrams extracted from the text, before any vocab filtering.
  std::size_t source_length = 0;

  bool operator==(const TokenSequence&) const = default;
};

// True for the CJK unified ideographs block and extension A.
bool IsCjkCodepoint(char32_t cp);

TokenSequence Tokenize(std::string_view text, const TokenizerOptions& options = {});

// Unigrams followed by bigrams, order and duplicates preserved.
std::vector<std::string> TokenSet(const TokenSequence& seq);

// Convenience: TokenSet(Tokenize(text, options)).
std::vector<std::string> TokenizeToSet(std::string_view text,
                                       const TokenizerOptions& options = {});

// Validates UTF-8 (no overlongs, surrogates, or codepoints past U+10FFFF).
bool IsValidUtf8(std::string_view text);

}  // namespace tinyrel
