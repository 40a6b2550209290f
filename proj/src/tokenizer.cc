// Copyright 2026 The tinyrel Authors
// SPDX-License-Identifier: Apache-2.0

#include "tinyrel/tokenizer.h"

namespace tinyrel {
namespace {

constexpr char32_t kInvalid = 0xFFFFFFFF;

// Decodes one codepoint starting at text[pos] and advances pos. Malformed
// sequences consume one byte and yield kInvalid.
char32_t DecodeNext(std::string_view text, std::size_t& pos) {
  const auto byte = [&](std::size_t i) { return static_cast<unsigned char>(text[i]); };
  const unsigned char lead = byte(pos);
  if (lead < 0x80) {
    ++pos;
    return lead;
  }
  int extra;
  char32_t cp;
  char32_t min;
  if ((lead & 0xE0) == 0xC0) {
    extra = 1, cp = lead & 0x1F, min = 0x80;
  } else if ((lead & 0xF0) == 0xE0) {
    extra = 2, cp = lead & 0x0F, min = 0x800;
  } else if ((lead & 0xF8) == 0xF0) {
    extra = 3, cp = lead & 0x07, min = 0x10000;
  } else {
    ++pos;
    return kInvalid;
  }
  if (pos + static_cast<std::size_t>(extra) >= text.size()) {
    ++pos;
    return kInvalid;
  }
  for (int i = 1; i <= extra; ++i) {
    const unsigned char c = byte(pos + i);
    if ((c & 0xC0) != 0x80) {
      ++pos;
      return kInvalid;
    }
    cp = (cp << 6) | (c & 0x3F);
  }
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    ++pos;
    return kInvalid;
  }
  pos += extra + 1;
  return cp;
}

bool IsAsciiAlpha(char32_t cp) {
  return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
}

struct Unigram {
  std::string text;
  bool is_word;  // ASCII word (vs. single CJK character)
};

}  // namespace

bool IsCjkCodepoint(char32_t cp) {
  return (cp >= 0x4E00 && cp <= 0x9FFF) || (cp >= 0x3400 && cp <= 0x4DBF);
}

bool IsValidUtf8(std::string_view text) {
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (DecodeNext(text, pos) == kInvalid) return false;
  }
  return true;
}

TokenSequence Tokenize(std::string_view text, const TokenizerOptions& options) {
  std::vector<Unigram> units;
  std::string word;
  const auto flush_word = [&] {
    if (!word.empty()) {
      units.push_back({std::move(word), true});
      word.clear();
    }
  };

  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t start = pos;
    const char32_t cp = DecodeNext(text, pos);
    if (cp != kInvalid && IsAsciiAlpha(cp)) {
      word.push_back(static_cast<char>(cp | 0x20));
    } else if (cp != kInvalid && IsCjkCodepoint(cp)) {
      flush_word();
      units.push_back({std::string(text.substr(start, pos - start)), false});
    } else {
      flush_word();
    }
  }
  flush_word();

  TokenSequence seq;
  seq.source_length = units.size();
  if (units.empty()) return seq;

  seq.unigrams.reserve(units.size());
  seq.bigrams.reserve(units.size() + 1);
  seq.bigrams.push_back("^" + units.front().text);
  for (std::size_t i = 0; i + 1 < units.size(); ++i) {
    const Unigram& a = units[i];
    const Unigram& b = units[i + 1];
    seq.bigrams.push_back(a.is_word && b.is_word ? a.text + options.joiner + b.text
                                                 : a.text + b.text);
  }
  seq.bigrams.push_back(units.back().text + "$");
  for (Unigram& u : units) seq.unigrams.push_back(std::move(u.text));
  return seq;
}

std::vector<std::string> TokenSet(const TokenSequence& seq) {
  std::vector<std::string> out;
  out.reserve(seq.unigrams.size() + seq.bigrams.size());
  out.insert(out.end(), seq.unigrams.begin(), seq.unigrams.end());
  out.insert(out.end(), seq.bigrams.begin(), seq.bigrams.end());
  return out;
}

std::vector<std::string> TokenizeToSet(std::string_view text,
                                       const TokenizerOptions& options) {
  return TokenSet(Tokenize(text, options));
}

}  // namespace tinyrel
