// Copyright 2026 The tinyrel Authors
// SPDX-License-Identifier: Apache-2.0

#include "tinyrel/tokenizer.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cctype>

#include "../support/oracles.h"
#include "tinyrel/random.h"

namespace tinyrel {
namespace {

using Strings = std::vector<std::string>;

TEST(Tokenize, MixedChineseEnglishQuery) {
  const TokenSequence seq = Tokenize("mac电脑");
  EXPECT_EQ(seq.unigrams, (Strings{"mac", "电", "脑"}));
  EXPECT_EQ(seq.bigrams, (Strings{"^mac", "mac电", "电脑", "脑$"}));
  EXPECT_EQ(seq.source_length, 3u);

  Strings set = TokenSet(seq);
  ASSERT_EQ(set.size(), 7u);
  std::sort(set.begin(), set.end());
  Strings listed{"^mac", "mac", "mac电", "电", "电脑", "脑", "脑$"};
  std::sort(listed.begin(), listed.end());
  EXPECT_EQ(set, listed);
}

TEST(Tokenize, EmptyText) {
  const TokenSequence seq = Tokenize("");
  EXPECT_TRUE(seq.unigrams.empty());
  EXPECT_TRUE(seq.bigrams.empty());
  EXPECT_TRUE(TokenSet(seq).empty());
}

TEST(Tokenize, EnglishWordsUseJoiner) {
  const TokenSequence seq = Tokenize("Red SWEATER");
  EXPECT_EQ(seq.unigrams, (Strings{"red", "sweater"}));
  EXPECT_EQ(seq.bigrams, (Strings{"^red", "red\x1fsweater", "sweater$"}));

  TokenizerOptions opts;
  opts.joiner = "_";
  EXPECT_EQ(Tokenize("Red SWEATER", opts).bigrams, (Strings{"^red", "red_sweater", "sweater$"}));
}

TEST(TokenSet, ConcatenatesUnigramsThenBigrams) {
  TokenSequence seq;
  seq.unigrams = {"a"};
  seq.bigrams = {"^a", "a$"};
  EXPECT_EQ(TokenSet(seq), (Strings{"a", "^a", "a$"}));
}

TEST(TokenSet, KeepsDuplicates) {
  EXPECT_EQ(TokenizeToSet("电电"), (Strings{"电", "电", "^电", "电电", "电$"}));
}

TEST(Tokenize, SeparatorsProduceNoTokens) {
  EXPECT_EQ(Tokenize("165/88A").unigrams, (Strings{"a"}));
  EXPECT_TRUE(Tokenize("  123 ,.!? ").unigrams.empty());
  // Reserved boundary characters in input are separators.
  EXPECT_EQ(Tokenize("a^b$c").unigrams, (Strings{"a", "b", "c"}));
  // Full-width punctuation, kana and emoji are outside the unigram classes.
  EXPECT_EQ(Tokenize("电，脑。ひら😀x").unigrams, (Strings{"电", "脑", "x"}));
}

TEST(Tokenize, CjkExtensionAAndTraditionalPassThrough) {
  EXPECT_TRUE(IsCjkCodepoint(0x3400));
  EXPECT_TRUE(IsCjkCodepoint(0x4DBF));
  EXPECT_TRUE(IsCjkCodepoint(0x4E00));
  EXPECT_TRUE(IsCjkCodepoint(0x9FFF));
  EXPECT_FALSE(IsCjkCodepoint(0x33FF));
  EXPECT_FALSE(IsCjkCodepoint(0xA000));
  EXPECT_FALSE(IsCjkCodepoint(0x20000));
  EXPECT_EQ(Tokenize("電腦㐀").unigrams, (Strings{"電", "腦", "㐀"}));
}

TEST(Tokenize, InvalidUtf8BytesAreSeparators) {
  EXPECT_EQ(Tokenize("ab\xff" "cd").unigrams, (Strings{"ab", "cd"}));
  EXPECT_EQ(Tokenize("ab\xe7\x94").unigrams, (Strings{"ab"}));          // truncated sequence
  EXPECT_EQ(Tokenize("a\xc0\xafz").unigrams, (Strings{"a", "z"}));      // overlong '/'
  EXPECT_EQ(Tokenize("a\xed\xa0\x80z").unigrams, (Strings{"a", "z"}));  // surrogate
  EXPECT_FALSE(IsValidUtf8("\xff"));
  EXPECT_FALSE(IsValidUtf8("\xe7\x94"));
  EXPECT_TRUE(IsValidUtf8("mac电脑"));
}

TEST(Tokenize, MixedAdjacencyJoinsOnlyAsciiPairs) {
  const TokenSequence seq = Tokenize("iphone 手机 case cover");
  EXPECT_EQ(seq.bigrams,
            (Strings{"^iphone", "iphone手", "手机", "机case", "case\x1f" "cover", "cover$"}));
}

// Random strings over an alphabet mixing ASCII letters, digits, CJK,
// punctuation, whitespace and stray bytes.
std::string RandomText(Rng& rng, std::size_t max_pieces) {
  static const std::vector<std::string> pieces = {
      "a", "B", "z", "Q", "m", " ", " ", "\t", "7", "-", "^", "$", "电", "脑", "鞋", "㐂", "電",
      "，", "é", "ß", "\xff", "\xe7\x94", "\xc0\xaf", "😀", "ひ"};
  std::string s;
  const std::size_t n = static_cast<std::size_t>(rng.Below(max_pieces + 1));
  for (std::size_t i = 0; i < n; ++i) s += pieces[static_cast<std::size_t>(rng.Below(pieces.size()))];
  return s;
}

TEST(TokenizeProperty, MatchesReferenceImplementation) {
  Rng rng(101);
  for (int trial = 0; trial < 3000; ++trial) {
    const std::string text = RandomText(rng, 24);
    ASSERT_EQ(TokenizeToSet(text), oracle::Tokenize(text)) << "text: " << text;
  }
}

TEST(TokenizeProperty, TokenCountLaw) {
  Rng rng(102);
  for (int trial = 0; trial < 2000; ++trial) {
    const TokenSequence seq = Tokenize(RandomText(rng, 24));
    const std::size_t n = seq.unigrams.size();
    EXPECT_EQ(TokenSet(seq).size(), n == 0 ? 0 : 2 * n + 1);
    EXPECT_EQ(seq.bigrams.size(), n == 0 ? 0 : n + 1);
    for (const auto& t : TokenSet(seq)) EXPECT_FALSE(t.empty());
  }
}

TEST(TokenizeProperty, CasingIdempotentOnAscii) {
  Rng rng(103);
  for (int trial = 0; trial < 1000; ++trial) {
    std::string text;
    const std::size_t n = static_cast<std::size_t>(rng.Below(30));
    for (std::size_t i = 0; i < n; ++i) text.push_back(static_cast<char>(0x20 + rng.Below(0x5F)));
    std::string lower = text;
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    EXPECT_EQ(Tokenize(text), Tokenize(lower)) << text;
  }
}

TEST(TokenizeProperty, Deterministic) {
  Rng rng(104);
  for (int trial = 0; trial < 500; ++trial) {
    const std::string text = RandomText(rng, 30);
    EXPECT_EQ(Tokenize(text), Tokenize(text));
  }
}

TEST(TokenizeProperty, LocalityAcrossWhitespaceSeam) {
  Rng rng(105);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::string a = RandomText(rng, 12);
    const std::string b = RandomText(rng, 12);
    Strings joined = Tokenize(a + " " + b).unigrams;
    Strings parts = Tokenize(a).unigrams;
    const Strings tail = Tokenize(b).unigrams;
    parts.insert(parts.end(), tail.begin(), tail.end());
    EXPECT_EQ(joined, parts) << a << " | " << b;
  }
}

}  // namespace
}  // namespace tinyrel
