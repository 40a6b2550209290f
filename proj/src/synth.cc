// Copyright 2026 The tinyrel Authors
// SPDX-License-Identifier: Apache-2.0

#include "tinyrel/synth.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <unordered_set>

#include "tinyrel/distill.h"
#include "tinyrel/errors.h"
#include "tinyrel/random.h"
#include "tinyrel/tsv.h"

namespace tinyrel {
namespace {

std::string EncodeUtf8(char32_t cp) {
  std::string s;
  s.push_back(static_cast<char>(0xE0 | (cp >> 12)));
  s.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
  s.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  return s;
}

std::string RandomSentence(const std::vector<std::string>& words, std::size_t lo, std::size_t hi,
                           Rng& rng) {
  const std::size_t n = lo + static_cast<std::size_t>(rng.Below(hi - lo + 1));
  std::string s;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) s.push_back(' ');
    s += words[static_cast<std::size_t>(rng.Below(words.size()))];
  }
  return s;
}

}  // namespace

SyntheticTeacher::SyntheticTeacher(const SynthOptions& options) : options_(options) {
  if (options.words < 2) throw UsageError("synthetic inventory needs at least 2 words");
  if (options.teachers == 0) throw UsageError("need at least one teacher");
  if (options.min_query_words == 0 || options.min_query_words > options.max_query_words ||
      options.min_title_words == 0 || options.min_title_words > options.max_title_words) {
    throw UsageError("bad sentence length range");
  }
  Rng rng(options.seed);
  const auto cjk = static_cast<std::size_t>(std::round(options.cjk_fraction * static_cast<double>(options.words)));
  if (cjk > 0x5000) throw UsageError("too many CJK words requested");
  // Distinct CJK characters spread over the unified block.
  std::unordered_set<std::string> seen;
  while (words_.size() < cjk) {
    std::string w = EncodeUtf8(static_cast<char32_t>(0x4E00 + rng.Below(0x9FA5 - 0x4E00)));
    if (seen.insert(w).second) words_.push_back(std::move(w));
  }
  while (words_.size() < options.words) {
    const std::size_t len = 3 + static_cast<std::size_t>(rng.Below(6));
    std::string w;
    for (std::size_t i = 0; i < len; ++i) w.push_back(static_cast<char>('a' + rng.Below(26)));
    if (seen.insert(w).second) words_.push_back(std::move(w));
  }
  for (std::size_t i = 0; i < words_.size(); ++i) word_index_.emplace(words_[i], i);

  std::vector<double> base_q(words_.size()), base_t(words_.size());
  for (auto& x : base_q) x = rng.Normal();
  for (auto& x : base_t) x = rng.Normal();
  for (std::size_t k = 0; k < options.teachers; ++k) {
    auto q = base_q, t = base_t;
    if (k > 0) {
      for (auto& x : q) x += options.teacher_noise * rng.Normal();
      for (auto& x : t) x += options.teacher_noise * rng.Normal();
    }
    query_weights_.push_back(std::move(q));
    title_weights_.push_back(std::move(t));
  }
}

double SyntheticTeacher::Side(const std::string& text, const std::vector<double>& weights) const {
  const TokenSequence seq = Tokenize(text);
  double sum = 0.0;
  for (const auto& u : seq.unigrams) {
    auto it = word_index_.find(u);
    if (it != word_index_.end()) sum += weights[it->second];
  }
  const std::size_t tokens = seq.unigrams.size() + seq.bigrams.size();
  return tokens ? sum / std::sqrt(static_cast<double>(tokens)) : 0.0;
}

double SyntheticTeacher::Logit(const TextPair& pair, std::size_t teacher) const {
  return options_.logit_scale *
         (Side(pair.query, query_weights_.at(teacher)) + Side(pair.title, title_weights_.at(teacher)));
}

SynthCorpus GenerateSynthetic(const SynthOptions& options) {
  const SyntheticTeacher teacher(options);
  Rng rng(options.seed ^ 0x5DEECE66DULL);
  std::unordered_set<std::string> keys;
  const auto sample = [&](std::vector<TextPair>& out, std::size_t n) {
    while (out.size() < n) {
      TextPair p{RandomSentence(teacher.words(), options.min_query_words, options.max_query_words, rng),
                 RandomSentence(teacher.words(), options.min_title_words, options.max_title_words, rng)};
      if (keys.insert(p.query + '\t' + p.title).second) out.push_back(std::move(p));
    }
  };
  SynthCorpus corpus;
  sample(corpus.train, options.pairs);
  sample(corpus.heldout, options.heldout);
  for (std::size_t k = 0; k < teacher.teachers(); ++k) {
    std::vector<double> train, held;
    for (const auto& p : corpus.train) train.push_back(teacher.Logit(p, k));
    for (const auto& p : corpus.heldout) held.push_back(teacher.Logit(p, k));
    corpus.train_logits.push_back(std::move(train));
    corpus.heldout_logits.push_back(std::move(held));
  }
  return corpus;
}

double SynthHeldoutLabel(const SynthCorpus& corpus, std::size_t i) {
  std::vector<double> probs;
  for (const auto& logits : corpus.heldout_logits) probs.push_back(Soften(logits[i] / 2, -logits[i] / 2, 1.0));
  return StackScores(probs);
}

void WriteSyntheticFixture(const SynthCorpus& corpus, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::string base = dir + "/";
  {
    std::ofstream out = OpenForWrite(base + "corpus.tsv", true);
    for (const auto& p : corpus.train) out << p.query << '\t' << p.title << '\n';
    if (!out.flush()) throw IoError("write failed: " + base + "corpus.tsv");
  }
  std::vector<std::size_t> order(corpus.train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& pa = corpus.train[a];
    const auto& pb = corpus.train[b];
    return pa.query != pb.query ? pa.query < pb.query : pa.title < pb.title;
  });
  for (std::size_t k = 0; k < corpus.train_logits.size(); ++k) {
    std::vector<TeacherScoreRecord> records;
    records.reserve(order.size());
    for (std::size_t i : order) {
      const double z = corpus.train_logits[k][i];
      records.push_back({corpus.train[i].query, corpus.train[i].title, std::make_pair(z / 2, -z / 2),
                         std::nullopt, "synth" + std::to_string(k)});
    }
    WriteTeacherScoreFile(base + "teacher_" + std::to_string(k) + ".tsv",
                          {"synth" + std::to_string(k), ScoreKind::kLogits}, records);
  }
  std::ofstream out = OpenForWrite(base + "heldout.tsv", true);
  for (std::size_t i = 0; i < corpus.heldout.size(); ++i) {
    out << corpus.heldout[i].query << '\t' << corpus.heldout[i].title << '\t'
        << FormatDouble(SynthHeldoutLabel(corpus, i)) << '\n';
  }
  if (!out.flush()) throw IoError("write failed: " + base + "heldout.tsv");
}

}  // namespace tinyrel
