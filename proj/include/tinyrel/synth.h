// Copyright 2026 The tinyrel Authors
// SPDX-License-Identifier: Apache-2.0

// Synthetic distillation fixtures: a random word inventory, random
// (query, title) pairs, and fixed random linear teachers over the pairs'
// bag-of-token features. Lets the whole pipeline run without real teachers.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "tinyrel/vocab.h"

namespace tinyrel {

struct SynthOptions {
  std::size_t words = 5000;     // word inventory (teacher feature count)
  std::size_t pairs = 10000;    // scored training pairs
  std::size_t heldout = 2000;   // held-out pairs, disjoint keys
  std::size_t teachers = 1;
  double teacher_noise = 0.3;   // per-teacher weight perturbation (std dev)
  double logit_scale = 3.0;
  double cjk_fraction = 0.2;    // share of the inventory that is single CJK characters
  std::size_t min_query_words = 1;
  std::size_t max_query_words = 4;
  std::size_t min_title_words = 3;
  std::size_t max_title_words = 10;
  std::uint64_t seed = 7;
};

// teacher logit z = scale * (sum_{w in query} u_w / sqrt(m_q)
//                           + sum_{w in title} v_w / sqrt(m_t)) + per-teacher noise,
// where m is the sentence's token-set size (2n+1 for n words).
class SyntheticTeacher {
 public:
  explicit SyntheticTeacher(const SynthOptions& options);

  const std::vector<std::string>& words() const { return words_; }
  std::size_t teachers() const { return query_weights_.size(); }

  // z for teacher k; the exported logits are (z/2, -z/2).
  double Logit(const TextPair& pair, std::size_t teacher) const;

 private:
  double Side(const std::string& text, const std::vector<double>& weights) const;

  SynthOptions options_;
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> word_index_;
  std::vector<std::vector<double>> query_weights_;
  std::vector<std::vector<double>> title_weights_;
};

struct SynthCorpus {
  std::vector<TextPair> train;
  std::vector<TextPair> heldout;
  std::vector<std::vector<double>> train_logits;    // [teacher][pair]
  std::vector<std::vector<double>> heldout_logits;  // [teacher][pair]
};

SynthCorpus GenerateSynthetic(const SynthOptions& options);

// Stacked T=1 teacher probability of held-out pair i.
double SynthHeldoutLabel(const SynthCorpus& corpus, std::size_t i);

// Writes corpus.tsv, teacher_<k>.tsv (sorted logits files), heldout.tsv
// (query, title, stacked teacher probability) into `dir`.
void WriteSyntheticFixture(const SynthCorpus& corpus, const std::string& dir);

}  // namespace tinyrel
