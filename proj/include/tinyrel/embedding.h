// Copyright 2026 The tinyrel Authors
// SPDX-License-Identifier: Apache-2.0

// Sentence embeddings: e_s = sum_i e_{w_i} / sqrt(n) over the in-vocab tokens
// of the sentence (multiset; OOV tokens dropped and not counted in n).

#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tinyrel/errors.h"
#include "tinyrel/random.h"
#include "tinyrel/tokenizer.h"
#include "tinyrel/vocab.h"

namespace tinyrel {

template <typename T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <typename T>
using Vector = Eigen::Matrix<T, Eigen::Dynamic, 1>;

// One column of `weights` per vocab id.
template <typename T>
struct EmbeddingTable {
  Matrix<T> weights;  // dim x vocab_size

  std::size_t dim() const { return static_cast<std::size_t>(weights.rows()); }
  std::size_t size() const { return static_cast<std::size_t>(weights.cols()); }
};

template <typename T>
struct SentenceEmbedding {
  Vector<T> vector;
  std::size_t retained_count = 0;
};

// Writes the pooled embedding of `ids` to out[0..dim). Sums in id order, then
// scales by 1/sqrt(n). Returns n.
template <typename T>
std::size_t PoolInto(const EmbeddingTable<T>& table, std::span<const std::uint32_t> ids, T* out) {
  const Eigen::Index dim = table.weights.rows();
  Eigen::Map<Vector<T>> acc(out, dim);
  acc.setZero();
  for (std::uint32_t id : ids) acc += table.weights.col(id);
  if (!ids.empty()) acc *= T(1) / std::sqrt(static_cast<T>(ids.size()));
  return ids.size();
}

template <typename T>
SentenceEmbedding<T> EmbedIds(std::span<const std::uint32_t> ids, const EmbeddingTable<T>& table) {
  SentenceEmbedding<T> e;
  e.vector.resize(table.weights.rows());
  for (std::uint32_t id : ids) {
    if (id >= table.size()) throw UsageError("embedding: id " + std::to_string(id) + " out of range");
  }
  e.retained_count = PoolInto(table, ids, e.vector.data());
  return e;
}

template <typename T>
SentenceEmbedding<T> EmbedSentence(const TokenSequence& seq, const Vocab& vocab,
                                   const EmbeddingTable<T>& table) {
  if (table.size() != vocab.size()) {
    throw Error(ErrorKind::kShape, "embedding table has " + std::to_string(table.size()) +
                                       " rows but vocab has " + std::to_string(vocab.size()));
  }
  const std::vector<std::uint32_t> ids = vocab.Encode(seq);
  return EmbedIds<T>(ids, table);
}

// Uniform in [-0.05, 0.05] per entry, drawn column by column.
template <typename T>
void InitEmbeddingTable(EmbeddingTable<T>& table, std::size_t dim, std::size_t vocab_size,
                        Rng& rng) {
  table.weights.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(vocab_size));
  T* data = table.weights.data();
  for (std::size_t i = 0; i < dim * vocab_size; ++i) {
    data[i] = static_cast<T>(rng.Uniform(-0.05, 0.05));
  }
}

enum class DistanceMetric { kCosine, kEuclidean, kManhattan };

// Cosine distance is 1 - cos(a, b); throws Error(kNumeric) for a zero vector.
template <typename T>
double EmbeddingDistance(const Vector<T>& a, const Vector<T>& b, DistanceMetric metric) {
  if (a.size() != b.size()) throw UsageError("embedding distance: dimension mismatch");
  const auto ad = a.template cast<double>();
  const auto bd = b.template cast<double>();
  switch (metric) {
    case DistanceMetric::kCosine: {
      const double na = ad.norm();
      const double nb = bd.norm();
      if (na == 0.0 || nb == 0.0) throw NumericError("cosine distance undefined for a zero vector");
      return std::max(0.0, 1.0 - ad.dot(bd) / (na * nb));
    }
    case DistanceMetric::kEuclidean:
      return (ad - bd).norm();
    case DistanceMetric::kManhattan:
      return (ad - bd).cwiseAbs().sum();
  }
  return 0.0;
}

// Tab-separated: header "text\te0..e{dim-1}", one row per text. Every text
// must retain at least one in-vocab token.
void ExportEmbeddingHeatmap(std::span<const std::string> texts, const Vocab& vocab,
                            const EmbeddingTable<float>& table, const std::string& path,
                            const TokenizerOptions& options = {});

}  // namespace tinyrel
