// Copyright 2026 The tinyrel Authors
// SPDX-License-Identifier: Apache-2.0

#include "tinyrel/embedding.h"

#include <algorithm>

#include "tinyrel/tsv.h"

namespace tinyrel {

void ExportEmbeddingHeatmap(std::span<const std::string> texts, const Vocab& vocab,
                            const EmbeddingTable<float>& table, const std::string& path,
                            const TokenizerOptions& options) {
  std::vector<SentenceEmbedding<float>> rows;
  rows.reserve(texts.size());
  for (const std::string& text : texts) {
    rows.push_back(EmbedSentence(Tokenize(text, options), vocab, table));
    if (rows.back().retained_count == 0) {
      throw UsageError("heatmap: text has no in-vocab tokens: '" + text + "'");
    }
  }
  std::ofstream out = OpenForWrite(path, true);
  out << "text";
  for (std::size_t d = 0; d < table.dim(); ++d) out << "\te" << d;
  out << '\n';
  for (std::size_t i = 0; i < texts.size(); ++i) {
    std::string text = texts[i];
    std::replace_if(text.begin(), text.end(), [](char c) { return c == '\t' || c == '\n' || c == '\r'; }, ' ');
    out << text;
    for (Eigen::Index d = 0; d < rows[i].vector.size(); ++d) {
      out << '\t' << FormatFloat(rows[i].vector[d]);
    }
    out << '\n';
  }
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace tinyrel
