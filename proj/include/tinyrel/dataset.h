// Copyright 2026 The tinyrel Authors
// SPDX-License-Identifier: Apache-2.0

// Text-pair file readers and vocab encoding used by the CLI and bindings.

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tinyrel/distill.h"
#include "tinyrel/student.h"
#include "tinyrel/vocab.h"

namespace tinyrel {

// Corpus TSV: first two columns are query and title; '#' lines skipped.
// Lines with fewer than two columns are counted in `skipped`.
std::vector<TextPair> ReadPairs(const std::string& path, std::size_t* skipped = nullptr);

struct LabeledPair {
  TextPair pair;
  double label = 0.0;
};

// query<TAB>title<TAB>label with label in [0, 1]; '#' lines skipped.
// Malformed lines are a FormatError naming the line.
std::vector<LabeledPair> ReadLabeledPairs(const std::string& path);

EncodedPair EncodePair(const TextPair& pair, const Vocab& vocab,
                       const TokenizerOptions& options = {});

std::vector<EncodedPair> EncodePairs(std::span<const TextPair> pairs, const Vocab& vocab,
                                     const TokenizerOptions& options = {});

std::vector<TrainingExample> EncodeTransferSet(std::span<const TransferExample> examples,
                                               const Vocab& vocab,
                                               const TokenizerOptions& options = {});

}  // namespace tinyrel
