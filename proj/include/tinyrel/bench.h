// Copyright 2026 The tinyrel Authors
// SPDX-License-Identifier: Apache-2.0

// End-to-end scoring latency: tokenize -> embed -> forward over fixed-size
// batches, with warmup batches excluded from timing.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

#include "tinyrel/student.h"
#include "tinyrel/vocab.h"

namespace tinyrel {

struct BenchOptions {
  std::size_t batches = 100;
  std::size_t batch_size = 128;
  std::size_t warmup = 5;
  std::size_t threads = 1;
  TokenizerOptions tokenizer;
};

struct BenchReport {
  std::size_t batches = 0;
  std::size_t batch_size = 0;
  std::size_t total_examples = 0;  // batches * batch_size
  std::size_t warmup_batches = 0;
  std::size_t threads = 1;
  std::size_t corpus_pairs = 0;
  bool cycled = false;  // corpus smaller than batches * batch_size
  double tokenize_seconds = 0.0;
  double embed_seconds = 0.0;
  double forward_seconds = 0.0;
  double total_seconds = 0.0;
  double examples_per_second = 0.0;
  std::uint64_t checksum = 0;  // FNV-1a over the bits of every timed score
};

BenchReport RunBench(const StudentModel<float>& model, const Vocab& vocab,
                     std::span<const TextPair> corpus, const BenchOptions& options = {});

std::string FormatBenchReport(const BenchReport& report);
std::string BenchTsvHeader();
std::string BenchTsvRow(const BenchReport& report);

}  // namespace tinyrel
