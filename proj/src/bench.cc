// Copyright 2026 The tinyrel Authors
// SPDX-License-Identifier: Apache-2.0

#include "tinyrel/bench.h"

#include <algorithm>
#include <bit>
#include <chrono>
#include <sstream>
#include <thread>
#include <vector>

#include "tinyrel/errors.h"
#include "tinyrel/tsv.h"

namespace tinyrel {
namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::duration d) { return std::chrono::duration<double>(d).count(); }

// Runs fn(begin, end) over [0, n) split into `threads` contiguous slices.
template <typename Fn>
void ParallelSlices(std::size_t n, std::size_t threads, Fn&& fn) {
  if (threads <= 1 || n < 2) {
    fn(std::size_t{0}, n);
    return;
  }
  const std::size_t parts = std::min(threads, n);
  std::vector<std::jthread> workers;
  workers.reserve(parts - 1);
  for (std::size_t p = 1; p < parts; ++p) {
    workers.emplace_back([&fn, n, parts, p] { fn(n * p / parts, n * (p + 1) / parts); });
  }
  fn(0, n / parts);
}

}  // namespace

BenchReport RunBench(const StudentModel<float>& model, const Vocab& vocab,
                     std::span<const TextPair> corpus, const BenchOptions& options) {
  if (corpus.empty()) throw UsageError("benchmark corpus is empty");
  if (options.batches == 0 || options.batch_size == 0) throw UsageError("batches and batch_size must be positive");
  if (model.table.size() != vocab.size()) throw Error(ErrorKind::kShape, "model table does not match vocab");

  const std::size_t dim = model.config.embedding_dim;
  const std::size_t bs = options.batch_size;
  const std::size_t threads = std::max<std::size_t>(1, options.threads);
  std::vector<EncodedPair> encoded(bs);
  std::vector<float> query(dim * bs), title(dim * bs);
  std::vector<float> logits(bs);
  std::vector<double> scores(bs);

  BenchReport report;
  report.batches = options.batches;
  report.batch_size = bs;
  report.total_examples = options.batches * bs;
  report.warmup_batches = options.warmup;
  report.threads = threads;
  report.corpus_pairs = corpus.size();
  report.cycled = corpus.size() < report.total_examples;

  std::uint64_t checksum = 0xcbf29ce484222325ULL;
  Clock::duration tokenize{}, embed{}, forward{}, total{};

  const std::size_t rounds = options.warmup + options.batches;
  for (std::size_t round = 0; round < rounds; ++round) {
    const bool timed = round >= options.warmup;
    const std::size_t batch = timed ? round - options.warmup : round;
    const std::size_t offset = batch * bs;

    const auto t0 = Clock::now();
    ParallelSlices(bs, threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        const TextPair& pair = corpus[(offset + i) % corpus.size()];
        encoded[i].query = vocab.Encode(pair.query, options.tokenizer);
        encoded[i].title = vocab.Encode(pair.title, options.tokenizer);
      }
    });
    const auto t1 = Clock::now();
    ParallelSlices(bs, threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        PoolInto(model.table, encoded[i].query, query.data() + i * dim);
        PoolInto(model.table, encoded[i].title, title.data() + i * dim);
      }
    });
    const auto t2 = Clock::now();
    ParallelSlices(bs, threads, [&](std::size_t begin, std::size_t end) {
      const auto part = LogitsFromPooled<float>(
          model, std::span<const float>(query.data() + begin * dim, (end - begin) * dim),
          std::span<const float>(title.data() + begin * dim, (end - begin) * dim));
      for (std::size_t i = begin; i < end; ++i) scores[i] = Sigmoid(part[i - begin]);
    });
    const auto t3 = Clock::now();

    if (timed) {
      tokenize += t1 - t0;
      embed += t2 - t1;
      forward += t3 - t2;
      total += t3 - t0;
      for (double s : scores) {
        std::uint64_t bits = std::bit_cast<std::uint64_t>(s);
        for (int k = 0; k < 8; ++k) {
          checksum ^= (bits >> (8 * k)) & 0xFF;
          checksum *= 0x100000001b3ULL;
        }
      }
    }
  }

  report.tokenize_seconds = Seconds(tokenize);
  report.embed_seconds = Seconds(embed);
  report.forward_seconds = Seconds(forward);
  report.total_seconds = Seconds(total);
  report.examples_per_second =
      report.total_seconds > 0 ? static_cast<double>(report.total_examples) / report.total_seconds : 0.0;
  report.checksum = checksum;
  return report;
}

std::string FormatBenchReport(const BenchReport& r) {
  std::ostringstream out;
  out << "batches=" << r.batches << '\n'
      << "batch_size=" << r.batch_size << '\n'
      << "total_examples=" << r.total_examples << '\n'
      << "warmup_batches=" << r.warmup_batches << '\n'
      << "threads=" << r.threads << '\n'
      << "corpus_pairs=" << r.corpus_pairs << '\n'
      << "cycled=" << (r.cycled ? 1 : 0) << '\n'
      << "tokenize_seconds=" << FormatDouble(r.tokenize_seconds) << '\n'
      << "embed_seconds=" << FormatDouble(r.embed_seconds) << '\n'
      << "forward_seconds=" << FormatDouble(r.forward_seconds) << '\n'
      << "total_seconds=" << FormatDouble(r.total_seconds) << '\n'
      << "examples_per_second=" << FormatDouble(r.examples_per_second) << '\n'
      << "checksum=" << std::hex << r.checksum << std::dec << '\n';
  return out.str();
}

std::string BenchTsvHeader() {
  return "batches\tbatch_size\ttotal_examples\tthreads\ttokenize_s\tembed_s\tforward_s\ttotal_s\t"
         "examples_per_s\tchecksum";
}

std::string BenchTsvRow(const BenchReport& r) {
  std::ostringstream out;
  out << r.batches << '\t' << r.batch_size << '\t' << r.total_examples << '\t' << r.threads << '\t'
      << FormatDouble(r.tokenize_seconds) << '\t' << FormatDouble(r.embed_seconds) << '\t'
      << FormatDouble(r.forward_seconds) << '\t' << FormatDouble(r.total_seconds) << '\t'
      << FormatDouble(r.examples_per_second) << '\t' << std::hex << r.checksum;
  return out.str();
}

}  // namespace tinyrel
