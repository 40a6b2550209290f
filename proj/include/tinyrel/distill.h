// Copyright 2026 The tinyrel Authors
// SPDX-License-Identifier: Apache-2.0

// Teacher label processing: temperature softening, teacher stacking,
// behavioral filtering and the streaming (query, title) join that produces
// transfer sets.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tinyrel/tsv.h"

namespace tinyrel {

// Positive-class probability of the two-way softmax at temperature T,
// i.e. sigmoid((z_pos - z_neg) / T). Throws Error(kUsage) if T <= 0 and
// Error(kNumeric) for non-finite logits.
double Soften(double z_pos, double z_neg, double temperature);

// Arithmetic mean of K >= 1 teacher scores in [0, 1].
double StackScores(std::span<const double> scores);

enum class BehaviorPolicy { kStrict, kRelaxed, kNone };

const char* BehaviorPolicyName(BehaviorPolicy policy);
std::optional<BehaviorPolicy> ParseBehaviorPolicy(std::string_view name);

struct BehaviorRecord {
  std::string query;
  std::string title;
  std::uint64_t orders = 0;
  std::uint64_t displays = 0;
  std::uint64_t clicks = 0;
  std::uint64_t skips = 0;
};

struct FilterDecision {
  bool keep = false;
  std::optional<int> hint;  // diagnostic hard label only

  bool operator==(const FilterDecision&) const = default;
};

// strict: orders >= 1 (hint 1) or displays >= 20 with no clicks (hint 0).
// relaxed: clicks >= 1 (hint 1) or skips >= 5 (hint 0).
// none: keep everything, no hint.
FilterDecision BehaviorFilter(const BehaviorRecord& record, BehaviorPolicy policy);

enum class ScoreKind { kLogits, kProb };

struct TeacherScoreRecord {
  std::string query;
  std::string title;
  std::optional<std::pair<double, double>> logits;  // (z_pos, z_neg)
  std::optional<double> probability;
  std::string teacher_id;
};

// Softened logits, or the probability as given (temperature not applied).
double TeacherSoftLabel(const TeacherScoreRecord& record, double temperature);

enum class Provenance { kDistilled, kBehavioralPositive };

const char* ProvenanceName(Provenance provenance);

struct TransferExample {
  std::string query;
  std::string title;
  double soft_label = 0.0;
  Provenance provenance = Provenance::kDistilled;

  bool operator==(const TransferExample&) const = default;
};

struct JoinReport {
  std::size_t teachers = 0;
  std::size_t matched = 0;    // keys present in every teacher stream
  std::size_t unmatched = 0;  // keys missing from at least one teacher stream
  std::size_t dropped = 0;    // matched keys removed by the behavior filter
  std::size_t distilled = 0;  // emitted distilled examples
  std::size_t positives = 0;  // appended behavioral positives
};

// Pull-based record streams. Each source must yield keys in strictly
// ascending (query, title) byte order; the join enforces this.
template <typename Record>
class RecordSource {
 public:
  virtual ~RecordSource() = default;
  virtual bool Next(Record& record) = 0;
  // Location of the most recent record, for diagnostics.
  virtual std::string Where() const = 0;
};

template <typename Record>
class VectorSource : public RecordSource<Record> {
 public:
  explicit VectorSource(std::vector<Record> records, std::string name = "memory")
      : records_(std::move(records)), name_(std::move(name)) {}
  bool Next(Record& record) override {
    if (pos_ >= records_.size()) return false;
    record = records_[pos_++];
    return true;
  }
  std::string Where() const override { return name_ + "[" + std::to_string(pos_) + "]"; }

 private:
  std::vector<Record> records_;
  std::string name_;
  std::size_t pos_ = 0;
};

using ScoreSource = RecordSource<TeacherScoreRecord>;
using BehaviorSource = RecordSource<BehaviorRecord>;
using PairSource = RecordSource<std::pair<std::string, std::string>>;

struct TeacherFileHeader {
  std::string teacher_id;
  ScoreKind kind = ScoreKind::kLogits;
};

// "#teacher-scores v1 teacher=<id> kind={logits|prob}", then
// query<TAB>title<TAB>z_pos<TAB>z_neg (or query<TAB>title<TAB>prob).
class TeacherScoreFile : public ScoreSource {
 public:
  explicit TeacherScoreFile(const std::string& path);
  bool Next(TeacherScoreRecord& record) override;
  std::string Where() const override;
  const TeacherFileHeader& header() const { return header_; }

 private:
  LineReader reader_;
  TeacherFileHeader header_;
};

// "#behavior v1", then query, title, orders, displays, clicks, skips.
class BehaviorFile : public BehaviorSource {
 public:
  explicit BehaviorFile(const std::string& path);
  bool Next(BehaviorRecord& record) override;
  std::string Where() const override;

 private:
  LineReader reader_;
};

// "#positives v1", then query<TAB>title.
class PositivesFile : public PairSource {
 public:
  explicit PositivesFile(const std::string& path);
  bool Next(std::pair<std::string, std::string>& record) override;
  std::string Where() const override;

 private:
  LineReader reader_;
};

void WriteTeacherScoreFile(const std::string& path, const TeacherFileHeader& header,
                           std::span<const TeacherScoreRecord> records);

struct TransferOptions {
  double temperature = 1.0;
  BehaviorPolicy policy = BehaviorPolicy::kNone;
};

using TransferSink = std::function<void(const TransferExample&)>;

// Sort-merge join over the teacher streams. For each key present in every
// stream: soften each teacher's score, average them, apply the behavior
// filter when `behavior` is given (keys without a behavior record are
// dropped), and emit a distilled example. Then append every pair of
// `positives` with soft label 1.0.
JoinReport BuildTransferSet(std::span<ScoreSource* const> teachers, BehaviorSource* behavior,
                            PairSource* positives, const TransferOptions& options,
                            const TransferSink& sink);

struct TransferFileHeader {
  double temperature = 1.0;
  std::size_t teachers = 0;
};

// "#transfer v1 T=<temp> teachers=<k>", then
// query<TAB>title<TAB>soft_label<TAB>provenance.
class TransferFileWriter {
 public:
  TransferFileWriter(const std::string& path, const TransferFileHeader& header);
  void Write(const TransferExample& example);
  void Close();

 private:
  std::string path_;
  std::ofstream out_;
};

std::vector<TransferExample> ReadTransferFile(const std::string& path,
                                              TransferFileHeader* header = nullptr);

}  // namespace tinyrel
