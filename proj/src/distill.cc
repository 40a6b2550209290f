// Copyright 2026 The tinyrel Authors
// SPDX-License-Identifier: Apache-2.0

#include "tinyrel/distill.h"

#include <algorithm>
#include <cmath>

#include "tinyrel/errors.h"

namespace tinyrel {

double Soften(double z_pos, double z_neg, double temperature) {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw UsageError("temperature must be a positive finite number");
  }
  if (!std::isfinite(z_pos) || !std::isfinite(z_neg)) throw NumericError("non-finite teacher logit");
  const double x = (z_pos - z_neg) / temperature;
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double StackScores(std::span<const double> scores) {
  if (scores.empty()) throw UsageError("cannot stack an empty score list");
  double sum = 0.0;
  for (double s : scores) {
    if (!(s >= 0.0 && s <= 1.0)) throw UsageError("teacher score outside [0, 1]: " + FormatDouble(s));
    sum += s;
  }
  return sum / static_cast<double>(scores.size());
}

const char* BehaviorPolicyName(BehaviorPolicy policy) {
  switch (policy) {
    case BehaviorPolicy::kStrict: return "strict";
    case BehaviorPolicy::kRelaxed: return "relaxed";
    case BehaviorPolicy::kNone: return "none";
  }
  return "none";
}

std::optional<BehaviorPolicy> ParseBehaviorPolicy(std::string_view name) {
  if (name == "strict") return BehaviorPolicy::kStrict;
  if (name == "relaxed") return BehaviorPolicy::kRelaxed;
  if (name == "none") return BehaviorPolicy::kNone;
  return std::nullopt;
}

FilterDecision BehaviorFilter(const BehaviorRecord& r, BehaviorPolicy policy) {
  switch (policy) {
    case BehaviorPolicy::kStrict:
      if (r.orders >= 1) return {true, 1};
      if (r.displays >= 20 && r.clicks == 0) return {true, 0};
      return {false, std::nullopt};
    case BehaviorPolicy::kRelaxed:
      if (r.clicks >= 1) return {true, 1};
      if (r.skips >= 5) return {true, 0};
      return {false, std::nullopt};
    case BehaviorPolicy::kNone:
      return {true, std::nullopt};
  }
  return {false, std::nullopt};
}

double TeacherSoftLabel(const TeacherScoreRecord& record, double temperature) {
  if (record.logits.has_value() == record.probability.has_value()) {
    throw UsageError("teacher record must carry exactly one of logits or probability");
  }
  if (record.logits) return Soften(record.logits->first, record.logits->second, temperature);
  const double p = *record.probability;
  if (!(p >= 0.0 && p <= 1.0)) throw UsageError("teacher probability outside [0, 1]");
  return p;
}

const char* ProvenanceName(Provenance provenance) {
  return provenance == Provenance::kBehavioralPositive ? "behavioral_positive" : "distilled";
}

// ---------------------------------------------------------------------------
// File sources.

namespace {

std::string KeyText(const std::string& query, const std::string& title) {
  return "(" + query + ", " + title + ")";
}

std::vector<std::string_view> DataFields(const LineReader& reader, const std::string& line,
                                         std::size_t expected) {
  auto fields = SplitTabs(line);
  if (fields.size() != expected) {
    throw FormatError(reader.path(), reader.line_number(),
                      "expected " + std::to_string(expected) + " tab-separated fields, got " +
                          std::to_string(fields.size()));
  }
  return fields;
}

double NumberField(const LineReader& reader, std::string_view text, const char* what) {
  const auto v = ParseDouble(text);
  if (!v || !std::isfinite(*v)) {
    throw FormatError(reader.path(), reader.line_number(),
                      std::string("bad ") + what + " '" + std::string(text) + "'");
  }
  return *v;
}

std::uint64_t CountField(const LineReader& reader, std::string_view text, const char* what) {
  const auto v = ParseUint(text);
  if (!v) {
    throw FormatError(reader.path(), reader.line_number(),
                      std::string("bad ") + what + " '" + std::string(text) + "'");
  }
  return *v;
}

void ExpectHeader(LineReader& reader, std::string_view tag) {
  std::string line;
  if (!reader.Next(line) || !ParseHeader(line, tag)) {
    throw FormatError(reader.path(), 1, "expected '#" + std::string(tag) + " v1' header");
  }
}

std::string Location(const LineReader& reader) {
  return reader.path() + ":" + std::to_string(reader.line_number());
}

}  // namespace

TeacherScoreFile::TeacherScoreFile(const std::string& path) : reader_(path) {
  std::string line;
  const auto fields = reader_.Next(line) ? ParseHeader(line, "teacher-scores") : std::nullopt;
  if (!fields || !fields->contains("teacher") || !fields->contains("kind")) {
    throw FormatError(path, 1, "expected '#teacher-scores v1 teacher=<id> kind={logits|prob}'");
  }
  header_.teacher_id = fields->at("teacher");
  const std::string& kind = fields->at("kind");
  if (kind == "logits") {
    header_.kind = ScoreKind::kLogits;
  } else if (kind == "prob") {
    header_.kind = ScoreKind::kProb;
  } else {
    throw FormatError(path, 1, "unknown score kind '" + kind + "'");
  }
}

bool TeacherScoreFile::Next(TeacherScoreRecord& record) {
  std::string line;
  if (!reader_.Next(line)) return false;
  const bool logits = header_.kind == ScoreKind::kLogits;
  const auto f = DataFields(reader_, line, logits ? 4 : 3);
  record.query.assign(f[0]);
  record.title.assign(f[1]);
  record.teacher_id = header_.teacher_id;
  if (logits) {
    record.logits = {NumberField(reader_, f[2], "z_pos"), NumberField(reader_, f[3], "z_neg")};
    record.probability.reset();
  } else {
    const double p = NumberField(reader_, f[2], "probability");
    if (p < 0.0 || p > 1.0) throw FormatError(reader_.path(), reader_.line_number(), "probability outside [0, 1]");
    record.probability = p;
    record.logits.reset();
  }
  return true;
}

std::string TeacherScoreFile::Where() const { return Location(reader_); }

BehaviorFile::BehaviorFile(const std::string& path) : reader_(path) { ExpectHeader(reader_, "behavior"); }

bool BehaviorFile::Next(BehaviorRecord& r) {
  std::string line;
  if (!reader_.Next(line)) return false;
  const auto f = DataFields(reader_, line, 6);
  r.query.assign(f[0]);
  r.title.assign(f[1]);
  r.orders = CountField(reader_, f[2], "orders");
  r.displays = CountField(reader_, f[3], "displays");
  r.clicks = CountField(reader_, f[4], "clicks");
  r.skips = CountField(reader_, f[5], "skips");
  if (r.clicks > r.displays) throw FormatError(reader_.path(), reader_.line_number(), "clicks exceed displays");
  return true;
}

std::string BehaviorFile::Where() const { return Location(reader_); }

PositivesFile::PositivesFile(const std::string& path) : reader_(path) { ExpectHeader(reader_, "positives"); }

bool PositivesFile::Next(std::pair<std::string, std::string>& record) {
  std::string line;
  if (!reader_.Next(line)) return false;
  const auto f = DataFields(reader_, line, 2);
  record.first.assign(f[0]);
  record.second.assign(f[1]);
  return true;
}

std::string PositivesFile::Where() const { return Location(reader_); }

void WriteTeacherScoreFile(const std::string& path, const TeacherFileHeader& header,
                           std::span<const TeacherScoreRecord> records) {
  std::ofstream out = OpenForWrite(path, true);
  const bool logits = header.kind == ScoreKind::kLogits;
  out << "#teacher-scores v1 teacher=" << header.teacher_id << " kind=" << (logits ? "logits" : "prob")
      << '\n';
  for (const auto& r : records) {
    out << r.query << '\t' << r.title;
    if (logits) {
      if (!r.logits) throw UsageError("logits-kind file given a probability record");
      out << '\t' << FormatDouble(r.logits->first) << '\t' << FormatDouble(r.logits->second);
    } else {
      if (!r.probability) throw UsageError("prob-kind file given a logits record");
      out << '\t' << FormatDouble(*r.probability);
    }
    out << '\n';
  }
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

// ---------------------------------------------------------------------------
// Join.

namespace {

// Wraps a source and enforces strictly ascending keys.
template <typename Record, typename KeyFn>
class OrderedStream {
 public:
  OrderedStream(RecordSource<Record>* source, KeyFn key) : source_(source), key_(key) { Advance(); }

  bool valid() const { return valid_; }
  const Record& current() const { return current_; }
  std::pair<const std::string&, const std::string&> key() const { return key_(current_); }
  bool any() const { return any_; }

  void Advance() {
    if (!source_->Next(next_)) {
      valid_ = false;
      return;
    }
    const auto [q, t] = key_(next_);
    if (valid_ || any_) {
      const auto [pq, pt] = key_(current_);
      const int c = pq != q ? (pq < q ? -1 : 1) : (pt == t ? 0 : (pt < t ? -1 : 1));
      if (c == 0) {
        throw Error(ErrorKind::kFormat, source_->Where() + ": duplicate key " + KeyText(q, t));
      }
      if (c > 0) {
        throw Error(ErrorKind::kFormat, source_->Where() + ": key " + KeyText(q, t) +
                                            " out of (query, title) order");
      }
    }
    std::swap(current_, next_);
    valid_ = true;
    any_ = true;
  }

 private:
  RecordSource<Record>* source_;
  KeyFn key_;
  Record current_{};
  Record next_{};
  bool valid_ = false;
  bool any_ = false;
};

template <typename Record>
auto RecordKey() {
  return [](const Record& r) -> std::pair<const std::string&, const std::string&> {
    return {r.query, r.title};
  };
}

// Three-way compare of (query, title) keys.
int CompareKeys(const std::string& q1, const std::string& t1, const std::string& q2,
                const std::string& t2) {
  if (const int c = q1.compare(q2); c != 0) return c < 0 ? -1 : 1;
  if (const int c = t1.compare(t2); c != 0) return c < 0 ? -1 : 1;
  return 0;
}

}  // namespace

JoinReport BuildTransferSet(std::span<ScoreSource* const> teachers, BehaviorSource* behavior,
                            PairSource* positives, const TransferOptions& options,
                            const TransferSink& sink) {
  if (teachers.empty()) throw UsageError("at least one teacher score stream is required");
  if (!(options.temperature > 0.0)) throw UsageError("temperature must be positive");

  using ScoreStream = OrderedStream<TeacherScoreRecord, decltype(RecordKey<TeacherScoreRecord>())>;
  using BehaviorStream = OrderedStream<BehaviorRecord, decltype(RecordKey<BehaviorRecord>())>;
  std::vector<std::unique_ptr<ScoreStream>> streams;
  for (ScoreSource* source : teachers) {
    streams.push_back(std::make_unique<ScoreStream>(source, RecordKey<TeacherScoreRecord>()));
  }
  std::unique_ptr<BehaviorStream> behavior_stream;
  if (behavior) behavior_stream = std::make_unique<BehaviorStream>(behavior, RecordKey<BehaviorRecord>());

  JoinReport report;
  report.teachers = teachers.size();
  std::vector<double> scores(teachers.size());
  TransferExample example;
  while (true) {
    const ScoreStream* min = nullptr;
    for (const auto& s : streams) {
      if (!s->valid()) continue;
      if (!min || CompareKeys(s->current().query, s->current().title, min->current().query,
                              min->current().title) < 0) {
        min = s.get();
      }
    }
    if (!min) break;
    const std::string query = min->current().query;
    const std::string title = min->current().title;

    bool all = true;
    for (std::size_t k = 0; k < streams.size(); ++k) {
      const auto& s = *streams[k];
      if (s.valid() && CompareKeys(s.current().query, s.current().title, query, title) == 0) {
        scores[k] = TeacherSoftLabel(s.current(), options.temperature);
      } else {
        all = false;
      }
    }

    if (!all) {
      ++report.unmatched;
    } else {
      ++report.matched;
      bool keep = true;
      if (behavior_stream) {
        while (behavior_stream->valid() &&
               CompareKeys(behavior_stream->current().query, behavior_stream->current().title, query,
                           title) < 0) {
          behavior_stream->Advance();
        }
        keep = behavior_stream->valid() &&
               CompareKeys(behavior_stream->current().query, behavior_stream->current().title, query,
                           title) == 0 &&
               BehaviorFilter(behavior_stream->current(), options.policy).keep;
      }
      if (keep) {
        example.query = query;
        example.title = title;
        example.soft_label = StackScores(scores);
        example.provenance = Provenance::kDistilled;
        sink(example);
        ++report.distilled;
      } else {
        ++report.dropped;
      }
    }

    for (auto& s : streams) {
      if (s->valid() && CompareKeys(s->current().query, s->current().title, query, title) == 0) {
        s->Advance();
      }
    }
  }

  if (teachers.size() >= 2 && report.matched == 0) {
    std::size_t nonempty = 0;
    for (const auto& s : streams) nonempty += s->any() ? 1 : 0;
    if (nonempty > 0) throw Error(ErrorKind::kFormat, "teacher score streams share no (query, title) keys");
  }

  if (positives) {
    std::pair<std::string, std::string> pair;
    while (positives->Next(pair)) {
      example.query = pair.first;
      example.title = pair.second;
      example.soft_label = 1.0;
      example.provenance = Provenance::kBehavioralPositive;
      sink(example);
      ++report.positives;
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Transfer files.

TransferFileWriter::TransferFileWriter(const std::string& path, const TransferFileHeader& header)
    : path_(path), out_(OpenForWrite(path, true)) {
  out_ << "#transfer v1 T=" << FormatDouble(header.temperature) << " teachers=" << header.teachers
       << '\n';
}

void TransferFileWriter::Write(const TransferExample& e) {
  out_ << e.query << '\t' << e.title << '\t' << FormatDouble(e.soft_label) << '\t'
       << ProvenanceName(e.provenance) << '\n';
}

void TransferFileWriter::Close() {
  out_.flush();
  if (!out_) throw IoError("write failed: " + path_);
  out_.close();
}

std::vector<TransferExample> ReadTransferFile(const std::string& path, TransferFileHeader* header) {
  LineReader reader(path);
  std::string line;
  const auto fields = reader.Next(line) ? ParseHeader(line, "transfer") : std::nullopt;
  if (!fields || !fields->contains("T") || !fields->contains("teachers")) {
    throw FormatError(path, 1, "expected '#transfer v1 T=<temp> teachers=<k>'");
  }
  TransferFileHeader h;
  const auto t = ParseDouble(fields->at("T"));
  const auto k = ParseUint(fields->at("teachers"));
  if (!t || !k) throw FormatError(path, 1, "bad T or teachers field");
  h.temperature = *t;
  h.teachers = *k;
  if (header) *header = h;

  std::vector<TransferExample> out;
  while (reader.Next(line)) {
    const auto f = DataFields(reader, line, 4);
    TransferExample e;
    e.query.assign(f[0]);
    e.title.assign(f[1]);
    const auto label = ParseDouble(f[2]);
    if (!label || !(*label >= 0.0 && *label <= 1.0)) {
      throw FormatError(path, reader.line_number(), "soft label must be a number in [0, 1]");
    }
    e.soft_label = *label;
    if (f[3] == "distilled") {
      e.provenance = Provenance::kDistilled;
    } else if (f[3] == "behavioral_positive") {
      e.provenance = Provenance::kBehavioralPositive;
    } else {
      throw FormatError(path, reader.line_number(), "unknown provenance '" + std::string(f[3]) + "'");
    }
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace tinyrel
