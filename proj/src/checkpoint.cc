// Copyright 2026 The tinyrel Authors
// SPDX-License-Identifier: Apache-2.0

#include "tinyrel/checkpoint.h"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "tinyrel/errors.h"
#include "tinyrel/tsv.h"

namespace tinyrel {
namespace {

class Writer {
 public:
  void U8(std::uint8_t v) { bytes_.push_back(static_cast<char>(v)); }
  void U32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) U8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void U64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) U8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void F32(float v) { U32(std::bit_cast<std::uint32_t>(v)); }
  void F64(double v) { U64(std::bit_cast<std::uint64_t>(v)); }
  void Bytes(std::string_view s) { bytes_.append(s); }
  const std::string& bytes() const { return bytes_; }

 private:
  std::string bytes_;
};

class Reader {
 public:
  Reader(std::string bytes, std::string path) : bytes_(std::move(bytes)), path_(std::move(path)) {}

  std::uint8_t U8() {
    Need(1, "u8");
    return static_cast<std::uint8_t>(bytes_[pos_++]);
  }
  std::uint32_t U32() {
    Need(4, "u32");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{static_cast<std::uint8_t>(bytes_[pos_++])} << (8 * i);
    return v;
  }
  std::uint64_t U64() {
    Need(8, "u64");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t{static_cast<std::uint8_t>(bytes_[pos_++])} << (8 * i);
    return v;
  }
  float F32() { return std::bit_cast<float>(U32()); }
  double F64() { return std::bit_cast<double>(U64()); }
  std::string Bytes(std::size_t n) {
    Need(n, "bytes");
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool AtEnd() const { return pos_ == bytes_.size(); }
  std::size_t remaining() const { return bytes_.size() - pos_; }
  std::size_t pos() const { return pos_; }

  [[noreturn]] void Fail(ErrorKind kind, const std::string& what) const {
    throw Error(kind, path_ + ": " + what + " (offset " + std::to_string(pos_) + ")");
  }

 private:
  void Need(std::size_t n, const char* what) const {
    if (bytes_.size() - pos_ < n) {
      Fail(ErrorKind::kTruncated, std::string("checkpoint truncated while reading ") + what);
    }
  }

  std::string bytes_;
  std::string path_;
  std::size_t pos_ = 0;
};

std::uint32_t Narrow(std::size_t v, const char* what) {
  if (v > UINT32_MAX) throw UsageError(std::string("checkpoint: ") + what + " exceeds 32 bits");
  return static_cast<std::uint32_t>(v);
}

}  // namespace

void SaveCheckpoint(const StudentModel<float>& model, const Vocab& vocab, const std::string& path) {
  ValidateShapes(model);
  const StudentConfig& c = model.config;
  if (model.table.size() != vocab.size()) {
    throw Error(ErrorKind::kShape, "embedding table rows != vocab size");
  }
  Writer w;
  w.Bytes(std::string_view(kCheckpointMagic, 6));
  w.U8(static_cast<std::uint8_t>(c.topology));
  w.U8(0);
  w.U32(Narrow(c.embedding_dim, "embedding_dim"));
  w.U32(Narrow(vocab.size(), "vocab size"));
  w.U32(Narrow(c.hidden_sizes.size(), "hidden count"));
  for (std::size_t h : c.hidden_sizes) w.U32(Narrow(h, "hidden size"));
  w.F64(c.learning_rate);
  w.U32(Narrow(c.epochs, "epochs"));
  w.U32(Narrow(c.batch_size, "batch_size"));
  w.U64(c.seed);
  w.F64(c.adagrad_epsilon);

  const auto blocks = DenseParameters(model);
  w.U32(Narrow(blocks.size() + 1, "tensor count"));
  w.U32(Narrow(model.table.dim(), "dim"));
  w.U32(Narrow(model.table.size(), "rows"));
  for (const auto& b : blocks) {
    w.U32(Narrow(static_cast<std::size_t>(b.rows), "rows"));
    w.U32(Narrow(static_cast<std::size_t>(b.cols), "cols"));
  }

  for (std::size_t i = 0; i < vocab.size(); ++i) {
    const std::string& tok = vocab.tokens()[i];
    w.U64(vocab.counts()[i]);
    w.U32(Narrow(tok.size(), "token length"));
    w.Bytes(tok);
  }

  const float* table = model.table.weights.data();
  for (Eigen::Index i = 0; i < model.table.weights.size(); ++i) w.F32(table[i]);
  for (const auto& b : blocks) {
    for (Eigen::Index i = 0; i < b.size(); ++i) w.F32(b.data[i]);
  }

  std::ofstream out = OpenForWrite(path, true);
  out.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

Checkpoint LoadCheckpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint: " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  Reader r(std::move(bytes), path);

  if (r.remaining() < 6) r.Fail(ErrorKind::kTruncated, "checkpoint shorter than its magic");
  const std::string magic = r.Bytes(6);
  if (magic.compare(0, 5, kCheckpointMagic, 5) != 0) r.Fail(ErrorKind::kFormat, "not a checkpoint (bad magic)");
  if (magic[5] != kCheckpointMagic[5]) {
    r.Fail(ErrorKind::kVersion, std::string("unsupported checkpoint version '") + magic[5] +
                                    "', expected '" + kCheckpointMagic[5] + "'");
  }

  StudentConfig c;
  const std::uint8_t tag = r.U8();
  if (tag > 1) r.Fail(ErrorKind::kFormat, "unknown topology tag " + std::to_string(tag));
  c.topology = static_cast<Topology>(tag);
  if (r.U8() != 0) r.Fail(ErrorKind::kFormat, "reserved byte is nonzero");
  c.embedding_dim = r.U32();
  const std::size_t vocab_size = r.U32();
  const std::uint32_t hidden_count = r.U32();
  if (hidden_count > r.remaining() / 4) r.Fail(ErrorKind::kTruncated, "hidden size list truncated");
  c.hidden_sizes.resize(hidden_count);
  for (auto& h : c.hidden_sizes) h = r.U32();
  c.learning_rate = r.F64();
  c.epochs = r.U32();
  c.batch_size = r.U32();
  c.seed = r.U64();
  c.adagrad_epsilon = r.F64();
  try {
    c.Validate();
  } catch (const Error& e) {
    r.Fail(ErrorKind::kFormat, std::string("invalid config: ") + e.what());
  }

  std::vector<std::pair<std::size_t, std::size_t>> expected = DenseShapes(c);
  expected.insert(expected.begin(), {c.embedding_dim, vocab_size});
  const std::uint32_t tensor_count = r.U32();
  if (tensor_count > r.remaining() / 8) r.Fail(ErrorKind::kTruncated, "shape table truncated");
  std::vector<std::pair<std::size_t, std::size_t>> shapes(tensor_count);
  for (auto& [rows, cols] : shapes) {
    rows = r.U32();
    cols = r.U32();
  }
  if (shapes != expected) {
    std::string detail = "shape table (" + std::to_string(shapes.size()) +
                         " tensors) disagrees with header config " + TopologyName(c.topology) +
                         " hidden=[";
    for (std::size_t i = 0; i < c.hidden_sizes.size(); ++i) {
      detail += (i ? "," : "") + std::to_string(c.hidden_sizes[i]);
    }
    r.Fail(ErrorKind::kShape, detail + "]");
  }

  // Each vocab entry takes at least 12 bytes.
  if (vocab_size > r.remaining() / 12) r.Fail(ErrorKind::kTruncated, "vocab section truncated");
  std::vector<std::string> tokens;
  std::vector<std::uint64_t> counts;
  tokens.reserve(vocab_size);
  counts.reserve(vocab_size);
  for (std::size_t i = 0; i < vocab_size; ++i) {
    counts.push_back(r.U64());
    const std::uint32_t len = r.U32();
    tokens.push_back(r.Bytes(len));
  }

  Checkpoint ckpt;
  try {
    ckpt.vocab = Vocab::FromOrdered(std::move(tokens), std::move(counts));
  } catch (const Error& e) {
    r.Fail(ErrorKind::kFormat, std::string("bad vocab section: ") + e.what());
  }

  std::size_t payload = 0;
  for (const auto& [rows, cols] : expected) {
    const std::size_t left = r.remaining() / 4 - std::min(payload, r.remaining() / 4);
    if (cols != 0 && rows > left / cols) r.Fail(ErrorKind::kTruncated, "parameter payload truncated");
    payload += rows * cols;
  }
  if (r.remaining() < payload * 4) r.Fail(ErrorKind::kTruncated, "parameter payload truncated");
  if (r.remaining() > payload * 4) r.Fail(ErrorKind::kFormat, "trailing bytes after payload");

  // Build a zero model of the right shape, then fill it in canonical order.
  StudentModel<float>& m = ckpt.model;
  m.config = c;
  m.table.weights.resize(static_cast<Eigen::Index>(c.embedding_dim), static_cast<Eigen::Index>(vocab_size));
  const auto make_stack = [&](std::vector<DenseLayer<float>>& layers, std::size_t in, bool with_output) {
    for (std::size_t i = 0; i < c.hidden_sizes.size(); ++i) {
      const bool linear = !with_output && i + 1 == c.hidden_sizes.size();
      layers.push_back({Matrix<float>(c.hidden_sizes[i], in), Vector<float>(c.hidden_sizes[i]), !linear});
      in = c.hidden_sizes[i];
    }
    if (with_output) layers.push_back({Matrix<float>(1, in), Vector<float>(1), false});
  };
  if (c.topology == Topology::kFullyConnected) {
    make_stack(m.fc_layers, 2 * c.embedding_dim, true);
  } else {
    make_stack(m.query_tower, c.embedding_dim, false);
    make_stack(m.title_tower, c.embedding_dim, false);
  }
  float* table = m.table.weights.data();
  for (Eigen::Index i = 0; i < m.table.weights.size(); ++i) table[i] = r.F32();
  for (auto& b : DenseParameters(m)) {
    for (Eigen::Index i = 0; i < b.size(); ++i) b.data[i] = r.F32();
  }
  ValidateShapes(m);
  return ckpt;
}

}  // namespace tinyrel
