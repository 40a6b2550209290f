// Copyright 2026 The tinyrel Authors
// SPDX-License-Identifier: Apache-2.0

#include "tinyrel/student.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <unordered_map>

#include "tinyrel/errors.h"
#include "tinyrel/random.h"

namespace tinyrel {

const char* TopologyName(Topology topology) {
  return topology == Topology::kDeepDot ? "deep_dot" : "fully_connected";
}

std::optional<Topology> ParseTopology(std::string_view name) {
  if (name == "fully_connected" || name == "fc") return Topology::kFullyConnected;
  if (name == "deep_dot" || name == "dd") return Topology::kDeepDot;
  return std::nullopt;
}

void StudentConfig::Validate() const {
  if (hidden_sizes.empty()) throw UsageError("hidden_sizes must be nonempty");
  for (std::size_t h : hidden_sizes) {
    if (h == 0) throw UsageError("hidden sizes must be positive");
  }
  if (embedding_dim == 0) throw UsageError("embedding_dim must be positive");
  if (epochs == 0) throw UsageError("epochs must be positive");
  if (batch_size == 0) throw UsageError("batch_size must be positive");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw UsageError("learning_rate must be finite and >= 0");
  }
  if (!(adagrad_epsilon > 0.0)) throw UsageError("adagrad epsilon must be > 0");
}

std::vector<std::pair<std::size_t, std::size_t>> DenseShapes(const StudentConfig& config) {
  std::vector<std::pair<std::size_t, std::size_t>> shapes;
  const auto stack = [&](std::size_t in, bool with_output) {
    for (std::size_t h : config.hidden_sizes) {
      shapes.emplace_back(h, in);
      shapes.emplace_back(h, 1);
      in = h;
    }
    if (with_output) {
      shapes.emplace_back(1, in);
      shapes.emplace_back(1, 1);
    }
  };
  if (config.topology == Topology::kFullyConnected) {
    stack(2 * config.embedding_dim, true);
  } else {
    stack(config.embedding_dim, false);
    stack(config.embedding_dim, false);
  }
  return shapes;
}

namespace {

template <typename T>
using Stack = std::vector<DenseLayer<T>>;

template <typename T, typename Model>
auto CollectBlocks(Model& model) {
  std::vector<ParamBlock<T>> blocks;
  const auto add_stack = [&](auto& layers, const char* prefix) {
    for (std::size_t i = 0; i < layers.size(); ++i) {
      auto& layer = layers[i];
      const std::string base = std::string(prefix) + "." + std::to_string(i);
      blocks.push_back({base + ".weight", layer.weight.data(), layer.weight.rows(),
                        layer.weight.cols()});
      blocks.push_back({base + ".bias", layer.bias.data(), layer.bias.rows(), 1});
    }
  };
  if (model.config.topology == Topology::kFullyConnected) {
    add_stack(model.fc_layers, "fc");
  } else {
    add_stack(model.query_tower, "query");
    add_stack(model.title_tower, "title");
  }
  return blocks;
}

template <typename T>
void InitStack(Stack<T>& layers, std::size_t in, const std::vector<std::size_t>& hidden,
               bool with_output, Rng& rng) {
  const auto add = [&](std::size_t out, std::size_t fan_in, bool relu) {
    DenseLayer<T> layer;
    layer.relu = relu;
    layer.weight.resize(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(fan_in));
    layer.bias = Vector<T>::Zero(static_cast<Eigen::Index>(out));
    const double limit = relu ? std::sqrt(6.0 / static_cast<double>(fan_in))
                              : std::sqrt(6.0 / static_cast<double>(fan_in + out));
    T* w = layer.weight.data();
    for (Eigen::Index i = 0; i < layer.weight.size(); ++i) {
      w[i] = static_cast<T>(rng.Uniform(-limit, limit));
    }
    layers.push_back(std::move(layer));
  };
  for (std::size_t i = 0; i < hidden.size(); ++i) {
    const bool last_of_tower = !with_output && i + 1 == hidden.size();
    add(hidden[i], in, !last_of_tower);
    in = hidden[i];
  }
  if (with_output) add(1, in, false);
}

template <typename T>
void CheckStack(const Stack<T>& layers, std::size_t in, const StudentConfig& config,
                bool with_output, const char* name) {
  const std::size_t expected = config.hidden_sizes.size() + (with_output ? 1 : 0);
  const auto fail = [&](const std::string& what) {
    throw Error(ErrorKind::kShape, std::string(name) + ": " + what);
  };
  if (layers.size() != expected) {
    fail("expected " + std::to_string(expected) + " layers, got " + std::to_string(layers.size()));
  }
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const std::size_t out = i < config.hidden_sizes.size() ? config.hidden_sizes[i] : 1;
    const auto& layer = layers[i];
    if (static_cast<std::size_t>(layer.weight.rows()) != out ||
        static_cast<std::size_t>(layer.weight.cols()) != in ||
        static_cast<std::size_t>(layer.bias.size()) != out) {
      fail("layer " + std::to_string(i) + " has shape " + std::to_string(layer.weight.rows()) +
           "x" + std::to_string(layer.weight.cols()) + ", expected " + std::to_string(out) + "x" +
           std::to_string(in));
    }
    in = out;
  }
}

// ---------------------------------------------------------------------------
// Fixed-order inference kernel.
//
// out(:, b) = W * in(:, b) + bias, accumulated column by column of W so each
// output element sums its terms in the same order whatever `count` is.

constexpr std::size_t kInferenceBlock = 8;

template <typename T>
void AffineFixed(const DenseLayer<T>& layer, const T* in, std::size_t count, T* out) {
  const Eigen::Index rows = layer.weight.rows();
  const Eigen::Index cols = layer.weight.cols();
  const T* bias = layer.bias.data();
  for (std::size_t b = 0; b < count; ++b) {
    std::memcpy(out + b * rows, bias, sizeof(T) * static_cast<std::size_t>(rows));
  }
  for (Eigen::Index k = 0; k < cols; ++k) {
    const T* __restrict wk = layer.weight.data() + k * rows;
    for (std::size_t b = 0; b < count; ++b) {
      const T x = in[b * cols + k];
      if (x == T(0)) continue;
      T* __restrict y = out + b * rows;
      for (Eigen::Index j = 0; j < rows; ++j) y[j] += x * wk[j];
    }
  }
  if (layer.relu) {
    for (std::size_t i = 0; i < count * static_cast<std::size_t>(rows); ++i) {
      out[i] = std::max(out[i], T(0));
    }
  }
}

template <typename T>
struct StackScratch {
  std::vector<T> a, b;
};

// Runs a stack over `count` column vectors; returns a pointer into scratch.
template <typename T>
const T* StackFixed(const Stack<T>& layers, const T* in, std::size_t count,
                    StackScratch<T>& scratch) {
  const T* cur = in;
  std::vector<T>* dst = &scratch.a;
  for (const auto& layer : layers) {
    dst->resize(count * static_cast<std::size_t>(layer.weight.rows()));
    AffineFixed(layer, cur, count, dst->data());
    cur = dst->data();
    dst = dst == &scratch.a ? &scratch.b : &scratch.a;
  }
  return cur;
}

template <typename T>
T DotFixed(const T* a, const T* b, std::size_t n) {
  T acc = 0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

// Logits for `count` examples whose pooled query/title embeddings are laid
// out as dim x count column blocks.
template <typename T>
void LogitsFromEmbeddings(const StudentModel<T>& model, const T* query, const T* title,
                          std::size_t count, T* logits, StackScratch<T>& s1,
                          StackScratch<T>& s2, std::vector<T>& joined) {
  const std::size_t dim = model.config.embedding_dim;
  if (model.config.topology == Topology::kFullyConnected) {
    joined.resize(2 * dim * count);
    for (std::size_t b = 0; b < count; ++b) {
      std::memcpy(joined.data() + 2 * dim * b, query + dim * b, sizeof(T) * dim);
      std::memcpy(joined.data() + 2 * dim * b + dim, title + dim * b, sizeof(T) * dim);
    }
    const T* out = StackFixed(model.fc_layers, joined.data(), count, s1);
    std::copy(out, out + count, logits);
  } else {
    const std::size_t width = model.config.hidden_sizes.back();
    const T* q = StackFixed(model.query_tower, query, count, s1);
    const T* t = StackFixed(model.title_tower, title, count, s2);
    for (std::size_t b = 0; b < count; ++b) logits[b] = DotFixed(q + b * width, t + b * width, width);
  }
}

// ---------------------------------------------------------------------------
// Batched training path (Eigen).

template <typename T>
struct StackCache {
  std::vector<Matrix<T>> inputs;  // input to each layer
  std::vector<Matrix<T>> pre;     // pre-activation of each layer
  Matrix<T> output;
};

template <typename T>
void StackForward(const Stack<T>& layers, Matrix<T> x, StackCache<T>& cache) {
  cache.inputs.clear();
  cache.pre.clear();
  for (const auto& layer : layers) {
    Matrix<T> z = layer.weight * x;
    z.colwise() += layer.bias;
    cache.inputs.push_back(std::move(x));
    x = layer.relu ? Matrix<T>(z.cwiseMax(T(0))) : z;
    cache.pre.push_back(std::move(z));
  }
  cache.output = std::move(x);
}

// Backpropagates dL/d(output) through the stack, writing weight and bias
// gradients to grads[offset...]; returns dL/d(input).
template <typename T>
Matrix<T> StackBackward(const Stack<T>& layers, const StackCache<T>& cache, Matrix<T> g,
                        std::vector<Matrix<T>>& grads, std::size_t offset) {
  for (std::size_t i = layers.size(); i-- > 0;) {
    const auto& layer = layers[i];
    if (layer.relu) g = g.cwiseProduct((cache.pre[i].array() > T(0)).matrix().template cast<T>());
    grads[offset + 2 * i] = g * cache.inputs[i].transpose();
    grads[offset + 2 * i + 1] = g.rowwise().sum();
    g = layer.weight.transpose() * g;
  }
  return g;
}

template <typename T>
bool AllFinite(const Matrix<T>& m) {
  return m.allFinite();
}

}  // namespace

template <typename T>
template <typename U>
StudentModel<U> StudentModel<T>::Cast() const {
  StudentModel<U> out;
  out.config = config;
  out.table.weights = table.weights.template cast<U>();
  const auto cast_stack = [](const Stack<T>& src) {
    Stack<U> dst;
    for (const auto& layer : src) {
      dst.push_back({layer.weight.template cast<U>(), layer.bias.template cast<U>(), layer.relu});
    }
    return dst;
  };
  out.fc_layers = cast_stack(fc_layers);
  out.query_tower = cast_stack(query_tower);
  out.title_tower = cast_stack(title_tower);
  return out;
}

template <typename T>
std::vector<ParamBlock<T>> DenseParameters(StudentModel<T>& model) {
  return CollectBlocks<T>(model);
}

template <typename T>
std::vector<ParamBlock<const T>> DenseParameters(const StudentModel<T>& model) {
  return CollectBlocks<const T>(model);
}

template <typename T>
StudentModel<T> InitStudent(const StudentConfig& config, std::size_t vocab_size) {
  config.Validate();
  StudentModel<T> model;
  model.config = config;
  Rng rng(config.seed);
  InitEmbeddingTable(model.table, config.embedding_dim, vocab_size, rng);
  if (config.topology == Topology::kFullyConnected) {
    InitStack(model.fc_layers, 2 * config.embedding_dim, config.hidden_sizes, true, rng);
  } else {
    InitStack(model.query_tower, config.embedding_dim, config.hidden_sizes, false, rng);
    InitStack(model.title_tower, config.embedding_dim, config.hidden_sizes, false, rng);
  }
  return model;
}

template <typename T>
void ValidateShapes(const StudentModel<T>& model) {
  const StudentConfig& c = model.config;
  if (model.table.dim() != c.embedding_dim) {
    throw Error(ErrorKind::kShape, "embedding table dim " + std::to_string(model.table.dim()) +
                                       " != config dim " + std::to_string(c.embedding_dim));
  }
  if (c.topology == Topology::kFullyConnected) {
    CheckStack(model.fc_layers, 2 * c.embedding_dim, c, true, "fc");
    if (!model.query_tower.empty() || !model.title_tower.empty()) {
      throw Error(ErrorKind::kShape, "fully_connected model carries tower layers");
    }
  } else {
    CheckStack(model.query_tower, c.embedding_dim, c, false, "query tower");
    CheckStack(model.title_tower, c.embedding_dim, c, false, "title tower");
    if (!model.fc_layers.empty()) throw Error(ErrorKind::kShape, "deep_dot model carries fc layers");
  }
}

template <typename T>
bool ParametersEqual(const StudentModel<T>& a, const StudentModel<T>& b) {
  if (!(a.config == b.config)) return false;
  const auto same = [](const T* x, const T* y, Eigen::Index n) {
    return std::memcmp(x, y, sizeof(T) * static_cast<std::size_t>(n)) == 0;
  };
  if (a.table.weights.rows() != b.table.weights.rows() ||
      a.table.weights.cols() != b.table.weights.cols() ||
      !same(a.table.weights.data(), b.table.weights.data(), a.table.weights.size())) {
    return false;
  }
  const auto pa = DenseParameters(a);
  const auto pb = DenseParameters(b);
  if (pa.size() != pb.size()) return false;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    if (pa[i].rows != pb[i].rows || pa[i].cols != pb[i].cols) return false;
    if (!same(pa[i].data, pb[i].data, pa[i].size())) return false;
  }
  return true;
}

template <typename T>
T Forward(const StudentModel<T>& model, const SentenceEmbedding<T>& query,
          const SentenceEmbedding<T>& title) {
  const auto dim = static_cast<Eigen::Index>(model.config.embedding_dim);
  if (query.vector.size() != dim || title.vector.size() != dim) {
    throw UsageError("forward: embedding dimension mismatch (expected " + std::to_string(dim) + ")");
  }
  StackScratch<T> s1, s2;
  std::vector<T> joined;
  T logit{};
  LogitsFromEmbeddings(model, query.vector.data(), title.vector.data(), 1, &logit, s1, s2, joined);
  return logit;
}

double Sigmoid(double logit) {
  if (logit >= 0) return 1.0 / (1.0 + std::exp(-logit));
  const double e = std::exp(logit);
  return e / (1.0 + e);
}

double SigmoidCrossEntropy(double logit, double label) {
  if (!(label >= 0.0 && label <= 1.0)) {
    throw UsageError("soft label must lie in [0, 1], got " + std::to_string(label));
  }
  return std::max(logit, 0.0) - logit * label + std::log1p(std::exp(-std::abs(logit)));
}

template <typename T>
void PoolBatch(const StudentModel<T>& model, std::span<const EncodedPair> batch,
               std::vector<T>& query, std::vector<T>& title) {
  const std::size_t dim = model.config.embedding_dim;
  if (model.table.dim() != dim) throw UsageError("model table dim does not match config");
  query.resize(dim * batch.size());
  title.resize(dim * batch.size());
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const EncodedPair& pair = batch[b];
    for (auto ids : {std::span<const std::uint32_t>(pair.query), std::span<const std::uint32_t>(pair.title)}) {
      for (std::uint32_t id : ids) {
        if (id >= model.table.size()) throw UsageError("token id out of range for embedding table");
      }
    }
    PoolInto(model.table, pair.query, query.data() + b * dim);
    PoolInto(model.table, pair.title, title.data() + b * dim);
  }
}

template <typename T>
std::vector<T> LogitsFromPooled(const StudentModel<T>& model, std::span<const T> query,
                                std::span<const T> title) {
  const std::size_t dim = model.config.embedding_dim;
  if (query.size() != title.size() || query.size() % dim != 0) {
    throw UsageError("pooled embedding blocks have mismatched sizes");
  }
  const std::size_t count = query.size() / dim;
  std::vector<T> logits(count);
  std::vector<T> joined;
  StackScratch<T> s1, s2;
  for (std::size_t start = 0; start < count; start += kInferenceBlock) {
    const std::size_t n = std::min(kInferenceBlock, count - start);
    LogitsFromEmbeddings(model, query.data() + start * dim, title.data() + start * dim, n,
                         logits.data() + start, s1, s2, joined);
  }
  return logits;
}

template <typename T>
std::vector<T> LogitsBatch(const StudentModel<T>& model, std::span<const EncodedPair> batch) {
  std::vector<T> query, title;
  PoolBatch(model, batch, query, title);
  return LogitsFromPooled<T>(model, query, title);
}

template <typename T>
std::vector<double> PredictBatch(const StudentModel<T>& model, std::span<const EncodedPair> batch) {
  const std::vector<T> logits = LogitsBatch(model, batch);
  std::vector<double> probs(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) probs[i] = Sigmoid(static_cast<double>(logits[i]));
  return probs;
}

template <typename T>
double ComputeGradients(const StudentModel<T>& model, std::span<const TrainingExample> batch,
                        Gradients<T>* grads) {
  if (batch.empty()) throw UsageError("batch must be nonempty");
  const auto dim = static_cast<Eigen::Index>(model.config.embedding_dim);
  const auto count = static_cast<Eigen::Index>(batch.size());
  const bool fc = model.config.topology == Topology::kFullyConnected;

  // Pool embeddings: fc stacks query over title in one 2*dim x B input.
  Matrix<T> query(dim, count), title(dim, count);
  for (Eigen::Index b = 0; b < count; ++b) {
    const EncodedPair& pair = batch[static_cast<std::size_t>(b)].pair;
    for (auto ids : {std::span<const std::uint32_t>(pair.query), std::span<const std::uint32_t>(pair.title)}) {
      for (std::uint32_t id : ids) {
        if (id >= model.table.size()) throw UsageError("token id out of range for embedding table");
      }
    }
    PoolInto(model.table, pair.query, query.col(b).data());
    PoolInto(model.table, pair.title, title.col(b).data());
  }

  StackCache<T> c1, c2;
  Matrix<T> logits;
  if (fc) {
    Matrix<T> joined(2 * dim, count);
    joined.topRows(dim) = query;
    joined.bottomRows(dim) = title;
    StackForward(model.fc_layers, std::move(joined), c1);
    logits = c1.output;
  } else {
    StackForward(model.query_tower, query, c1);
    StackForward(model.title_tower, title, c2);
    logits = c1.output.cwiseProduct(c2.output).colwise().sum();
  }

  double loss = 0.0;
  Matrix<T> dlogit(1, count);
  const double inv_count = 1.0 / static_cast<double>(count);
  for (Eigen::Index b = 0; b < count; ++b) {
    const double z = static_cast<double>(logits(0, b));
    const double y = batch[static_cast<std::size_t>(b)].soft_label;
    loss += SigmoidCrossEntropy(z, y);
    dlogit(0, b) = static_cast<T>((Sigmoid(z) - y) * inv_count);
  }
  loss *= inv_count;
  if (!grads) return loss;

  grads->dense.assign(DenseShapes(model.config).size(), Matrix<T>());
  Matrix<T> dquery, dtitle;
  if (fc) {
    Matrix<T> g = StackBackward(model.fc_layers, c1, dlogit, grads->dense, 0);
    dquery = g.topRows(dim);
    dtitle = g.bottomRows(dim);
  } else {
    Matrix<T> gq = c2.output.array().rowwise() * dlogit.row(0).array();
    Matrix<T> gt = c1.output.array().rowwise() * dlogit.row(0).array();
    dquery = StackBackward(model.query_tower, c1, std::move(gq), grads->dense, 0);
    dtitle = StackBackward(model.title_tower, c2, std::move(gt), grads->dense,
                           2 * model.query_tower.size());
  }

  // Scatter to embedding rows: each occurrence receives d(pooled)/sqrt(n).
  grads->touched_ids.clear();
  std::unordered_map<std::uint32_t, Eigen::Index> slot;
  std::vector<Vector<T>> rows;
  const auto scatter = [&](std::span<const std::uint32_t> ids, const auto& dpooled) {
    if (ids.empty()) return;
    const T scale = T(1) / std::sqrt(static_cast<T>(ids.size()));
    for (std::uint32_t id : ids) {
      auto [it, fresh] = slot.emplace(id, static_cast<Eigen::Index>(rows.size()));
      if (fresh) {
        grads->touched_ids.push_back(id);
        rows.push_back(Vector<T>::Zero(dim));
      }
      rows[static_cast<std::size_t>(it->second)] += scale * dpooled;
    }
  };
  for (Eigen::Index b = 0; b < count; ++b) {
    const EncodedPair& pair = batch[static_cast<std::size_t>(b)].pair;
    scatter(pair.query, dquery.col(b));
    scatter(pair.title, dtitle.col(b));
  }
  grads->table_rows.resize(dim, static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    grads->table_rows.col(static_cast<Eigen::Index>(i)) = rows[i];
  }
  return loss;
}

template <typename T>
AdagradState<T> AdagradState<T>::ForModel(const StudentModel<T>& model) {
  AdagradState<T> state;
  state.epsilon = model.config.adagrad_epsilon;
  for (const auto& block : DenseParameters(model)) {
    state.dense.push_back(Matrix<T>::Zero(block.rows, block.cols));
  }
  state.table = Matrix<T>::Zero(model.table.weights.rows(), model.table.weights.cols());
  return state;
}

template <typename T>
double BackwardAndStep(StudentModel<T>& model, AdagradState<T>& state,
                       std::span<const TrainingExample> batch, std::size_t batch_index) {
  Gradients<T> grads;
  const double loss = ComputeGradients(model, batch, &grads);
  const std::string where = " at batch " + std::to_string(batch_index);
  if (!std::isfinite(loss)) throw NumericError("non-finite loss" + where);

  auto blocks = DenseParameters(model);
  if (state.dense.size() != blocks.size()) throw UsageError("optimizer state does not match model");
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (!AllFinite(grads.dense[i])) {
      throw NumericError("non-finite gradient in block " + blocks[i].name + where);
    }
  }
  if (!AllFinite(grads.table_rows)) throw NumericError("non-finite gradient in block embedding" + where);

  const T lr = static_cast<T>(model.config.learning_rate);
  const T eps = static_cast<T>(state.epsilon);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    Eigen::Map<Matrix<T>> param(blocks[i].data, blocks[i].rows, blocks[i].cols);
    auto& acc = state.dense[i];
    const auto& g = grads.dense[i];
    acc.array() += g.array().square();
    param.array() -= lr * g.array() / (acc.array().sqrt() + eps);
  }
  for (std::size_t i = 0; i < grads.touched_ids.size(); ++i) {
    const auto id = static_cast<Eigen::Index>(grads.touched_ids[i]);
    const auto g = grads.table_rows.col(static_cast<Eigen::Index>(i));
    auto acc = state.table.col(id);
    acc.array() += g.array().square();
    model.table.weights.col(id).array() -= lr * g.array() / (acc.array().sqrt() + eps);
  }
  return loss;
}

template <typename T>
TrainReport Train(StudentModel<T>& model, std::span<const TrainingExample> dataset,
                  const EpochCallback& on_epoch) {
  const StudentConfig& config = model.config;
  config.Validate();
  if (dataset.empty()) throw UsageError("training dataset is empty");
  ValidateShapes(model);

  AdagradState<T> state = AdagradState<T>::ForModel(model);
  Rng shuffle_rng(config.seed ^ 0x9E3779B97F4A7C15ULL);
  std::vector<std::size_t> order(dataset.size());
  std::vector<TrainingExample> batch;
  TrainReport report;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    shuffle_rng.Shuffle(std::span<std::size_t>(order));
    double total = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      batch.clear();
      for (std::size_t i = start; i < end; ++i) batch.push_back(dataset[order[i]]);
      try {
        total += BackwardAndStep(model, state, std::span<const TrainingExample>(batch), batches);
      } catch (const Error& e) {
        throw Error(e.kind(), std::string(e.what()) + " (epoch " + std::to_string(epoch) + ")");
      }
      ++batches;
      ++report.steps;
    }
    const double mean = total / static_cast<double>(batches);
    report.epoch_losses.push_back(mean);
    if (on_epoch) on_epoch(epoch, mean);
  }
  return report;
}

#define TINYREL_INSTANTIATE(T)                                                                    \
  template StudentModel<float> StudentModel<T>::Cast<float>() const;                              \
  template StudentModel<double> StudentModel<T>::Cast<double>() const;                            \
  template std::vector<ParamBlock<T>> DenseParameters(StudentModel<T>&);                          \
  template std::vector<ParamBlock<const T>> DenseParameters(const StudentModel<T>&);              \
  template StudentModel<T> InitStudent<T>(const StudentConfig&, std::size_t);                     \
  template void ValidateShapes(const StudentModel<T>&);                                           \
  template bool ParametersEqual(const StudentModel<T>&, const StudentModel<T>&);                  \
  template T Forward(const StudentModel<T>&, const SentenceEmbedding<T>&,                         \
                     const SentenceEmbedding<T>&);                                                \
  template void PoolBatch(const StudentModel<T>&, std::span<const EncodedPair>, std::vector<T>&,     \
                          std::vector<T>&);                                                       \
  template std::vector<T> LogitsFromPooled(const StudentModel<T>&, std::span<const T>,            \
                                           std::span<const T>);                                   \
  template std::vector<T> LogitsBatch(const StudentModel<T>&, std::span<const EncodedPair>);      \
  template std::vector<double> PredictBatch(const StudentModel<T>&, std::span<const EncodedPair>); \
  template double ComputeGradients(const StudentModel<T>&, std::span<const TrainingExample>,      \
                                   Gradients<T>*);                                                \
  template struct AdagradState<T>;                                                                \
  template double BackwardAndStep(StudentModel<T>&, AdagradState<T>&,                             \
                                  std::span<const TrainingExample>, std::size_t);                 \
  template TrainReport Train(StudentModel<T>&, std::span<const TrainingExample>,                  \
                             const EpochCallback&);

TINYREL_INSTANTIATE(float)
TINYREL_INSTANTIATE(double)

#undef TINYREL_INSTANTIATE

}  // namespace tinyrel
