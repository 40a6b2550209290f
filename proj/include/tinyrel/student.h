// Copyright 2026 The tinyrel Authors
// SPDX-License-Identifier: Apache-2.0

// Feed-forward student networks over pooled sentence embeddings.
//
// fully_connected: [query; title] (2*dim) -> hidden_sizes (ReLU) -> 1 logit.
// deep_dot: query and title each pass through their own tower
//   dim -> hidden_sizes (ReLU on all but the last layer); the logit is the dot
//   product of the two tower outputs.
//
// Both topologies share one embedding table across the query and title sides.
// Training minimises sigmoid cross entropy against soft labels with Adagrad;
// embedding rows are updated sparsely (only rows touched by the batch).
//
// Instantiated for float (training, serving, checkpoints) and double
// (gradient verification).

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tinyrel/embedding.h"

namespace tinyrel {

enum class Topology : std::uint8_t { kFullyConnected = 0, kDeepDot = 1 };

const char* TopologyName(Topology topology);
std::optional<Topology> ParseTopology(std::string_view name);

struct StudentConfig {
  Topology topology = Topology::kFullyConnected;
  std::vector<std::size_t> hidden_sizes{1024, 256, 128, 64};
  std::size_t embedding_dim = 64;
  double learning_rate = 0.05;
  std::size_t epochs = 5;
  std::size_t batch_size = 256;
  std::uint64_t seed = 1;
  double adagrad_epsilon = 1e-8;

  // Throws Error(kUsage) on empty/zero hidden sizes, zero dim, epochs or
  // batch size, or a negative/non-finite learning rate.
  void Validate() const;

  bool operator==(const StudentConfig&) const = default;
};

template <typename T>
struct DenseLayer {
  Matrix<T> weight;  // out x in
  Vector<T> bias;    // out
  bool relu = true;
};

template <typename T>
struct StudentModel {
  StudentConfig config;
  EmbeddingTable<T> table;
  std::vector<DenseLayer<T>> fc_layers;    // fully_connected only
  std::vector<DenseLayer<T>> query_tower;  // deep_dot only
  std::vector<DenseLayer<T>> title_tower;  // deep_dot only

  template <typename U>
  StudentModel<U> Cast() const;
};

// A view of one dense parameter tensor (column-major).
template <typename T>
struct ParamBlock {
  std::string name;
  T* data;
  Eigen::Index rows;
  Eigen::Index cols;
  Eigen::Index size() const { return rows * cols; }
};

// Dense (non-embedding) parameter tensors in canonical order: for each layer
// of each stack, weight then bias. Stacks are "fc", or "query" then "title".
template <typename T>
std::vector<ParamBlock<T>> DenseParameters(StudentModel<T>& model);
template <typename T>
std::vector<ParamBlock<const T>> DenseParameters(const StudentModel<T>& model);

// Expected (rows, cols) of each dense tensor for a config, in canonical order.
std::vector<std::pair<std::size_t, std::size_t>> DenseShapes(const StudentConfig& config);

// Seeded initialisation: embedding table uniform in [-0.05, 0.05], ReLU
// layers He-uniform, linear layers Glorot-uniform, biases zero.
template <typename T>
StudentModel<T> InitStudent(const StudentConfig& config, std::size_t vocab_size);

// Throws Error(kShape) if any tensor disagrees with the config.
template <typename T>
void ValidateShapes(const StudentModel<T>& model);

// True iff all parameters are bitwise equal.
template <typename T>
bool ParametersEqual(const StudentModel<T>& a, const StudentModel<T>& b);

template <typename T>
T Forward(const StudentModel<T>& model, const SentenceEmbedding<T>& query,
          const SentenceEmbedding<T>& title);

// Numerically stable sigmoid cross entropy,
// max(z, 0) - z*y + log(1 + exp(-|z|)). Throws Error(kUsage) unless y in [0, 1].
double SigmoidCrossEntropy(double logit, double label);
double Sigmoid(double logit);

struct EncodedPair {
  std::vector<std::uint32_t> query;
  std::vector<std::uint32_t> title;
};

struct TrainingExample {
  EncodedPair pair;
  double soft_label = 0.0;
};

// Pools each pair's query and title embeddings into dim x batch.size()
// column blocks (resized as needed).
template <typename T>
void PoolBatch(const StudentModel<T>& model, std::span<const EncodedPair> batch,
               std::vector<T>& query, std::vector<T>& title);

// Logits from pooled embedding blocks laid out as PoolBatch produces them.
template <typename T>
std::vector<T> LogitsFromPooled(const StudentModel<T>& model, std::span<const T> query,
                                std::span<const T> title);

// Logits for a batch. Every example is evaluated with the same fixed
// summation order, so results do not depend on how inputs are batched.
template <typename T>
std::vector<T> LogitsBatch(const StudentModel<T>& model, std::span<const EncodedPair> batch);

// sigmoid(logit) per example.
template <typename T>
std::vector<double> PredictBatch(const StudentModel<T>& model, std::span<const EncodedPair> batch);

template <typename T>
struct Gradients {
  std::vector<Matrix<T>> dense;            // parallel to DenseParameters()
  std::vector<std::uint32_t> touched_ids;  // first-touch order
  Matrix<T> table_rows;                    // dim x touched_ids.size()
};

// Mean batch loss and, when `grads` is non-null, its exact gradient.
template <typename T>
double ComputeGradients(const StudentModel<T>& model, std::span<const TrainingExample> batch,
                        Gradients<T>* grads);

template <typename T>
struct AdagradState {
  std::vector<Matrix<T>> dense;  // accumulated squared gradients
  Matrix<T> table;               // dim x vocab
  double epsilon = 1e-8;

  static AdagradState ForModel(const StudentModel<T>& model);
};

// One Adagrad step on the batch-mean gradient; returns the pre-update mean
// loss. Throws Error(kNumeric) naming the parameter block and batch index if
// the loss or any gradient is non-finite; the model is left untouched then.
template <typename T>
double BackwardAndStep(StudentModel<T>& model, AdagradState<T>& state,
                       std::span<const TrainingExample> batch, std::size_t batch_index = 0);

struct TrainReport {
  std::vector<double> epoch_losses;  // mean of batch losses per epoch
  std::size_t steps = 0;
};

using EpochCallback = std::function<void(std::size_t epoch, double mean_loss)>;

// Runs config.epochs passes of shuffled mini-batches (shuffle order derived
// from config.seed). On a numeric failure the exception propagates and
// `model` holds the last good parameters.
template <typename T>
TrainReport Train(StudentModel<T>& model, std::span<const TrainingExample> dataset,
                  const EpochCallback& on_epoch = {});

}  // namespace tinyrel
