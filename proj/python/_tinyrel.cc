// Copyright 2026 The tinyrel Authors
// SPDX-License-Identifier: Apache-2.0

// Python bindings: tokenizer, vocab, distillation helpers, metrics, student
// training/inference, benchmark and the CLI entry point.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "tinyrel/bench.h"
#include "tinyrel/checkpoint.h"
#include "tinyrel/cli.h"
#include "tinyrel/dataset.h"
#include "tinyrel/distill.h"
#include "tinyrel/embedding.h"
#include "tinyrel/errors.h"
#include "tinyrel/metrics.h"
#include "tinyrel/student.h"
#include "tinyrel/tokenizer.h"
#include "tinyrel/vocab.h"

namespace py = pybind11;
using namespace tinyrel;

namespace {

using PairList = std::vector<std::pair<std::string, std::string>>;

std::vector<TextPair> ToTextPairs(const PairList& pairs) {
  std::vector<TextPair> out;
  out.reserve(pairs.size());
  for (const auto& [q, t] : pairs) out.push_back({q, t});
  return out;
}

py::dict ConfigDict(const StudentConfig& c) {
  py::dict d;
  d["topology"] = TopologyName(c.topology);
  d["dim"] = c.embedding_dim;
  d["hidden"] = c.hidden_sizes;
  d["lr"] = c.learning_rate;
  d["epochs"] = c.epochs;
  d["batch_size"] = c.batch_size;
  d["seed"] = c.seed;
  return d;
}

std::vector<double> Predict(const Checkpoint& ckpt, const PairList& pairs) {
  const auto texts = ToTextPairs(pairs);
  const auto encoded = EncodePairs(texts, ckpt.vocab);
  py::gil_scoped_release release;
  return PredictBatch(ckpt.model, std::span<const EncodedPair>(encoded));
}

std::vector<float> Embed(const Checkpoint& ckpt, const std::string& text) {
  const auto e = EmbedSentence(Tokenize(text), ckpt.vocab, ckpt.model.table);
  return {e.vector.data(), e.vector.data() + e.vector.size()};
}

double Distance(const Checkpoint& ckpt, const std::string& a, const std::string& b, const std::string& metric) {
  DistanceMetric m;
  if (metric == "cosine") m = DistanceMetric::kCosine;
  else if (metric == "euclidean") m = DistanceMetric::kEuclidean;
  else if (metric == "manhattan") m = DistanceMetric::kManhattan;
  else throw UsageError("unknown metric '" + metric + "'");
  const auto ea = EmbedSentence(Tokenize(a), ckpt.vocab, ckpt.model.table);
  const auto eb = EmbedSentence(Tokenize(b), ckpt.vocab, ckpt.model.table);
  return EmbeddingDistance(ea.vector, eb.vector, m);
}

Checkpoint TrainStudent(const std::vector<std::tuple<std::string, std::string, double>>& examples,
                        const Vocab& vocab, const std::string& topology, const std::vector<std::size_t>& hidden,
                        std::size_t dim, double lr, std::size_t epochs, std::size_t batch_size, std::uint64_t seed) {
  StudentConfig c;
  const auto t = ParseTopology(topology);
  if (!t) throw UsageError("unknown topology '" + topology + "'");
  c.topology = *t;
  c.hidden_sizes = hidden;
  c.embedding_dim = dim;
  c.learning_rate = lr;
  c.epochs = epochs;
  c.batch_size = batch_size;
  c.seed = seed;
  c.Validate();
  std::vector<TransferExample> transfer;
  transfer.reserve(examples.size());
  for (const auto& [q, ti, label] : examples) transfer.push_back({q, ti, label});
  const auto dataset = EncodeTransferSet(transfer, vocab);
  Checkpoint ckpt{InitStudent<float>(c, vocab.size()), vocab};
  py::gil_scoped_release release;
  Train(ckpt.model, std::span<const TrainingExample>(dataset));
  return ckpt;
}

py::dict MetricsDict(const MetricsReport& r) {
  py::dict d;
  d["count"] = r.count;
  d["threshold"] = r.threshold;
  d["auc"] = r.auc;
  d["accuracy"] = r.accuracy;
  d["precision"] = r.precision;
  d["recall"] = r.recall;
  d["f1"] = r.f1;
  d["pcc"] = r.pcc ? py::object(py::float_(*r.pcc)) : py::object(py::none());
  d["student_mean"] = r.mean;
  d["student_variance"] = r.variance;
  d["teacher_mean"] = r.label_mean;
  d["teacher_variance"] = r.label_variance;
  return d;
}

py::dict BenchDict(const BenchReport& r) {
  py::dict d;
  d["batches"] = r.batches;
  d["batch_size"] = r.batch_size;
  d["total_examples"] = r.total_examples;
  d["threads"] = r.threads;
  d["cycled"] = r.cycled;
  d["tokenize_seconds"] = r.tokenize_seconds;
  d["embed_seconds"] = r.embed_seconds;
  d["forward_seconds"] = r.forward_seconds;
  d["total_seconds"] = r.total_seconds;
  d["examples_per_second"] = r.examples_per_second;
  d["checksum"] = r.checksum;
  return d;
}

}  // namespace

PYBIND11_MODULE(_tinyrel, m) {
  m.doc() = "tinyrel: distil a pairwise text relevance teacher into a small student";

  static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object type = py::reinterpret_borrow<py::object>(error.ptr());
      py::object exc = type(std::string(ErrorKindName(e.kind())) + ": " + e.what());
      exc.attr("kind") = ErrorKindName(e.kind());
      exc.attr("exit_code") = ExitCodeFor(e.kind());
      PyErr_SetObject(error.ptr(), exc.ptr());
    }
  });

  m.def("tokenize", [](const std::string& text) { return TokenizeToSet(text); }, py::arg("text"),
        "CWUB token set: unigrams followed by bigrams.");
  m.def(
      "tokenize_sequence",
      [](const std::string& text) {
        const auto seq = Tokenize(text);
        return py::make_tuple(seq.unigrams, seq.bigrams);
      },
      py::arg("text"));

  py::class_<Vocab>(m, "Vocab")
      .def_static(
          "build",
          [](const PairList& pairs, std::uint64_t min_count, std::size_t max_size) {
            VocabOptions o;
            o.min_count = min_count;
            if (max_size) o.max_size = max_size;
            const auto texts = ToTextPairs(pairs);
            return BuildVocab(texts, o);
          },
          py::arg("pairs"), py::arg("min_count") = 5, py::arg("max_size") = 0)
      .def_static("load", &LoadVocab, py::arg("path"))
      .def("save", [](const Vocab& v, const std::string& path) { SaveVocab(v, path); }, py::arg("path"))
      .def("__len__", &Vocab::size)
      .def("lookup", &Vocab::Lookup, py::arg("token"))
      .def("encode", [](const Vocab& v, const std::string& text) { return v.Encode(text); }, py::arg("text"))
      .def_property_readonly("tokens", &Vocab::tokens)
      .def_property_readonly("counts", &Vocab::counts);

  m.def("soften", &Soften, py::arg("z_pos"), py::arg("z_neg"), py::arg("temperature") = 1.0);
  m.def("stack_scores", [](const std::vector<double>& s) { return StackScores(s); }, py::arg("scores"));

  m.def("auc", [](const std::vector<double>& s, const std::vector<double>& l) { return Auc(s, l); },
        py::arg("scores"), py::arg("labels"));
  m.def("pcc", [](const std::vector<double>& a, const std::vector<double>& b) { return Pcc(a, b); }, py::arg("a"),
        py::arg("b"));
  m.def(
      "evaluate",
      [](const std::vector<double>& s, const std::vector<double>& l, double threshold) {
        return MetricsDict(Evaluate(s, l, threshold));
      },
      py::arg("scores"), py::arg("labels"), py::arg("threshold") = 0.5);

  py::class_<Checkpoint>(m, "Model")
      .def_static("load", &LoadCheckpoint, py::arg("path"))
      .def("save", [](const Checkpoint& c, const std::string& path) { SaveCheckpoint(c.model, c.vocab, path); },
           py::arg("path"))
      .def_property_readonly("config", [](const Checkpoint& c) { return ConfigDict(c.model.config); })
      .def_property_readonly("vocab", [](const Checkpoint& c) { return c.vocab; })
      .def("predict", &Predict, py::arg("pairs"), "Relevance scores in [0, 1] for (query, title) pairs.")
      .def("embed", &Embed, py::arg("text"))
      .def("distance", &Distance, py::arg("a"), py::arg("b"), py::arg("metric") = "cosine")
      .def(
          "bench",
          [](const Checkpoint& c, const PairList& pairs, std::size_t batches, std::size_t batch_size,
             std::size_t warmup, std::size_t threads) {
            BenchOptions o;
            o.batches = batches;
            o.batch_size = batch_size;
            o.warmup = warmup;
            o.threads = threads;
            const auto texts = ToTextPairs(pairs);
            BenchReport r;
            {
              py::gil_scoped_release release;
              r = RunBench(c.model, c.vocab, texts, o);
            }
            return BenchDict(r);
          },
          py::arg("pairs"), py::arg("batches") = 100, py::arg("batch_size") = 128, py::arg("warmup") = 5,
          py::arg("threads") = 1);

  m.def("train", &TrainStudent, py::arg("examples"), py::arg("vocab"), py::arg("topology") = "fully_connected",
        py::arg("hidden") = std::vector<std::size_t>{1024, 256, 128, 64}, py::arg("dim") = 64,
        py::arg("lr") = 0.05, py::arg("epochs") = 5, py::arg("batch_size") = 256, py::arg("seed") = 1,
        "Trains a student on (query, title, soft_label) triples.");

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"tinyrel"};
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        const int code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command-line tool in-process; returns (exit_code, stdout, stderr).");

#ifdef TINYREL_VERSION
  m.attr("__version__") = TINYREL_VERSION;
#else
  m.attr("__version__") = "dev";
#endif
}
