// Copyright 2026 The tinyrel Authors
// SPDX-License-Identifier: Apache-2.0

#include "tinyrel/cli.h"

#include <unistd.h>

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>

#include "tinyrel/bench.h"
#include "tinyrel/checkpoint.h"
#include "tinyrel/dataset.h"
#include "tinyrel/distill.h"
#include "tinyrel/embedding.h"
#include "tinyrel/errors.h"
#include "tinyrel/external_sort.h"
#include "tinyrel/metrics.h"
#include "tinyrel/student.h"
#include "tinyrel/synth.h"
#include "tinyrel/tsv.h"
#include "tinyrel/vocab.h"

namespace tinyrel {
namespace {

namespace fs = std::filesystem;

struct BuildVocabArgs {
  std::string corpus;
  std::uint64_t min_count = 5;
  std::size_t max_size = 0;
  std::string out;
};

struct MakeTransferArgs {
  std::vector<std::string> scores;
  double temperature = 1.0;
  std::string behavior;
  std::string policy = "none";
  std::string positives;
  std::string out;
  bool assume_sorted = false;
  std::size_t sort_run_lines = 1 << 20;
  std::string temp_dir;
};

struct TrainArgs {
  std::string transfer;
  std::string vocab;
  std::string topology = "fully_connected";
  std::vector<std::size_t> hidden{1024, 256, 128, 64};
  std::size_t dim = 64;
  double learning_rate = 0.05;
  std::size_t epochs = 5;
  std::size_t batch_size = 256;
  std::uint64_t seed = 1;
  std::string out;
  std::string loss_log;
};

struct EvalArgs {
  std::string checkpoint;
  std::string labeled;
  std::string out;
  double threshold = 0.5;
};

struct BenchArgs {
  std::string checkpoint;
  std::string corpus;
  std::size_t batches = 100;
  std::size_t batch_size = 128;
  std::size_t warmup = 5;
  std::size_t threads = 1;
  std::string tsv;
};

struct EmbedDistArgs {
  std::string checkpoint;
  std::string text_a;
  std::string text_b;
};

struct HeatmapArgs {
  std::string checkpoint;
  std::string texts;
  std::string out;
};

struct SynthArgs {
  std::string out_dir;
  SynthOptions options;
};

class Context {
 public:
  Context(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}
  std::ostream& out() { return out_; }
  std::ostream& log() { return err_ << "[tinyrel] "; }

 private:
  std::ostream& out_;
  std::ostream& err_;
};

void LogResolvedConfig(Context& ctx, const CLI::App& sub) {
  std::istringstream lines(sub.config_to_str(true, false));
  ctx.log() << "resolved config for '" << sub.get_name() << "':\n";
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty()) ctx.log() << "  " << line << '\n';
  }
}

void RunBuildVocab(Context& ctx, const BuildVocabArgs& a) {
  VocabOptions options;
  options.min_count = a.min_count;
  options.max_size = a.max_size == 0 ? std::numeric_limits<std::size_t>::max() : a.max_size;
  VocabBuildStats stats;
  const Vocab vocab = BuildVocabFromFile(a.corpus, options, &stats);
  SaveVocab(vocab, a.out);
  ctx.out() << "records=" << stats.records << "\nskipped=" << stats.skipped
            << "\ndistinct_tokens=" << stats.distinct_tokens << "\nvocab_size=" << vocab.size() << '\n';
}

void RunMakeTransfer(Context& ctx, const MakeTransferArgs& a) {
  const auto policy = ParseBehaviorPolicy(a.policy);
  if (!policy) throw UsageError("unknown --policy '" + a.policy + "'");
  if (!a.behavior.empty() && *policy == BehaviorPolicy::kNone) {
    ctx.log() << "behavior file given with policy none: every key with a behavior record is kept\n";
  }

  // Sort inputs into a scratch directory unless told they are already sorted.
  std::unique_ptr<fs::path> scratch;
  std::vector<std::string> score_paths = a.scores;
  std::string behavior_path = a.behavior;
  if (!a.assume_sorted) {
    const fs::path base = a.temp_dir.empty() ? fs::temp_directory_path() : fs::path(a.temp_dir);
    scratch = std::make_unique<fs::path>(base / ("tinyrel-transfer-" + std::to_string(::getpid())));
    fs::create_directories(*scratch);
    ExternalSortOptions sort_options{a.sort_run_lines, scratch->string()};
    for (std::size_t i = 0; i < score_paths.size(); ++i) {
      const std::string sorted = (*scratch / ("scores" + std::to_string(i) + ".tsv")).string();
      ExternalSortByKey(score_paths[i], sorted, sort_options);
      score_paths[i] = sorted;
    }
    if (!behavior_path.empty()) {
      const std::string sorted = (*scratch / "behavior.tsv").string();
      ExternalSortByKey(behavior_path, sorted, sort_options);
      behavior_path = sorted;
    }
  }
  struct Cleanup {
    fs::path* dir;
    ~Cleanup() {
      std::error_code ec;
      if (dir) fs::remove_all(*dir, ec);
    }
  } cleanup{scratch.get()};

  std::vector<std::unique_ptr<TeacherScoreFile>> files;
  std::vector<ScoreSource*> sources;
  for (const auto& p : score_paths) {
    files.push_back(std::make_unique<TeacherScoreFile>(p));
    sources.push_back(files.back().get());
  }
  std::unique_ptr<BehaviorFile> behavior;
  if (!behavior_path.empty()) behavior = std::make_unique<BehaviorFile>(behavior_path);
  std::unique_ptr<PositivesFile> positives;
  if (!a.positives.empty()) positives = std::make_unique<PositivesFile>(a.positives);

  TransferFileWriter writer(a.out, {a.temperature, score_paths.size()});
  TransferOptions options{a.temperature, *policy};
  const JoinReport r = BuildTransferSet(sources, behavior.get(), positives.get(), options,
                                        [&](const TransferExample& e) { writer.Write(e); });
  writer.Close();
  ctx.out() << "teachers=" << r.teachers << "\nmatched=" << r.matched << "\nunmatched=" << r.unmatched
            << "\ndropped=" << r.dropped << "\ndistilled=" << r.distilled << "\npositives=" << r.positives
            << '\n';
}

int RunTrain(Context& ctx, const TrainArgs& a) {
  StudentConfig config;
  const auto topology = ParseTopology(a.topology);
  if (!topology) throw UsageError("unknown --topology '" + a.topology + "'");
  config.topology = *topology;
  config.hidden_sizes = a.hidden;
  config.embedding_dim = a.dim;
  config.learning_rate = a.learning_rate;
  config.epochs = a.epochs;
  config.batch_size = a.batch_size;
  config.seed = a.seed;
  config.Validate();

  const Vocab vocab = LoadVocab(a.vocab);
  const std::vector<TransferExample> transfer = ReadTransferFile(a.transfer);
  const std::vector<TrainingExample> dataset = EncodeTransferSet(transfer, vocab);
  ctx.log() << "training on " << dataset.size() << " examples, vocab " << vocab.size() << '\n';

  StudentModel<float> model = InitStudent<float>(config, vocab.size());
  const std::string loss_log = a.loss_log.empty() ? a.out + ".loss.tsv" : a.loss_log;
  std::ofstream log = OpenForWrite(loss_log, true);
  log << "epoch\tmean_loss\n";
  try {
    Train(model, dataset, [&](std::size_t epoch, double loss) {
      log << epoch << '\t' << FormatDouble(loss) << '\n';
      ctx.log() << "epoch " << epoch << " mean_loss=" << FormatDouble(loss) << '\n';
    });
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kNumeric) throw;
    SaveCheckpoint(model, vocab, a.out + ".lastgood");
    ctx.log() << "numeric failure: " << e.what() << "; last good state saved to " << a.out
              << ".lastgood\n";
    return ExitCodeFor(ErrorKind::kNumeric);
  }
  SaveCheckpoint(model, vocab, a.out);
  ctx.out() << "checkpoint=" << a.out << "\nloss_log=" << loss_log << '\n';
  return 0;
}

void RunEval(Context& ctx, const EvalArgs& a) {
  const Checkpoint ckpt = LoadCheckpoint(a.checkpoint);
  const std::vector<LabeledPair> rows = ReadLabeledPairs(a.labeled);
  if (rows.empty()) throw Error(ErrorKind::kFormat, a.labeled + ": no labeled rows");
  std::vector<EncodedPair> encoded;
  std::vector<double> labels;
  encoded.reserve(rows.size());
  for (const auto& r : rows) {
    encoded.push_back(EncodePair(r.pair, ckpt.vocab));
    labels.push_back(r.label);
  }
  const std::vector<double> scores = PredictBatch(ckpt.model, encoded);
  const std::string text = FormatMetricsReport(Evaluate(scores, labels, a.threshold));
  if (!a.out.empty()) {
    std::ofstream out = OpenForWrite(a.out, true);
    out << text;
    if (!out.flush()) throw IoError("write failed: " + a.out);
  }
  ctx.out() << text;
}

void RunBenchCommand(Context& ctx, const BenchArgs& a) {
  const Checkpoint ckpt = LoadCheckpoint(a.checkpoint);
  const std::vector<TextPair> corpus = ReadPairs(a.corpus);
  BenchOptions options;
  options.batches = a.batches;
  options.batch_size = a.batch_size;
  options.warmup = a.warmup;
  options.threads = a.threads;
  const BenchReport report = RunBench(ckpt.model, ckpt.vocab, corpus, options);
  if (report.cycled) ctx.log() << "corpus has " << corpus.size() << " pairs; cycling\n";
  ctx.out() << FormatBenchReport(report);
  if (!a.tsv.empty()) {
    const bool fresh = !fs::exists(a.tsv);
    std::ofstream out(a.tsv, std::ios::app | std::ios::binary);
    if (!out) throw IoError("cannot open for appending: " + a.tsv);
    if (fresh) out << BenchTsvHeader() << '\n';
    out << BenchTsvRow(report) << '\n';
  }
}

void RunEmbedDist(Context& ctx, const EmbedDistArgs& a) {
  const Checkpoint ckpt = LoadCheckpoint(a.checkpoint);
  const auto ea = EmbedSentence(Tokenize(a.text_a), ckpt.vocab, ckpt.model.table);
  const auto eb = EmbedSentence(Tokenize(a.text_b), ckpt.vocab, ckpt.model.table);
  const double cosine = EmbeddingDistance(ea.vector, eb.vector, DistanceMetric::kCosine);
  ctx.out() << "cosine=" << FormatDouble(cosine)
            << "\neuclidean=" << FormatDouble(EmbeddingDistance(ea.vector, eb.vector, DistanceMetric::kEuclidean))
            << "\nmanhattan=" << FormatDouble(EmbeddingDistance(ea.vector, eb.vector, DistanceMetric::kManhattan))
            << '\n';
}

void RunHeatmap(Context& ctx, const HeatmapArgs& a) {
  const Checkpoint ckpt = LoadCheckpoint(a.checkpoint);
  std::vector<std::string> texts;
  LineReader reader(a.texts);
  std::string line;
  while (reader.Next(line)) {
    if (!line.empty()) texts.push_back(line);
  }
  ExportEmbeddingHeatmap(texts, ckpt.vocab, ckpt.model.table, a.out);
  ctx.out() << "rows=" << texts.size() << "\nout=" << a.out << '\n';
}

void RunSynth(Context& ctx, const SynthArgs& a) {
  const SynthCorpus corpus = GenerateSynthetic(a.options);
  WriteSyntheticFixture(corpus, a.out_dir);
  ctx.out() << "train_pairs=" << corpus.train.size() << "\nheldout_pairs=" << corpus.heldout.size()
            << "\nteachers=" << corpus.train_logits.size() << "\nout_dir=" << a.out_dir << '\n';
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Context ctx(out, err);
  CLI::App app{"tinyrel: distil a pairwise text relevance teacher into a small feed-forward student"};
  app.set_config("--config", "", "TOML/INI file whose keys override flag defaults");
  app.require_subcommand(1);

  BuildVocabArgs vocab_args;
  auto* vocab_cmd = app.add_subcommand(
      "build-vocab",
      "Count CWUB unigrams+bigrams over a corpus and keep the frequent ones.\n"
      "Corpus: TSV, first two columns query and title; '#' lines skipped.\n"
      "Output: '#cwub-vocab v1 size=<N>' then token<TAB>id<TAB>count per line.");
  vocab_cmd->add_option("--corpus", vocab_args.corpus, "Text-pair corpus TSV")->required()->check(CLI::ExistingFile);
  vocab_cmd->add_option("--min-count", vocab_args.min_count, "Drop tokens seen fewer times")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  vocab_cmd->add_option("--max-size", vocab_args.max_size, "Keep at most this many tokens (0 = unlimited)")
      ->capture_default_str();
  vocab_cmd->add_option("--out", vocab_args.out, "Vocab file to write")->required();

  MakeTransferArgs transfer_args;
  auto* transfer_cmd = app.add_subcommand(
      "make-transfer",
      "Join teacher score files on (query, title), soften with temperature T, average\n"
      "teachers, optionally filter by behavior, append click positives.\n"
      "Score file: '#teacher-scores v1 teacher=<id> kind={logits|prob}' then\n"
      "  query<TAB>title<TAB>z_pos<TAB>z_neg (or query<TAB>title<TAB>prob).\n"
      "Behavior file: '#behavior v1' then query,title,orders,displays,clicks,skips.\n"
      "Positives file: '#positives v1' then query<TAB>title.\n"
      "Output: '#transfer v1 T=<temp> teachers=<k>' then query,title,soft_label,provenance.");
  transfer_cmd->add_option("--scores", transfer_args.scores, "Teacher score files (one per teacher)")
      ->required()
      ->check(CLI::ExistingFile);
  transfer_cmd->add_option("--temperature,-T", transfer_args.temperature, "Softening temperature (> 0)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  transfer_cmd->add_option("--behavior", transfer_args.behavior, "Behavior log file")->check(CLI::ExistingFile);
  transfer_cmd->add_option("--policy", transfer_args.policy, "Behavior filter: strict, relaxed or none")
      ->capture_default_str()
      ->check(CLI::IsMember({"strict", "relaxed", "none"}));
  transfer_cmd->add_option("--positives", transfer_args.positives, "Clicked pairs appended with label 1.0")
      ->check(CLI::ExistingFile);
  transfer_cmd->add_option("--out", transfer_args.out, "Transfer set file to write")->required();
  transfer_cmd->add_flag("--assume-sorted", transfer_args.assume_sorted,
                         "Inputs are already sorted by (query, title); skip the external sort");
  transfer_cmd->add_option("--sort-run-lines", transfer_args.sort_run_lines, "Lines per in-memory sort run")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  transfer_cmd->add_option("--temp-dir", transfer_args.temp_dir, "Directory for sort runs (default: system temp)");

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand(
      "train",
      "Train a student on a transfer set with Adagrad and sigmoid cross entropy.\n"
      "Writes a B2DNN1 checkpoint (vocab included) and an epoch<TAB>mean_loss log.");
  train_cmd->add_option("--transfer", train_args.transfer, "Transfer set file")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--vocab", train_args.vocab, "Vocab file")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--topology", train_args.topology, "fully_connected or deep_dot")
      ->capture_default_str()
      ->check(CLI::IsMember({"fully_connected", "fc", "deep_dot", "dd"}));
  train_cmd->add_option("--hidden", train_args.hidden, "Hidden layer sizes, comma separated")
      ->delimiter(',')
      ->capture_default_str();
  train_cmd->add_option("--dim", train_args.dim, "Embedding dimension")->capture_default_str()->check(CLI::PositiveNumber);
  train_cmd->add_option("--lr", train_args.learning_rate, "Adagrad learning rate")->capture_default_str()->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--epochs", train_args.epochs, "Passes over the data")->capture_default_str()->check(CLI::PositiveNumber);
  train_cmd->add_option("--batch-size", train_args.batch_size, "Mini-batch size")->capture_default_str()->check(CLI::PositiveNumber);
  train_cmd->add_option("--seed", train_args.seed, "Initialisation and shuffle seed")->capture_default_str();
  train_cmd->add_option("--out", train_args.out, "Checkpoint to write")->required();
  train_cmd->add_option("--loss-log", train_args.loss_log, "Loss log path (default <out>.loss.tsv)");

  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand(
      "eval",
      "Score a labeled file and report AUC/Acc/Pr/Rc/F1 (labels binarized at 0.5),\n"
      "PCC against raw labels, and score/label mean and variance.\n"
      "Labeled file: query<TAB>title<TAB>label, label in [0,1].\n"
      "Report: flat key=value lines.");
  eval_cmd->add_option("--checkpoint", eval_args.checkpoint, "Student checkpoint")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--labeled", eval_args.labeled, "Labeled pairs")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--out", eval_args.out, "Report file (also printed)");
  eval_cmd->add_option("--threshold", eval_args.threshold, "Positive iff score >= threshold")->capture_default_str();

  BenchArgs bench_args;
  auto* bench_cmd = app.add_subcommand(
      "bench",
      "Time tokenize/embed/forward over batches of corpus pairs (warmup excluded).\n"
      "Report: flat key=value lines; --tsv appends one machine-readable row.");
  bench_cmd->add_option("--checkpoint", bench_args.checkpoint, "Student checkpoint")->required()->check(CLI::ExistingFile);
  bench_cmd->add_option("--corpus", bench_args.corpus, "Text-pair corpus (cycled if short)")->required()->check(CLI::ExistingFile);
  bench_cmd->add_option("--batches", bench_args.batches, "Timed batches")->capture_default_str()->check(CLI::PositiveNumber);
  bench_cmd->add_option("--batch-size", bench_args.batch_size, "Examples per batch")->capture_default_str()->check(CLI::PositiveNumber);
  bench_cmd->add_option("--warmup", bench_args.warmup, "Untimed warmup batches")->capture_default_str();
  bench_cmd->add_option("--threads", bench_args.threads, "Scoring threads")->capture_default_str()->check(CLI::PositiveNumber);
  bench_cmd->add_option("--tsv", bench_args.tsv, "Append a tabular result row to this file");

  EmbedDistArgs dist_args;
  auto* dist_cmd = app.add_subcommand(
      "embed-dist", "Print cosine (1 - cos), euclidean and manhattan distances between two sentence embeddings.");
  dist_cmd->add_option("--checkpoint", dist_args.checkpoint, "Student checkpoint")->required()->check(CLI::ExistingFile);
  dist_cmd->add_option("text_a", dist_args.text_a, "First text")->required();
  dist_cmd->add_option("text_b", dist_args.text_b, "Second text")->required();

  HeatmapArgs heat_args;
  auto* heat_cmd = app.add_subcommand(
      "embed-heatmap",
      "Write sentence embeddings of texts (one per line) as TSV: header text<TAB>e0..e{dim-1}.");
  heat_cmd->add_option("--checkpoint", heat_args.checkpoint, "Student checkpoint")->required()->check(CLI::ExistingFile);
  heat_cmd->add_option("--texts", heat_args.texts, "File with one text per line")->required()->check(CLI::ExistingFile);
  heat_cmd->add_option("--out", heat_args.out, "TSV to write")->required();

  SynthArgs synth_args;
  auto* synth_cmd = app.add_subcommand(
      "synth-teacher",
      "Generate a synthetic fixture: corpus.tsv, teacher_<k>.tsv (logits), heldout.tsv (labels).");
  synth_cmd->group("");  // hidden
  SynthOptions& so = synth_args.options;
  synth_cmd->add_option("--out-dir", synth_args.out_dir, "Output directory")->required();
  synth_cmd->add_option("--words", so.words, "Word inventory size")->capture_default_str();
  synth_cmd->add_option("--pairs", so.pairs, "Training pairs")->capture_default_str();
  synth_cmd->add_option("--heldout", so.heldout, "Held-out pairs")->capture_default_str();
  synth_cmd->add_option("--teachers", so.teachers, "Number of teachers")->capture_default_str();
  synth_cmd->add_option("--teacher-noise", so.teacher_noise, "Per-teacher weight noise")->capture_default_str();
  synth_cmd->add_option("--logit-scale", so.logit_scale, "Teacher logit scale")->capture_default_str();
  synth_cmd->add_option("--cjk-fraction", so.cjk_fraction, "Share of CJK single-character words")->capture_default_str();
  synth_cmd->add_option("--seed", so.seed, "Generator seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : ExitCodeFor(ErrorKind::kUsage);
  }

  try {
    for (const CLI::App* sub : app.get_subcommands()) LogResolvedConfig(ctx, *sub);
    if (vocab_cmd->parsed()) RunBuildVocab(ctx, vocab_args);
    if (transfer_cmd->parsed()) RunMakeTransfer(ctx, transfer_args);
    if (train_cmd->parsed()) return RunTrain(ctx, train_args);
    if (eval_cmd->parsed()) RunEval(ctx, eval_args);
    if (bench_cmd->parsed()) RunBenchCommand(ctx, bench_args);
    if (dist_cmd->parsed()) RunEmbedDist(ctx, dist_args);
    if (heat_cmd->parsed()) RunHeatmap(ctx, heat_args);
    if (synth_cmd->parsed()) RunSynth(ctx, synth_args);
  } catch (const Error& e) {
    ctx.log() << "error (" << ErrorKindName(e.kind()) << "): " << e.what() << '\n';
    return ExitCodeFor(e.kind());
  } catch (const std::exception& e) {
    ctx.log() << "error: " << e.what() << '\n';
    return ExitCodeFor(ErrorKind::kIo);
  }
  return 0;
}

}  // namespace tinyrel
