// Copyright 2026 The streamlda Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "commands.hpp"

#include <signal.h>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "streamlda/cdf.hpp"
#include "streamlda/corpus.hpp"
#include "streamlda/dsgs.hpp"
#include "streamlda/eval.hpp"
#include "streamlda/metrics.hpp"
#include "streamlda/sampler.hpp"
#include "streamlda/server.hpp"
#include "streamlda/stats.hpp"
#include "streamlda/streaming.hpp"
#include "streamlda/synth.hpp"
#include "streamlda/worker.hpp"

namespace streamlda::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

struct CommonFlags {
  std::string docword;
  std::string vocab;
  std::size_t topics = 50;
  double alpha = 0.1;
  double beta = 0.03;
  std::uint64_t seed = 1;
  std::string out = ".";

  json to_json() const {
    return {{"docword", docword}, {"vocab", vocab}, {"topics", topics}, {"alpha", alpha},
            {"beta", beta},       {"seed", seed},   {"out", out}};
  }
};

void add_model_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--topics", f.topics, "Number of topics K")->capture_default_str();
  cmd->add_option("--alpha", f.alpha, "Symmetric document-topic prior")->capture_default_str();
  cmd->add_option("--beta", f.beta, "Symmetric topic-word prior")->capture_default_str();
  cmd->add_option("--seed", f.seed, "Random seed")->capture_default_str();
}

void add_common_flags(CLI::App* cmd, CommonFlags& f, bool docword_required = true) {
  auto* d = cmd->add_option("--docword", f.docword, "UCI docword file");
  if (docword_required) d->required();
  cmd->add_option("--vocab", f.vocab, "UCI vocabulary file (optional)");
  add_model_flags(cmd, f);
  cmd->add_option("--out", f.out, "Output directory")->capture_default_str();
}

struct EvalFlags {
  std::size_t sweeps = 50;
  std::size_t tail = 20;
};

void add_eval_flags(CLI::App* cmd, EvalFlags& e) {
  cmd->add_option("--foldin-sweeps", e.sweeps, "Fold-in Gibbs sweeps per test document")
      ->capture_default_str();
  cmd->add_option("--foldin-tail", e.tail, "Trailing sweeps averaged into theta")
      ->capture_default_str();
}

Corpus load_corpus(const CommonFlags& f) {
  if (f.vocab.empty()) return load_uci(f.docword);
  return load_uci(f.docword, fs::path(f.vocab));
}

Hyper make_hyper(const CommonFlags& f, std::size_t vocab_size) {
  Hyper h{f.alpha, f.beta, f.topics, vocab_size};
  h.validate();
  return h;
}

fs::path ensure_out_dir(const std::string& out) {
  fs::path dir(out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create output directory " + out + ": " + ec.message());
  return dir;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

json fingerprint_json(const Corpus& corpus) {
  const auto fp = fingerprint(corpus);
  std::ostringstream hex;
  hex << std::hex << std::setw(16) << std::setfill('0') << fp.checksum;
  return {{"docs", fp.num_docs}, {"tokens", fp.num_tokens}, {"checksum", hex.str()}};
}

// Records what ran and how; written for every command.
class Manifest {
 public:
  Manifest(std::string command, json flags)
      : command_(std::move(command)), flags_(std::move(flags)), start_(utc_now()) {}

  void set_corpus(const Corpus& corpus) { corpus_ = fingerprint_json(corpus); }
  void add(const std::string& key, json value) { extra_[key] = std::move(value); }

  void write(const fs::path& dir) const {
    json m = {{"command", command_}, {"flags", flags_},     {"seed", flags_.value("seed", json())},
              {"corpus", corpus_},   {"start_time", start_}, {"end_time", utc_now()}};
    for (const auto& [k, v] : extra_.items()) m[k] = v;
    auto out = open_output(dir / "manifest.json");
    out << m.dump(2) << '\n';
  }

 private:
  std::string command_;
  json flags_;
  json corpus_;
  json extra_ = json::object();
  std::string start_;
};

void write_model(const fs::path& path, const GlobalStats& stats, const Hyper& hyper) {
  auto out = open_output(path);
  write_checkpoint(out, stats, hyper);
}

struct Split {
  Corpus train;
  std::optional<Corpus> test;
};

Split split_for_training(const Corpus& corpus, double test_fraction, std::uint64_t seed) {
  if (test_fraction == 0.0) return {corpus, std::nullopt};
  auto [train, test] = split_train_test(corpus, test_fraction, derive_seed(seed, 0x5e11));
  return {std::move(train), std::move(test)};
}

std::optional<PerplexityReport> evaluate_if_possible(const GlobalStats& stats, const Hyper& hyper,
                                                     const std::optional<Corpus>& test,
                                                     const EvalConfig& config) {
  if (!test) return std::nullopt;
  try {
    return evaluate_perplexity(phi_mean_matrix(stats, hyper), test->documents, hyper, config);
  } catch (const std::invalid_argument&) {
    return std::nullopt;  // no held-out tokens
  }
}

void finish_eval(const fs::path& dir, const std::optional<PerplexityReport>& report,
                 Manifest& manifest) {
  if (!report) return;
  auto out = open_output(dir / "eval.csv");
  write_eval_csv(out, *report);
  manifest.add("heldout_perplexity", report->perplexity);
  manifest.add("mean_doc_perplexity", report->mean_doc_perplexity);
  std::cout << "held-out perplexity: " << report->perplexity << " (" << report->heldout_tokens
            << " tokens)\n";
}

struct StreamFlags {
  std::size_t batch_size = 100;
  double decay = 1.0;
  std::size_t patience = 10;
  std::size_t max_iters = 400;
  bool shuffle = false;
  double test_fraction = 0.2;
  bool batch_eval = true;
  bool checkpoint_each_batch = false;
};

StreamConfig make_stream_config(const Hyper& hyper, const StreamFlags& s, std::uint64_t seed) {
  StreamConfig c;
  c.hyper = hyper;
  c.batch_size = s.batch_size;
  c.decay = s.decay;
  c.max_iters = s.max_iters;
  c.patience = s.patience == 0 ? std::nullopt : std::optional<std::size_t>(s.patience);
  c.seed = seed;
  c.validate();
  return c;
}

void check_test_fraction(double f) {
  if (!(f == 0.0 || (f > 0.0 && f < 1.0))) {
    throw std::invalid_argument("--test-fraction must be 0 or lie in (0, 1)");
  }
}

// train-cgs
int cmd_train_cgs(const CommonFlags& f, std::size_t iters, double test_fraction,
                  const EvalFlags& ef) {
  check_test_fraction(test_fraction);
  if (iters < 1) throw std::invalid_argument("--iters must be >= 1");
  json flags = f.to_json();
  flags["iters"] = iters;
  flags["test_fraction"] = test_fraction;
  flags["foldin_sweeps"] = ef.sweeps;
  flags["foldin_tail"] = ef.tail;
  Manifest manifest("train-cgs", flags);
  const EvalConfig eval_config{ef.sweeps, ef.tail, f.seed};
  eval_config.validate();

  const Corpus corpus = load_corpus(f);
  manifest.set_corpus(corpus);
  const Hyper hyper = make_hyper(f, corpus.vocab.size());
  const fs::path dir = ensure_out_dir(f.out);
  const Split split = split_for_training(corpus, test_fraction, f.seed);

  Rng rng(f.seed);
  const auto start = std::chrono::steady_clock::now();
  auto result = run_cgs(split.train, iters, hyper, rng);
  BatchReport report;
  report.batch_index = 1;
  report.iterations = iters;
  report.num_docs = split.train.num_docs();
  report.num_tokens = split.train.num_tokens();
  report.resident_docs = report.num_docs;
  if (report.num_tokens > 0) {
    MiniBatch all{split.train.documents, 1};
    report.train_perplexity.push_back(train_perplexity(result.stats, result.state, all, hyper));
  }
  report.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  write_model(dir / "model.txt", result.stats, hyper);
  const auto eval_report = evaluate_if_possible(result.stats, hyper, split.test, eval_config);
  if (eval_report) report.heldout_perplexity = eval_report->perplexity;
  {
    auto csv = open_output(dir / "metrics.csv");
    auto jsonl = open_output(dir / "metrics.jsonl");
    MetricsWriter(&csv, &jsonl).write(report);
  }
  finish_eval(dir, eval_report, manifest);
  manifest.write(dir);
  return kOk;
}

// train-sgs
int cmd_train_sgs(const CommonFlags& f, const StreamFlags& s, const EvalFlags& ef) {
  check_test_fraction(s.test_fraction);
  json flags = f.to_json();
  flags.update({{"batch_size", s.batch_size}, {"decay", s.decay}, {"patience", s.patience},
                {"max_iters", s.max_iters}, {"shuffle", s.shuffle},
                {"test_fraction", s.test_fraction}, {"batch_eval", s.batch_eval},
                {"checkpoint_each_batch", s.checkpoint_each_batch},
                {"foldin_sweeps", ef.sweeps}, {"foldin_tail", ef.tail}});
  Manifest manifest("train-sgs", flags);
  // Validate flags before touching data.
  make_stream_config(Hyper{f.alpha, f.beta, f.topics, 1}, s, f.seed);
  const EvalConfig eval_config{ef.sweeps, ef.tail, f.seed};
  eval_config.validate();

  Corpus corpus = load_corpus(f);
  manifest.set_corpus(corpus);
  const Hyper hyper = make_hyper(f, corpus.vocab.size());
  const StreamConfig config = make_stream_config(hyper, s, f.seed);
  const fs::path dir = ensure_out_dir(f.out);
  Split split = split_for_training(corpus, s.test_fraction, f.seed);
  if (s.shuffle) split.train = shuffled(split.train, derive_seed(f.seed, 0x5fff));

  auto csv = open_output(dir / "metrics.csv");
  auto jsonl = open_output(dir / "metrics.jsonl");
  MetricsWriter metrics(&csv, &jsonl);
  BatchEvaluator evaluator;
  if (split.test && s.batch_eval) {
    evaluator = [&](const MiniBatch&, const GlobalStats& stats) -> std::optional<double> {
      const auto r = evaluate_if_possible(stats, hyper, split.test, eval_config);
      if (!r) return std::nullopt;
      return r->perplexity;
    };
  }
  std::size_t batches = 0;
  auto sink = [&](const BatchReport& report, const GlobalStats& stats) {
    ++batches;
    metrics.write(report);
    if (s.checkpoint_each_batch) {
      write_model(dir / ("model-" + std::to_string(report.batch_index) + ".txt"), stats, hyper);
    }
  };
  Rng rng(f.seed);
  const GlobalStats stats = run_sgs(batch_source(split.train, config.batch_size), config, rng, sink,
                                    evaluator);
  write_model(dir / "model.txt", stats, hyper);
  manifest.add("batches", batches);
  finish_eval(dir, evaluate_if_possible(stats, hyper, split.test, eval_config), manifest);
  manifest.write(dir);
  return kOk;
}

// train-cdf
int cmd_train_cdf(const CommonFlags& f, std::size_t batch_size, double test_fraction,
                  const EvalFlags& ef) {
  check_test_fraction(test_fraction);
  if (batch_size < 1) throw std::invalid_argument("--batch-size must be >= 1");
  json flags = f.to_json();
  flags.update({{"batch_size", batch_size}, {"test_fraction", test_fraction},
                {"foldin_sweeps", ef.sweeps}, {"foldin_tail", ef.tail}});
  Manifest manifest("train-cdf", flags);
  const EvalConfig eval_config{ef.sweeps, ef.tail, f.seed};
  eval_config.validate();

  const Corpus corpus = load_corpus(f);
  manifest.set_corpus(corpus);
  const Hyper hyper = make_hyper(f, corpus.vocab.size());
  const fs::path dir = ensure_out_dir(f.out);
  const Split split = split_for_training(corpus, test_fraction, f.seed);

  auto csv = open_output(dir / "metrics.csv");
  auto jsonl = open_output(dir / "metrics.jsonl");
  MetricsWriter metrics(&csv, &jsonl);
  BatchEvaluator evaluator;
  if (split.test) {
    evaluator = [&](const MiniBatch&, const GlobalStats& stats) -> std::optional<double> {
      const auto r = evaluate_if_possible(stats, hyper, split.test, eval_config);
      if (!r) return std::nullopt;
      return r->perplexity;
    };
  }
  Rng rng(f.seed);
  const CdfState state = run_cdf_lda(
      batch_source(split.train, batch_size), hyper, rng,
      [&](const BatchReport& r, const GlobalStats&) { metrics.write(r); }, evaluator);
  write_model(dir / "model.txt", state.nkv_hat, hyper);
  finish_eval(dir, evaluate_if_possible(state.nkv_hat, hyper, split.test, eval_config), manifest);
  manifest.write(dir);
  return kOk;
}

// eval
int cmd_eval(const std::string& model, const CommonFlags& f, const EvalFlags& ef) {
  json flags = f.to_json();
  flags.update({{"model", model}, {"foldin_sweeps", ef.sweeps}, {"foldin_tail", ef.tail}});
  Manifest manifest("eval", flags);
  const EvalConfig eval_config{ef.sweeps, ef.tail, f.seed};
  eval_config.validate();

  std::ifstream in(model);
  if (!in) throw DataError("cannot open " + model);
  const Checkpoint checkpoint = read_checkpoint(in);
  const Corpus corpus = load_corpus(f);
  manifest.set_corpus(corpus);
  for (const auto& d : corpus.documents) {
    for (WordId v : d.tokens) {
      if (v >= checkpoint.hyper.vocab_size) {
        throw DataError("test corpus word " + std::to_string(v + 1) +
                        " outside the model vocabulary");
      }
    }
  }
  const fs::path dir = ensure_out_dir(f.out);
  const auto report = evaluate_perplexity(phi_mean_matrix(checkpoint.stats, checkpoint.hyper),
                                          corpus.documents, checkpoint.hyper, eval_config);
  finish_eval(dir, report, manifest);
  manifest.write(dir);
  return kOk;
}

// serve
struct ServeFlags {
  std::string bind = "0.0.0.0:7070";
  std::size_t topics = 50;
  std::size_t vocab = 0;
  double alpha = 0.1;
  double beta = 0.03;
  double decay = 1.0;
  std::size_t max_pushes = 0;
  std::string out;
};

int cmd_serve(const ServeFlags& s) {
  const Hyper hyper{s.alpha, s.beta, s.topics, s.vocab};
  hyper.validate();
  if (!(s.decay > 0.0 && s.decay <= 1.0)) throw std::invalid_argument("--decay must lie in (0, 1]");
  json flags = {{"bind", s.bind},   {"topics", s.topics}, {"vocab", s.vocab},
                {"alpha", s.alpha}, {"beta", s.beta},     {"decay", s.decay},
                {"max_pushes", s.max_pushes}, {"out", s.out}};
  Manifest manifest("serve", flags);

  // Block termination signals before any thread starts so sigwait sees them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  ParameterServer server(hyper, s.decay);
  TcpServer tcp(server, net::parse_endpoint(s.bind));
  std::cout << "listening on port " << tcp.port() << std::endl;
  if (s.max_pushes > 0) {
    server.wait_for_merges(s.max_pushes);
  } else {
    int received = 0;
    sigwait(&signals, &received);
  }
  tcp.stop();
  std::cout << "applied " << server.merge_count() << " pushes\n";
  if (!s.out.empty()) {
    const fs::path dir = ensure_out_dir(s.out);
    write_model(dir / "model.txt", server.stats(), hyper);
    manifest.add("pushes", server.merge_count());
    manifest.write(dir);
  }
  return kOk;
}

// worker
struct WorkerFlags {
  std::string server;
  std::string data;
  std::string vocab;
  std::size_t batch_size = 100;
  std::uint64_t seed = 1;
  double alpha = 0.1;
  double beta = 0.03;
  std::size_t max_iters = 400;
  std::size_t patience = 10;
  std::string out;
};

int cmd_worker(const WorkerFlags& w) {
  json flags = {{"server", w.server}, {"data", w.data},        {"vocab", w.vocab},
                {"batch_size", w.batch_size}, {"seed", w.seed}, {"alpha", w.alpha},
                {"beta", w.beta}, {"max_iters", w.max_iters}, {"patience", w.patience},
                {"out", w.out}};
  Manifest manifest("worker", flags);
  const auto endpoint = net::parse_endpoint(w.server);
  const Corpus corpus = w.vocab.empty() ? load_uci(w.data) : load_uci(w.data, fs::path(w.vocab));
  manifest.set_corpus(corpus);

  // K and V come from the server.
  const wire::Snapshot snap = ServerClient(endpoint).fetch();
  const Hyper hyper{w.alpha, w.beta, snap.num_topics, snap.vocab_size};
  StreamFlags sf;
  sf.batch_size = w.batch_size;
  sf.max_iters = w.max_iters;
  sf.patience = w.patience;
  const StreamConfig config = make_stream_config(hyper, sf, w.seed);
  for (const auto& d : corpus.documents) {
    for (WordId v : d.tokens) {
      if (v >= hyper.vocab_size) throw DataError("word ID exceeds the server vocabulary");
    }
  }

  std::unique_ptr<std::ofstream> csv;
  std::optional<MetricsWriter> metrics;
  std::optional<fs::path> dir;
  if (!w.out.empty()) {
    dir = ensure_out_dir(w.out);
    csv = std::make_unique<std::ofstream>(open_output(*dir / "metrics.csv"));
    metrics.emplace(csv.get(), nullptr);
  }
  Rng rng(w.seed);
  const auto summary = worker_run(endpoint, batch_source(corpus, config.batch_size), config, rng,
                                  [&](const BatchReport& r, const GlobalStats&) {
                                    if (metrics) metrics->write(r);
                                  });
  std::cout << "pushed " << summary.batches_pushed << " batches, " << summary.tokens
            << " tokens, " << summary.batches_failed << " failed\n";
  if (dir) {
    manifest.add("batches_pushed", summary.batches_pushed);
    manifest.add("batches_failed", summary.batches_failed);
    manifest.write(*dir);
  }
  return summary.batches_failed == 0 ? kOk : kRuntimeError;
}

// bench
struct BenchFlags {
  std::string workers = "1,2,4";
  std::size_t batch_size = 100;
  std::size_t iters = 20;
  std::size_t synth_docs = 2000;
  std::size_t synth_vocab = 1000;
  double synth_length = 100.0;
};

std::vector<std::size_t> parse_worker_counts(const std::string& text) {
  std::vector<std::size_t> counts;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      const long n = std::stol(item);
      if (n < 1) throw std::invalid_argument("");
      counts.push_back(static_cast<std::size_t>(n));
    } catch (const std::exception&) {
      throw std::invalid_argument("--workers must be a comma-separated list of positive counts");
    }
  }
  if (counts.empty()) throw std::invalid_argument("--workers is empty");
  return counts;
}

int cmd_bench(const CommonFlags& f, const BenchFlags& b) {
  const auto counts = parse_worker_counts(b.workers);
  json flags = f.to_json();
  flags.update({{"workers", b.workers}, {"batch_size", b.batch_size}, {"iters", b.iters},
                {"synth_docs", b.synth_docs}, {"synth_vocab", b.synth_vocab},
                {"synth_length", b.synth_length}});
  Manifest manifest("bench", flags);

  Corpus corpus;
  if (f.docword.empty()) {
    GenSpec spec;
    spec.num_docs = b.synth_docs;
    spec.num_topics = f.topics;
    spec.vocab_size = b.synth_vocab;
    spec.mean_doc_length = b.synth_length;
    spec.seed = f.seed;
    corpus = generate(spec).corpus;
  } else {
    corpus = load_corpus(f);
  }
  manifest.set_corpus(corpus);
  const Hyper hyper = make_hyper(f, corpus.vocab.size());
  StreamFlags sf;
  sf.batch_size = b.batch_size;
  sf.max_iters = b.iters;
  sf.patience = 0;  // fixed work per batch
  const StreamConfig config = make_stream_config(hyper, sf, f.seed);
  const fs::path dir = ensure_out_dir(f.out);

  auto csv = open_output(dir / "bench.csv");
  const std::string header = "workers,tokens,seconds,tokens_per_sec,ideal_tokens_per_sec,speedup";
  csv << header << '\n';
  std::cout << header << '\n';
  double single = 0.0;
  json rows = json::array();
  for (std::size_t workers : counts) {
    const auto result = run_local_dsgs(shard_corpus(corpus, workers), config, false);
    const double tps = result.tokens_per_sec();
    if (single == 0.0) single = workers == 1 ? tps : tps / static_cast<double>(workers);
    const double ideal = single * static_cast<double>(workers);
    std::ostringstream line;
    line << workers << ',' << result.tokens << ',' << result.seconds << ',' << tps << ',' << ideal
         << ',' << tps / single;
    csv << line.str() << '\n';
    std::cout << line.str() << '\n';
    rows.push_back({{"workers", workers}, {"tokens_per_sec", tps}, {"ideal", ideal}});
  }
  manifest.add("results", rows);
  manifest.write(dir);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Streaming Gibbs sampling for LDA"};
  app.require_subcommand(1);

  CommonFlags common;
  EvalFlags eval_flags;

  auto* cgs = app.add_subcommand("train-cgs", "Batch collapsed Gibbs sampling");
  add_common_flags(cgs, common);
  add_eval_flags(cgs, eval_flags);
  std::size_t cgs_iters = 400;
  double cgs_test_fraction = 0.2;
  cgs->add_option("--iters", cgs_iters, "Iterations (the first is progressive initialization)")
      ->capture_default_str();
  cgs->add_option("--test-fraction", cgs_test_fraction, "Fraction of documents held out (0: none)")
      ->capture_default_str();

  StreamFlags stream_flags;
  auto* sgs = app.add_subcommand("train-sgs", "Streaming Gibbs sampling over mini-batches");
  add_common_flags(sgs, common);
  add_eval_flags(sgs, eval_flags);
  sgs->add_option("--batch-size", stream_flags.batch_size, "Documents per mini-batch")
      ->capture_default_str();
  sgs->add_option("--decay", stream_flags.decay, "Decay factor lambda in (0, 1]")
      ->capture_default_str();
  sgs->add_option("--patience", stream_flags.patience,
                  "Stop after this many non-improving iterations (0 disables)")
      ->capture_default_str();
  sgs->add_option("--max-iters", stream_flags.max_iters, "Iteration cap per mini-batch")
      ->capture_default_str();
  sgs->add_flag("--shuffle", stream_flags.shuffle, "Shuffle training documents (seeded)");
  sgs->add_option("--test-fraction", stream_flags.test_fraction,
                  "Fraction of documents held out (0: none)")
      ->capture_default_str();
  sgs->add_flag("!--no-batch-eval", stream_flags.batch_eval,
                "Skip held-out evaluation after each mini-batch");
  sgs->add_flag("--checkpoint-each-batch", stream_flags.checkpoint_each_batch,
                "Write model-<t>.txt after every mini-batch");

  auto* cdf = app.add_subcommand("train-cdf", "CDF-LDA baseline, one document at a time");
  add_common_flags(cdf, common);
  add_eval_flags(cdf, eval_flags);
  std::size_t cdf_batch = 100;
  double cdf_test_fraction = 0.2;
  cdf->add_option("--batch-size", cdf_batch, "Documents per reporting batch")->capture_default_str();
  cdf->add_option("--test-fraction", cdf_test_fraction, "Fraction of documents held out (0: none)")
      ->capture_default_str();

  auto* ev = app.add_subcommand("eval", "Held-out perplexity of a checkpoint on a test corpus");
  add_common_flags(ev, common);
  add_eval_flags(ev, eval_flags);
  std::string model_path;
  ev->add_option("--model", model_path, "Model checkpoint")->required();

  ServeFlags serve_flags;
  auto* serve = app.add_subcommand("serve", "Run the parameter server");
  serve->add_option("--bind", serve_flags.bind, "host:port")->capture_default_str();
  serve->add_option("--topics", serve_flags.topics, "Number of topics K")->capture_default_str();
  serve->add_option("--vocab", serve_flags.vocab, "Vocabulary size V")->required();
  serve->add_option("--alpha", serve_flags.alpha)->capture_default_str();
  serve->add_option("--beta", serve_flags.beta)->capture_default_str();
  serve->add_option("--decay", serve_flags.decay, "Decay factor applied per push")
      ->capture_default_str();
  serve->add_option("--max-pushes", serve_flags.max_pushes,
                    "Exit after this many pushes (0: run until SIGINT/SIGTERM)")
      ->capture_default_str();
  serve->add_option("--out", serve_flags.out, "Directory for the final checkpoint");

  WorkerFlags worker_flags;
  auto* worker = app.add_subcommand("worker", "Run a streaming worker against a server");
  worker->add_option("--server", worker_flags.server, "host:port")->required();
  worker->add_option("--data", worker_flags.data, "UCI docword file")->required();
  worker->add_option("--vocab", worker_flags.vocab, "UCI vocabulary file (optional)");
  worker->add_option("--batch-size", worker_flags.batch_size)->capture_default_str();
  worker->add_option("--seed", worker_flags.seed)->capture_default_str();
  worker->add_option("--alpha", worker_flags.alpha)->capture_default_str();
  worker->add_option("--beta", worker_flags.beta)->capture_default_str();
  worker->add_option("--max-iters", worker_flags.max_iters)->capture_default_str();
  worker->add_option("--patience", worker_flags.patience, "0 disables early stopping")
      ->capture_default_str();
  worker->add_option("--out", worker_flags.out, "Directory for per-batch metrics");

  BenchFlags bench_flags;
  auto* bench = app.add_subcommand("bench", "Tokens/sec of local DSGS for several worker counts");
  add_common_flags(bench, common, false);
  bench->add_option("--workers", bench_flags.workers, "Comma-separated worker counts")
      ->capture_default_str();
  bench->add_option("--batch-size", bench_flags.batch_size)->capture_default_str();
  bench->add_option("--iters", bench_flags.iters, "Fixed iterations per mini-batch")
      ->capture_default_str();
  bench->add_option("--synth-docs", bench_flags.synth_docs, "Synthetic corpus size without --docword")
      ->capture_default_str();
  bench->add_option("--synth-vocab", bench_flags.synth_vocab)->capture_default_str();
  bench->add_option("--synth-length", bench_flags.synth_length)->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*cgs) return cmd_train_cgs(common, cgs_iters, cgs_test_fraction, eval_flags);
    if (*sgs) return cmd_train_sgs(common, stream_flags, eval_flags);
    if (*cdf) return cmd_train_cdf(common, cdf_batch, cdf_test_fraction, eval_flags);
    if (*ev) return cmd_eval(model_path, common, eval_flags);
    if (*serve) return cmd_serve(serve_flags);
    if (*worker) return cmd_worker(worker_flags);
    if (*bench) return cmd_bench(common, bench_flags);
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kUsage;
}

}  // namespace streamlda::cli
