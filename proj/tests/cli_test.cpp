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

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "commands.hpp"
#include "doctest.h"
#include "json.hpp"
#include "streamlda/net.hpp"
#include "streamlda/stats.hpp"
#include "streamlda/synth.hpp"

using namespace streamlda;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("streamlda_cli_test_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t line_count(const fs::path& p) {
  const std::string s = slurp(p);
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

int run(std::vector<std::string> args) { return cli::run(args); }

// Small corpus written once per test case.
struct Fixture {
  TempDir tmp;
  std::string docword, vocab;
  std::size_t docs = 40;

  Fixture() {
    GenSpec spec;
    spec.num_docs = docs;
    spec.num_topics = 3;
    spec.vocab_size = 30;
    spec.mean_doc_length = 20;
    spec.seed = 5;
    docword = (tmp.path / "docword.txt").string();
    vocab = (tmp.path / "vocab.txt").string();
    save_uci(generate(spec).corpus, docword, vocab);
  }

  std::string out(const std::string& name) const { return (tmp.path / name).string(); }

  std::vector<std::string> common(const std::string& out_dir) const {
    return {"--docword", docword, "--vocab", vocab, "--topics", "3", "--out", out_dir};
  }

  std::vector<std::string> cmd(const std::string& name, const std::string& out_dir,
                               std::vector<std::string> extra = {}) const {
    std::vector<std::string> args{name};
    for (auto& a : common(out_dir)) args.push_back(a);
    for (auto& a : extra) args.push_back(a);
    return args;
  }
};

}  // namespace

TEST_CASE("usage errors") {
  CHECK(run({}) == cli::kUsage);
  CHECK(run({"no-such-command"}) == cli::kUsage);
  CHECK(run({"train-cgs"}) == cli::kUsage);  // --docword missing
  CHECK(run({"--help"}) == cli::kOk);
}

TEST_CASE("missing docword file") {
  TempDir tmp;
  const std::string missing = (tmp.path / "nope.txt").string();
  CHECK(run({"train-cgs", "--docword", missing, "--out", tmp.path.string()}) == cli::kDataError);
}

TEST_CASE("train-cgs writes its outputs deterministically") {
  Fixture fx;
  const std::string a = fx.out("a"), b = fx.out("b");
  REQUIRE(run(fx.cmd("train-cgs", a, {"--iters", "20"})) == cli::kOk);
  REQUIRE(run(fx.cmd("train-cgs", b, {"--iters", "20"})) == cli::kOk);
  for (const char* f : {"model.txt", "metrics.csv", "metrics.jsonl", "eval.csv", "manifest.json"})
    CHECK(fs::exists(fs::path(a) / f));
  CHECK(slurp(fs::path(a) / "model.txt") == slurp(fs::path(b) / "model.txt"));

  const auto manifest = nlohmann::json::parse(slurp(fs::path(a) / "manifest.json"));
  CHECK(manifest["command"] == "train-cgs");
  CHECK(manifest["seed"] == 1);
  CHECK(manifest["flags"]["topics"] == 3);
  CHECK(manifest["flags"]["alpha"] == 0.1);
  CHECK(manifest["flags"]["beta"] == 0.03);
  CHECK(manifest["flags"]["iters"] == 20);
  CHECK(manifest["corpus"]["docs"] == fx.docs);
  CHECK(manifest.contains("start_time"));
  CHECK(manifest.contains("end_time"));
  CHECK(manifest["heldout_perplexity"].get<double>() > 1.0);
}

TEST_CASE("defaults are K=50, alpha=0.1, beta=0.03") {
  Fixture fx;
  const std::string dir = fx.out("defaults");
  REQUIRE(run({"train-cgs", "--docword", fx.docword, "--iters", "2", "--out", dir}) == cli::kOk);
  const auto manifest = nlohmann::json::parse(slurp(fs::path(dir) / "manifest.json"));
  CHECK(manifest["flags"]["topics"] == 50);
  CHECK(manifest["flags"]["alpha"] == 0.1);
  CHECK(manifest["flags"]["beta"] == 0.03);
  std::ifstream model(fs::path(dir) / "model.txt");
  CHECK(read_checkpoint(model).hyper.num_topics == 50);
}

TEST_CASE("train-sgs with one whole batch reproduces train-cgs") {
  Fixture fx;
  const std::string cgs = fx.out("cgs"), sgs = fx.out("sgs");
  REQUIRE(run(fx.cmd("train-cgs", cgs, {"--iters", "15"})) == cli::kOk);
  REQUIRE(run(fx.cmd("train-sgs", sgs,
                     {"--decay", "1.0", "--batch-size", "1000", "--patience", "0", "--max-iters",
                      "15"})) == cli::kOk);
  CHECK(slurp(fs::path(cgs) / "model.txt") == slurp(fs::path(sgs) / "model.txt"));
}

TEST_CASE("train-sgs metrics and validation") {
  Fixture fx;
  const std::string dir = fx.out("sgs");
  // 32 training documents after the 20% split, batches of 10
  REQUIRE(run(fx.cmd("train-sgs", dir, {"--batch-size", "10", "--max-iters", "20",
                                        "--checkpoint-each-batch"})) == cli::kOk);
  CHECK(line_count(fs::path(dir) / "metrics.csv") == 1 + 4);
  CHECK(line_count(fs::path(dir) / "metrics.jsonl") == 4);
  CHECK(fs::exists(fs::path(dir) / "model-4.txt"));
  const std::string csv = slurp(fs::path(dir) / "metrics.csv");
  CHECK(csv.find(",,") == std::string::npos);  // held-out column filled

  CHECK(run(fx.cmd("train-sgs", fx.out("bad"), {"--decay", "0"})) == cli::kUsage);
  CHECK(run(fx.cmd("train-sgs", fx.out("bad"), {"--decay", "1.5"})) == cli::kUsage);
  CHECK(run(fx.cmd("train-sgs", fx.out("bad"), {"--batch-size", "0"})) == cli::kUsage);
}

TEST_CASE("train-cdf") {
  Fixture fx;
  const std::string a = fx.out("a"), b = fx.out("b");
  REQUIRE(run(fx.cmd("train-cdf", a, {"--batch-size", "8"})) == cli::kOk);
  REQUIRE(run(fx.cmd("train-cdf", b, {"--batch-size", "8"})) == cli::kOk);
  CHECK(slurp(fs::path(a) / "model.txt") == slurp(fs::path(b) / "model.txt"));
  const std::string csv = slurp(fs::path(a) / "metrics.csv");
  CHECK(csv.rfind("t,iterations,docs,tokens,train_perplexity,heldout_perplexity,wall_ms,tokens_per_sec\n", 0) ==
        0);
  CHECK(line_count(fs::path(a) / "metrics.csv") == 1 + 4);
}

TEST_CASE("eval") {
  Fixture fx;
  SUBCASE("uniform checkpoint scores V") {
    const fs::path model = fx.tmp.path / "uniform.txt";
    {
      std::ofstream out(model);
      write_checkpoint(out, GlobalStats(3, 30), Hyper{0.1, 0.03, 3, 30});
    }
    const std::string dir = fx.out("eval");
    REQUIRE(run({"eval", "--model", model.string(), "--docword", fx.docword, "--out", dir}) ==
            cli::kOk);
    const auto manifest = nlohmann::json::parse(slurp(fs::path(dir) / "manifest.json"));
    CHECK(manifest["heldout_perplexity"].get<double>() == doctest::Approx(30.0).epsilon(1e-12));
    const std::string csv = slurp(fs::path(dir) / "eval.csv");
    CHECK(csv.rfind("doc_id,heldout_tokens,perplexity\n", 0) == 0);
  }
  SUBCASE("trained checkpoint") {
    const std::string train = fx.out("train");
    REQUIRE(run(fx.cmd("train-cgs", train, {"--iters", "10"})) == cli::kOk);
    CHECK(run({"eval", "--model", train + "/model.txt", "--docword", fx.docword, "--out",
               fx.out("e")}) == cli::kOk);
  }
  SUBCASE("missing checkpoint") {
    CHECK(run({"eval", "--model", fx.out("missing.txt"), "--docword", fx.docword, "--out",
               fx.out("e")}) == cli::kDataError);
  }
}

TEST_CASE("bench") {
  Fixture fx;
  const std::string dir = fx.out("bench");
  REQUIRE(run({"bench", "--workers", "1,2", "--synth-docs", "40", "--iters", "3", "--batch-size",
               "10", "--topics", "3", "--out", dir}) == cli::kOk);
  std::istringstream csv(slurp(fs::path(dir) / "bench.csv"));
  std::string header, row1, row2;
  std::getline(csv, header);
  std::getline(csv, row1);
  std::getline(csv, row2);
  CHECK(header == "workers,tokens,seconds,tokens_per_sec,ideal_tokens_per_sec,speedup");
  CHECK(row1.rfind("1,", 0) == 0);
  CHECK(row2.rfind("2,", 0) == 0);
  CHECK(fs::exists(fs::path(dir) / "manifest.json"));
}

TEST_CASE("serve and worker over loopback") {
  Fixture fx;
  std::uint16_t port;
  {
    net::Socket probe = net::listen_on({"127.0.0.1", 0});
    port = net::local_port(probe);
  }
  const std::string address = "127.0.0.1:" + std::to_string(port);
  const std::string server_out = fx.out("server"), worker_out = fx.out("worker");
  int serve_code = -1;
  std::thread server([&] {
    serve_code = run({"serve", "--bind", address, "--topics", "3", "--vocab", "30", "--decay",
                      "1.0", "--max-pushes", "4", "--out", server_out});
  });
  int worker_code = -1;
  for (int attempt = 0; attempt < 50 && worker_code != cli::kOk; ++attempt) {
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
    worker_code = run({"worker", "--server", address, "--data", fx.docword, "--batch-size", "10",
                       "--max-iters", "10", "--out", worker_out});
  }
  server.join();
  CHECK(worker_code == cli::kOk);
  CHECK(serve_code == cli::kOk);
  std::ifstream model(fs::path(server_out) / "model.txt");
  const Checkpoint c = read_checkpoint(model);
  double mass = 0.0;
  for (double x : c.stats.topic_totals()) mass += x;
  CHECK(mass == static_cast<double>(load_uci(fx.docword).num_tokens()));
  CHECK(line_count(fs::path(worker_out) / "metrics.csv") == 1 + 4);
}
