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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "streamlda/common.hpp"

namespace streamlda {

struct Vocabulary {
  std::vector<std::string> words;

  std::size_t size() const { return words.size(); }
};

struct Document {
  std::size_t id = 0;  // 0-based; the UCI docID minus one
  std::vector<WordId> tokens;

  std::size_t length() const { return tokens.size(); }
};

struct Corpus {
  std::vector<Document> documents;
  Vocabulary vocab;

  std::size_t num_docs() const { return documents.size(); }
  std::size_t num_tokens() const;
};

struct MiniBatch {
  std::vector<Document> docs;
  std::size_t index = 1;  // 1-based arrival order

  std::size_t num_tokens() const;
};

/// Parses a UCI bag-of-words docword stream and its vocabulary. Tokens of a
/// document are expanded word-index ascending, each repeated `count` times.
/// Documents that never appear in the triples are kept as empty documents.
Corpus parse_uci(std::istream& docword, std::istream& vocab);

/// Same as above with placeholder words "w<id>" for the vocabulary.
Corpus parse_uci(std::istream& docword);

/// File-path front end. Missing files raise DataError naming the path.
Corpus load_uci(const std::filesystem::path& docword,
                const std::optional<std::filesystem::path>& vocab = std::nullopt);

void write_uci(const Corpus& corpus, std::ostream& docword, std::ostream& vocab);
void save_uci(const Corpus& corpus, const std::filesystem::path& docword,
              const std::filesystem::path& vocab);

/// Document-level split driven by a seeded shuffle. The test side gets
/// floor(D * test_fraction) documents; both sides keep corpus order.
std::pair<Corpus, Corpus> split_train_test(const Corpus& corpus, double test_fraction,
                                           std::uint64_t seed);

/// Corpus with documents permuted by a seeded shuffle. Ids are preserved.
Corpus shuffled(const Corpus& corpus, std::uint64_t seed);

/// Chunks documents in corpus order. Batch indices start at 1.
std::vector<MiniBatch> minibatch_stream(const Corpus& corpus, std::size_t batch_size);

/// Pull-based batch stream; returns nullopt when exhausted.
using BatchSource = std::function<std::optional<MiniBatch>()>;

/// Lazily chunks `corpus`, which must outlive the returned source.
BatchSource batch_source(const Corpus& corpus, std::size_t batch_size);
BatchSource batch_source(std::vector<MiniBatch> batches);

struct TokenHalves {
  std::vector<WordId> observed;
  std::vector<WordId> heldout;
};

/// observed = first ceil(L/2) tokens, heldout = the rest.
TokenHalves split_tokens_half(const Document& doc);

/// Size plus FNV-1a checksum over the token stream.
struct CorpusFingerprint {
  std::size_t num_docs = 0;
  std::size_t num_tokens = 0;
  std::uint64_t checksum = 0;
};
CorpusFingerprint fingerprint(const Corpus& corpus);

}  // namespace streamlda
