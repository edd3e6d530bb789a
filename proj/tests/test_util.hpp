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

#include <sstream>
#include <string>
#include <vector>

#include "streamlda/corpus.hpp"

namespace streamlda::testing {

inline Corpus parse(const std::string& docword, const std::string& vocab) {
  std::istringstream d(docword), v(vocab);
  return parse_uci(d, v);
}

inline Corpus corpus_of(std::vector<std::vector<WordId>> docs, std::size_t vocab_size) {
  Corpus c;
  for (std::size_t i = 0; i < docs.size(); ++i) c.documents.push_back({i, std::move(docs[i])});
  for (std::size_t v = 0; v < vocab_size; ++v) c.vocab.words.push_back("w" + std::to_string(v));
  return c;
}

inline MiniBatch batch_of(const Corpus& c, std::size_t index = 1) {
  MiniBatch b;
  b.docs = c.documents;
  b.index = index;
  return b;
}

}  // namespace streamlda::testing
