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

#include "streamlda/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <memory>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace streamlda {

namespace {

// Reads the next non-blank line; false at end of stream.
bool next_line(std::istream& in, std::string& line, std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") != std::string::npos) return true;
  }
  return false;
}

long long parse_header_value(std::istream& in, std::size_t& line_no, const char* name) {
  std::string line;
  if (!next_line(in, line, line_no)) {
    throw DataError(std::string("malformed header: missing ") + name);
  }
  std::istringstream fields(line);
  long long value = 0;
  std::string rest;
  if (!(fields >> value) || (fields >> rest) || value < 0) {
    throw DataError(std::string("malformed header: bad ") + name + " on line " +
                    std::to_string(line_no));
  }
  return value;
}

struct Header {
  std::size_t num_docs;
  std::size_t vocab_size;
  std::size_t nnz;
};

Header parse_header(std::istream& docword, std::size_t& line_no) {
  Header h{};
  h.num_docs = static_cast<std::size_t>(parse_header_value(docword, line_no, "D"));
  h.vocab_size = static_cast<std::size_t>(parse_header_value(docword, line_no, "V"));
  h.nnz = static_cast<std::size_t>(parse_header_value(docword, line_no, "NNZ"));
  return h;
}

std::vector<Document> parse_triples(std::istream& docword, const Header& h, std::size_t& line_no) {
  std::vector<std::vector<std::pair<WordId, std::size_t>>> counts(h.num_docs);
  std::string line;
  for (std::size_t n = 0; n < h.nnz; ++n) {
    if (!next_line(docword, line, line_no)) {
      throw DataError("truncated docword: expected " + std::to_string(h.nnz) + " triples, got " +
                      std::to_string(n));
    }
    std::istringstream fields(line);
    long long doc = 0, word = 0, count = 0;
    std::string rest;
    if (!(fields >> doc >> word >> count) || (fields >> rest)) {
      throw DataError("malformed triple on line " + std::to_string(line_no));
    }
    if (doc < 1 || static_cast<std::size_t>(doc) > h.num_docs) {
      throw DataError("document ID out of range on line " + std::to_string(line_no) + ": " +
                      std::to_string(doc));
    }
    if (word < 1 || static_cast<std::size_t>(word) > h.vocab_size) {
      throw DataError("word ID out of range on line " + std::to_string(line_no) + ": " +
                      std::to_string(word));
    }
    if (count < 1) {
      throw DataError("count < 1 on line " + std::to_string(line_no));
    }
    counts[doc - 1].emplace_back(static_cast<WordId>(word - 1), static_cast<std::size_t>(count));
  }

  std::vector<Document> docs(h.num_docs);
  for (std::size_t d = 0; d < h.num_docs; ++d) {
    auto& records = counts[d];
    std::stable_sort(records.begin(), records.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    docs[d].id = d;
    std::size_t total = 0;
    for (const auto& r : records) total += r.second;
    docs[d].tokens.reserve(total);
    for (const auto& [word, count] : records) {
      docs[d].tokens.insert(docs[d].tokens.end(), count, word);
    }
  }
  return docs;
}

Vocabulary parse_vocab(std::istream& vocab, std::size_t expected) {
  Vocabulary v;
  v.words.reserve(expected);
  std::unordered_set<std::string> seen;
  std::string line;
  while (std::getline(vocab, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && vocab.peek() == std::char_traits<char>::eof()) break;
    if (!seen.insert(line).second) throw DataError("duplicate vocabulary word: " + line);
    v.words.push_back(std::move(line));
  }
  if (v.words.size() != expected) {
    throw DataError("vocabulary has " + std::to_string(v.words.size()) + " lines, header says V=" +
                    std::to_string(expected));
  }
  return v;
}

Vocabulary placeholder_vocab(std::size_t size) {
  Vocabulary v;
  v.words.reserve(size);
  for (std::size_t i = 0; i < size; ++i) v.words.push_back("w" + std::to_string(i));
  return v;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

}  // namespace

std::size_t Corpus::num_tokens() const {
  std::size_t total = 0;
  for (const auto& d : documents) total += d.length();
  return total;
}

std::size_t MiniBatch::num_tokens() const {
  std::size_t total = 0;
  for (const auto& d : docs) total += d.length();
  return total;
}

Corpus parse_uci(std::istream& docword, std::istream& vocab) {
  std::size_t line_no = 0;
  const Header h = parse_header(docword, line_no);
  Corpus corpus;
  corpus.documents = parse_triples(docword, h, line_no);
  corpus.vocab = parse_vocab(vocab, h.vocab_size);
  return corpus;
}

Corpus parse_uci(std::istream& docword) {
  std::size_t line_no = 0;
  const Header h = parse_header(docword, line_no);
  Corpus corpus;
  corpus.documents = parse_triples(docword, h, line_no);
  corpus.vocab = placeholder_vocab(h.vocab_size);
  return corpus;
}

Corpus load_uci(const std::filesystem::path& docword,
                const std::optional<std::filesystem::path>& vocab) {
  auto docword_in = open_input(docword);
  try {
    if (vocab) {
      auto vocab_in = open_input(*vocab);
      return parse_uci(docword_in, vocab_in);
    }
    return parse_uci(docword_in);
  } catch (const DataError& e) {
    throw DataError(docword.string() + ": " + e.what());
  }
}

void write_uci(const Corpus& corpus, std::ostream& docword, std::ostream& vocab) {
  std::vector<std::vector<std::pair<WordId, std::size_t>>> records(corpus.num_docs());
  std::size_t nnz = 0;
  for (std::size_t d = 0; d < corpus.num_docs(); ++d) {
    std::vector<WordId> sorted = corpus.documents[d].tokens;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size();) {
      std::size_t j = i;
      while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
      records[d].emplace_back(sorted[i], j - i);
      i = j;
    }
    nnz += records[d].size();
  }
  docword << corpus.num_docs() << '\n' << corpus.vocab.size() << '\n' << nnz << '\n';
  for (std::size_t d = 0; d < records.size(); ++d) {
    for (const auto& [word, count] : records[d]) {
      docword << (d + 1) << ' ' << (word + 1) << ' ' << count << '\n';
    }
  }
  for (const auto& w : corpus.vocab.words) vocab << w << '\n';
}

void save_uci(const Corpus& corpus, const std::filesystem::path& docword,
              const std::filesystem::path& vocab) {
  std::ofstream d(docword), v(vocab);
  if (!d) throw DataError("cannot write " + docword.string());
  if (!v) throw DataError("cannot write " + vocab.string());
  write_uci(corpus, d, v);
}

std::pair<Corpus, Corpus> split_train_test(const Corpus& corpus, double test_fraction,
                                           std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw std::invalid_argument("test_fraction must lie in (0, 1)");
  }
  const std::size_t n = corpus.num_docs();
  const auto n_test = static_cast<std::size_t>(std::floor(static_cast<double>(n) * test_fraction + 1e-9));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 engine(seed);
  std::shuffle(order.begin(), order.end(), engine);

  std::vector<bool> is_test(n, false);
  for (std::size_t i = 0; i < n_test; ++i) is_test[order[i]] = true;

  Corpus train, test;
  train.vocab = corpus.vocab;
  test.vocab = corpus.vocab;
  for (std::size_t d = 0; d < n; ++d) {
    (is_test[d] ? test : train).documents.push_back(corpus.documents[d]);
  }
  return {std::move(train), std::move(test)};
}

Corpus shuffled(const Corpus& corpus, std::uint64_t seed) {
  Corpus out;
  out.vocab = corpus.vocab;
  out.documents = corpus.documents;
  std::mt19937_64 engine(seed);
  std::shuffle(out.documents.begin(), out.documents.end(), engine);
  return out;
}

std::vector<MiniBatch> minibatch_stream(const Corpus& corpus, std::size_t batch_size) {
  if (batch_size == 0) throw std::invalid_argument("batch_size must be at least 1");
  std::vector<MiniBatch> batches;
  for (std::size_t start = 0; start < corpus.num_docs(); start += batch_size) {
    const std::size_t end = std::min(start + batch_size, corpus.num_docs());
    MiniBatch b;
    b.index = batches.size() + 1;
    b.docs.assign(corpus.documents.begin() + static_cast<std::ptrdiff_t>(start),
                  corpus.documents.begin() + static_cast<std::ptrdiff_t>(end));
    batches.push_back(std::move(b));
  }
  return batches;
}

BatchSource batch_source(const Corpus& corpus, std::size_t batch_size) {
  if (batch_size == 0) throw std::invalid_argument("batch_size must be at least 1");
  auto next_start = std::make_shared<std::size_t>(0);
  auto next_index = std::make_shared<std::size_t>(1);
  return [&corpus, batch_size, next_start, next_index]() -> std::optional<MiniBatch> {
    if (*next_start >= corpus.num_docs()) return std::nullopt;
    const std::size_t end = std::min(*next_start + batch_size, corpus.num_docs());
    MiniBatch b;
    b.index = (*next_index)++;
    b.docs.assign(corpus.documents.begin() + static_cast<std::ptrdiff_t>(*next_start),
                  corpus.documents.begin() + static_cast<std::ptrdiff_t>(end));
    *next_start = end;
    return b;
  };
}

BatchSource batch_source(std::vector<MiniBatch> batches) {
  auto owned = std::make_shared<std::vector<MiniBatch>>(std::move(batches));
  auto pos = std::make_shared<std::size_t>(0);
  return [owned, pos]() -> std::optional<MiniBatch> {
    if (*pos >= owned->size()) return std::nullopt;
    return std::move((*owned)[(*pos)++]);
  };
}

TokenHalves split_tokens_half(const Document& doc) {
  const std::size_t cut = (doc.length() + 1) / 2;
  TokenHalves halves;
  halves.observed.assign(doc.tokens.begin(), doc.tokens.begin() + static_cast<std::ptrdiff_t>(cut));
  halves.heldout.assign(doc.tokens.begin() + static_cast<std::ptrdiff_t>(cut), doc.tokens.end());
  return halves;
}

CorpusFingerprint fingerprint(const Corpus& corpus) {
  constexpr std::uint64_t kOffset = 1469598103934665603ULL;
  constexpr std::uint64_t kPrime = 1099511628211ULL;
  CorpusFingerprint fp;
  fp.num_docs = corpus.num_docs();
  std::uint64_t h = kOffset;
  auto mix = [&h](std::uint64_t x) {
    for (int b = 0; b < 8; ++b) {
      h ^= (x >> (8 * b)) & 0xffu;
      h *= kPrime;
    }
  };
  for (const auto& d : corpus.documents) {
    mix(d.length());
    for (WordId w : d.tokens) mix(w);
    fp.num_tokens += d.length();
  }
  fp.checksum = h;
  return fp;
}

}  // namespace streamlda
