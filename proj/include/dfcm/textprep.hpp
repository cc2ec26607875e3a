// Copyright 2026 The DFCM Authors. All Rights Reserved.
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
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <Eigen/SparseCore>

#include "dfcm/common.hpp"

namespace dfcm {

struct RawDocument {
  std::string id;
  std::string text;
};

using TokenList = std::vector<std::string>;
using StopwordSet = std::unordered_set<std::string>;

/// Documents x terms, row-major so each row is one document vector.
using DocTermMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, std::int64_t>;

struct Vocabulary {
  std::vector<std::string> terms;  // sorted
  std::map<std::string, std::size_t> doc_freq;
  std::map<std::string, std::size_t> index;
  std::size_t n_docs = 0;     // documents the frequencies were counted over
  std::size_t threshold = 0;  // minimum document frequency applied

  std::size_t size() const { return terms.size(); }
};

/// Lowercases, drops URL and @mention tokens, strips leading '#', and collapses
/// runs of three or more identical letters to two. Tokens are rejoined with
/// single spaces.
std::string clean_text(std::string_view raw);

/// Whitespace split; leading/trailing ASCII punctuation removed, interior kept.
TokenList tokenize(std::string_view text);

/// max(10, floor(m / 1000))
std::size_t pruning_threshold(std::size_t n_docs);

/// Stopwords are removed first; the document-frequency threshold then applies to
/// what remains. `min_doc_freq` overrides the default threshold.
Vocabulary build_vocabulary(const std::vector<TokenList>& corpus, const StopwordSet& stopwords,
                            std::optional<std::size_t> min_doc_freq = std::nullopt);

/// Raw count x smoothed idf, idf = ln((1 + N) / (1 + df)) + 1 with N and df
/// taken from the vocabulary.
DocTermMatrix vectorize_tfidf(const std::vector<TokenList>& corpus, const Vocabulary& vocab);

// --- persistence -----------------------------------------------------------

std::vector<RawDocument> read_corpus_jsonl(const std::filesystem::path& path);
std::vector<RawDocument> read_corpus_jsonl(std::istream& in);
StopwordSet read_stopwords(const std::filesystem::path& path);

void write_vocabulary_json(const Vocabulary& vocab, const std::filesystem::path& path);
Vocabulary read_vocabulary_json(const std::filesystem::path& path);

/// Header `n_docs n_terms nnz`, then `row col weight` per entry in row-major
/// order, weights with 17 significant digits.
void write_triplets(const DocTermMatrix& matrix, std::ostream& out);
void write_triplets(const DocTermMatrix& matrix, const std::filesystem::path& path);
DocTermMatrix read_triplets(std::istream& in);
DocTermMatrix read_triplets(const std::filesystem::path& path);

}  // namespace dfcm
