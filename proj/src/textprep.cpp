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

#include "dfcm/textprep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace dfcm {

namespace {

bool is_space(char ch) {
  return ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r' || ch == '\f' || ch == '\v';
}

bool is_ascii_letter(char ch) {
  return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z');
}

bool is_ascii_punct(char ch) {
  auto u = static_cast<unsigned char>(ch);
  return u < 0x80 && std::ispunct(u);
}

std::vector<std::string_view> split_whitespace(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) out.push_back(text.substr(start, i - start));
  }
  return out;
}

std::string collapse_repeats(std::string_view token) {
  std::string out;
  out.reserve(token.size());
  for (char ch : token) {
    std::size_t n = out.size();
    if (is_ascii_letter(ch) && n >= 2 && out[n - 1] == ch && out[n - 2] == ch) continue;
    out.push_back(ch);
  }
  return out;
}

bool is_dropped(std::string_view token) {
  return token.starts_with('@') || token.starts_with("www.") || token.starts_with("http://") ||
         token.starts_with("https://");
}

}  // namespace

std::string clean_text(std::string_view raw) {
  std::string lowered(raw);
  for (char& ch : lowered) {
    if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
  }

  std::string out;
  for (std::string_view piece : split_whitespace(lowered)) {
    const std::size_t hashes = piece.find_first_not_of('#');
    if (hashes == std::string_view::npos) continue;
    piece.remove_prefix(hashes);
    if (piece.starts_with("www.")) continue;
    // Collapsing runs first means "htttp://" is dropped on the first pass, not the second.
    std::string token = collapse_repeats(piece);
    if (is_dropped(token)) continue;
    if (!out.empty()) out.push_back(' ');
    out += token;
  }
  return out;
}

TokenList tokenize(std::string_view text) {
  TokenList tokens;
  for (std::string_view piece : split_whitespace(text)) {
    std::size_t b = 0;
    std::size_t e = piece.size();
    while (b < e && is_ascii_punct(piece[b])) ++b;
    while (e > b && is_ascii_punct(piece[e - 1])) --e;
    if (e > b) tokens.emplace_back(piece.substr(b, e - b));
  }
  return tokens;
}

std::size_t pruning_threshold(std::size_t n_docs) {
  return std::max<std::size_t>(10, n_docs / 1000);
}

Vocabulary build_vocabulary(const std::vector<TokenList>& corpus, const StopwordSet& stopwords,
                            std::optional<std::size_t> min_doc_freq) {
  if (corpus.empty()) throw Error(ErrorCode::EmptyVocabulary, "corpus has no documents");

  std::map<std::string, std::size_t> df;
  for (const auto& doc : corpus) {
    std::set<std::string_view> seen;
    for (const auto& tok : doc) {
      if (stopwords.contains(tok)) continue;
      if (seen.insert(tok).second) ++df[tok];
    }
  }

  Vocabulary vocab;
  vocab.n_docs = corpus.size();
  vocab.threshold = min_doc_freq.value_or(pruning_threshold(corpus.size()));
  for (const auto& [term, count] : df) {
    if (count < vocab.threshold) continue;
    vocab.index.emplace(term, vocab.terms.size());
    vocab.terms.push_back(term);
    vocab.doc_freq.emplace(term, count);
  }
  if (vocab.terms.empty()) {
    throw Error(ErrorCode::EmptyVocabulary,
                "no term reaches document frequency " + std::to_string(vocab.threshold) +
                    " over " + std::to_string(corpus.size()) + " documents");
  }
  return vocab;
}

DocTermMatrix vectorize_tfidf(const std::vector<TokenList>& corpus, const Vocabulary& vocab) {
  const double n = static_cast<double>(vocab.n_docs);
  std::vector<double> idf(vocab.size());
  for (std::size_t j = 0; j < vocab.size(); ++j) {
    double df = static_cast<double>(vocab.doc_freq.at(vocab.terms[j]));
    idf[j] = std::log((1.0 + n) / (1.0 + df)) + 1.0;
  }

  std::vector<Eigen::Triplet<double, std::int64_t>> triplets;
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    std::map<std::size_t, double> counts;
    for (const auto& tok : corpus[d]) {
      auto it = vocab.index.find(tok);
      if (it != vocab.index.end()) counts[it->second] += 1.0;
    }
    for (const auto& [col, tf] : counts) {
      triplets.emplace_back(static_cast<std::int64_t>(d), static_cast<std::int64_t>(col),
                            tf * idf[col]);
    }
  }

  DocTermMatrix matrix(static_cast<Index>(corpus.size()), static_cast<Index>(vocab.size()));
  matrix.setFromTriplets(triplets.begin(), triplets.end());
  matrix.makeCompressed();
  return matrix;
}

// --- persistence -----------------------------------------------------------

std::vector<RawDocument> read_corpus_jsonl(std::istream& in) {
  std::vector<RawDocument> docs;
  std::set<std::string> ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::Parse, "corpus line " + std::to_string(lineno) + ": " + e.what());
    }
    if (!obj.is_object() || !obj.contains("id") || !obj["id"].is_string() ||
        !obj.contains("text") || !obj["text"].is_string()) {
      throw Error(ErrorCode::Parse, "corpus line " + std::to_string(lineno) +
                                        ": expected object with string fields id and text");
    }
    RawDocument doc{obj["id"].get<std::string>(), obj["text"].get<std::string>()};
    if (doc.id.empty()) {
      throw Error(ErrorCode::Parse, "corpus line " + std::to_string(lineno) + ": empty id");
    }
    if (!ids.insert(doc.id).second) {
      throw Error(ErrorCode::Parse,
                  "corpus line " + std::to_string(lineno) + ": duplicate id '" + doc.id + "'");
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::vector<RawDocument> read_corpus_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open corpus " + path.string());
  return read_corpus_jsonl(in);
}

StopwordSet read_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open stopword list " + path.string());
  StopwordSet words;
  std::string line;
  while (std::getline(in, line)) {
    auto toks = split_whitespace(line);
    if (!toks.empty()) words.insert(clean_text(toks.front()));
  }
  return words;
}

void write_vocabulary_json(const Vocabulary& vocab, const std::filesystem::path& path) {
  nlohmann::ordered_json j;
  j["threshold"] = vocab.threshold;
  j["n_docs"] = vocab.n_docs;
  j["terms"] = vocab.terms;
  nlohmann::ordered_json df = nlohmann::ordered_json::object();
  for (const auto& term : vocab.terms) df[term] = vocab.doc_freq.at(term);
  j["doc_freq"] = std::move(df);
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

Vocabulary read_vocabulary_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open vocabulary " + path.string());
  Vocabulary vocab;
  try {
    auto j = nlohmann::json::parse(in);
    vocab.threshold = j.at("threshold").get<std::size_t>();
    vocab.n_docs = j.at("n_docs").get<std::size_t>();
    vocab.terms = j.at("terms").get<std::vector<std::string>>();
    const auto& df = j.at("doc_freq");
    for (std::size_t i = 0; i < vocab.terms.size(); ++i) {
      const auto& term = vocab.terms[i];
      if (i > 0 && !(vocab.terms[i - 1] < term)) {
        throw Error(ErrorCode::Parse, "vocabulary terms not strictly sorted at '" + term + "'");
      }
      vocab.index.emplace(term, i);
      vocab.doc_freq.emplace(term, df.at(term).get<std::size_t>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, path.string() + ": " + e.what());
  }
  return vocab;
}

void write_triplets(const DocTermMatrix& matrix, std::ostream& out) {
  out << matrix.rows() << ' ' << matrix.cols() << ' ' << matrix.nonZeros() << '\n';
  char buf[64];
  for (Index r = 0; r < matrix.outerSize(); ++r) {
    for (DocTermMatrix::InnerIterator it(matrix, r); it; ++it) {
      std::snprintf(buf, sizeof buf, "%.17g", it.value());
      out << it.row() << ' ' << it.col() << ' ' << buf << '\n';
    }
  }
}

void write_triplets(const DocTermMatrix& matrix, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  write_triplets(matrix, out);
}

DocTermMatrix read_triplets(std::istream& in) {
  std::string line;
  std::size_t lineno = 1;
  long long rows = -1, cols = -1, nnz = -1;
  if (!std::getline(in, line) || !(std::istringstream(line) >> rows >> cols >> nnz) || rows < 0 ||
      cols < 0 || nnz < 0) {
    throw Error(ErrorCode::Parse, "matrix line 1: expected 'n_docs n_terms nnz'");
  }
  std::vector<Eigen::Triplet<double, std::int64_t>> triplets;
  triplets.reserve(static_cast<std::size_t>(nnz));
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ss(line);
    long long r = 0, c = 0;
    double w = 0.0;
    if (!(ss >> r >> c >> w) || r < 0 || r >= rows || c < 0 || c >= cols || !(w >= 0.0) ||
        !std::isfinite(w)) {
      throw Error(ErrorCode::Parse, "matrix line " + std::to_string(lineno) + ": bad entry");
    }
    if (w != 0.0) triplets.emplace_back(r, c, w);
  }
  if (static_cast<long long>(triplets.size()) != nnz) {
    throw Error(ErrorCode::Parse, "matrix: header declares " + std::to_string(nnz) +
                                      " entries, found " + std::to_string(triplets.size()));
  }
  DocTermMatrix m(rows, cols);
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

DocTermMatrix read_triplets(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open matrix " + path.string());
  return read_triplets(in);
}

}  // namespace dfcm
