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

#include "dfcm/coherence.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>

namespace dfcm {

namespace {

std::vector<std::string> fields_of(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  for (std::string f; ss >> f;) out.push_back(std::move(f));
  return out;
}

bool parse_count(const std::string& s, Index& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && out >= 0;
}

bool parse_real(const std::string& s, double& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

}  // namespace

WordVectorStore load_word_vectors(std::istream& in, std::optional<Index> expected_dim) {
  WordVectorStore store;
  std::string line;
  std::size_t lineno = 0;
  bool first = true;
  Index dim = -1;
  while (std::getline(in, line)) {
    ++lineno;
    auto fields = fields_of(line);
    if (fields.empty()) continue;
    if (first) {
      first = false;
      Index count = 0, header_dim = 0;
      if (fields.size() == 2 && parse_count(fields[0], count) && parse_count(fields[1], header_dim)) {
        dim = header_dim;
        continue;
      }
    }
    if (dim < 0) dim = static_cast<Index>(fields.size()) - 1;
    if (static_cast<Index>(fields.size()) != dim + 1 || dim < 1) {
      throw Error(ErrorCode::MalformedLine, "line " + std::to_string(lineno) + ": expected " +
                                                std::to_string(dim + 1) + " fields, found " +
                                                std::to_string(fields.size()));
    }
    Vector<double> v(dim);
    for (Index i = 0; i < dim; ++i) {
      if (!parse_real(fields[static_cast<std::size_t>(i) + 1], v(i))) {
        throw Error(ErrorCode::MalformedLine,
                    "line " + std::to_string(lineno) + ": bad number '" + fields[i + 1] + "'");
      }
    }
    if (!store.vectors.emplace(fields[0], std::move(v)).second) {
      store.warnings.push_back("line " + std::to_string(lineno) + ": duplicate term '" +
                               fields[0] + "' ignored");
    }
  }
  store.dim = std::max<Index>(dim, 0);
  if (expected_dim && store.dim != *expected_dim) {
    throw Error(ErrorCode::DimMismatch, "embedding dimension " + std::to_string(store.dim) +
                                            ", expected " + std::to_string(*expected_dim));
  }
  return store;
}

WordVectorStore load_word_vectors(const std::filesystem::path& path,
                                  std::optional<Index> expected_dim) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open embeddings " + path.string());
  return load_word_vectors(in, expected_dim);
}

double tc_w2v(const std::vector<std::string>& words, const WordVectorStore& store,
              std::size_t* words_found) {
  std::vector<const Vector<double>*> known;
  for (const auto& w : words) {
    const Vector<double>* v = store.find(w);
    if (v && v->squaredNorm() > 0.0) known.push_back(v);
  }
  if (words_found) *words_found = known.size();
  if (known.size() < 2) {
    throw Error(ErrorCode::TooFewKnownWords, std::to_string(known.size()) + " of " +
                                                 std::to_string(words.size()) +
                                                 " words have embeddings");
  }
  double total = 0.0;
  for (std::size_t j = 1; j < known.size(); ++j) {
    for (std::size_t i = 0; i < j; ++i) total += cosine(*known[j], *known[i]);
  }
  const double pairs = 0.5 * static_cast<double>(known.size()) * static_cast<double>(known.size() - 1);
  return total / pairs;
}

CoherenceReport evaluate(const std::vector<std::vector<std::string>>& topics,
                         const WordVectorStore& store) {
  CoherenceReport report;
  double sum = 0.0;
  for (std::size_t t = 0; t < topics.size(); ++t) {
    std::size_t found = 0;
    try {
      double score = tc_w2v(topics[t], store, &found);
      report.per_topic.push_back({t, score, found});
      sum += score;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::TooFewKnownWords) throw;
      report.skipped_topics.push_back(t);
    }
  }
  report.mean_score = report.per_topic.empty()
                          ? std::numeric_limits<double>::quiet_NaN()
                          : sum / static_cast<double>(report.per_topic.size());
  return report;
}

CoherenceReport evaluate(const TopicSet& topics, const WordVectorStore& store) {
  std::vector<std::vector<std::string>> lists;
  for (const auto& t : topics.topics) {
    auto& words = lists.emplace_back();
    for (const auto& w : t.words) words.push_back(w.term);
  }
  return evaluate(lists, store);
}

nlohmann::ordered_json report_to_json(const CoherenceReport& report) {
  nlohmann::ordered_json j;
  j["per_topic"] = nlohmann::ordered_json::array();
  for (const auto& s : report.per_topic) {
    j["per_topic"].push_back(
        nlohmann::ordered_json{{"topic", s.topic}, {"score", s.score}, {"words_found", s.words_found}});
  }
  j["skipped_topics"] = report.skipped_topics;
  if (std::isnan(report.mean_score)) {
    j["mean_score"] = nullptr;
  } else {
    j["mean_score"] = report.mean_score;
  }
  return j;
}

void write_report(const CoherenceReport& report, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << report_to_json(report).dump(2) << '\n';
}

}  // namespace dfcm
