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

// TC-W2V topic coherence: the mean pairwise cosine similarity between the
// embedding vectors of a topic's words.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "dfcm/common.hpp"
#include "dfcm/topics.hpp"

namespace dfcm {

struct WordVectorStore {
  Index dim = 0;
  std::unordered_map<std::string, Vector<double>> vectors;
  std::vector<std::string> warnings;

  const Vector<double>* find(const std::string& term) const {
    auto it = vectors.find(term);
    return it == vectors.end() ? nullptr : &it->second;
  }
};

/// Text embedding format: optional `count dim` header, then `term v1 ... vdim`
/// per line. The first line is a header iff it has exactly two fields and both
/// are non-negative integers. Duplicate terms keep their first vector.
WordVectorStore load_word_vectors(std::istream& in, std::optional<Index> expected_dim = {});
WordVectorStore load_word_vectors(const std::filesystem::path& path,
                                  std::optional<Index> expected_dim = {});

template <typename DerivedU, typename DerivedV>
typename DerivedU::Scalar cosine(const Eigen::MatrixBase<DerivedU>& u,
                                 const Eigen::MatrixBase<DerivedV>& v) {
  using Scalar = typename DerivedU::Scalar;
  if (u.size() != v.size()) throw Error(ErrorCode::DimensionMismatch, "cosine: length mismatch");
  const Scalar nu = u.norm();
  const Scalar nv = v.norm();
  if (!(nu > Scalar(0)) || !(nv > Scalar(0))) {
    throw Error(ErrorCode::ZeroVector, "cosine of a zero-length vector");
  }
  return std::clamp(u.dot(v) / (nu * nv), Scalar(-1), Scalar(1));
}

struct TopicScore {
  std::size_t topic = 0;
  double score = 0.0;
  std::size_t words_found = 0;
};

struct CoherenceReport {
  std::vector<TopicScore> per_topic;
  double mean_score = 0.0;  // NaN when no topic could be scored
  std::vector<std::size_t> skipped_topics;
};

/// Mean cosine over all unordered pairs (i < j) of the words present in the
/// store. Absent words, and words whose vector is all zeros, are skipped.
double tc_w2v(const std::vector<std::string>& words, const WordVectorStore& store,
              std::size_t* words_found = nullptr);

CoherenceReport evaluate(const std::vector<std::vector<std::string>>& topics,
                         const WordVectorStore& store);
CoherenceReport evaluate(const TopicSet& topics, const WordVectorStore& store);

nlohmann::ordered_json report_to_json(const CoherenceReport& report);
void write_report(const CoherenceReport& report, const std::filesystem::path& path);

}  // namespace dfcm
