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

// Topic detection pipelines. Both reduce the document-term matrix, run FCM in
// the reduced space, map centroids back to term space, clamp negatives to zero
// and read off the heaviest terms:
//
//   dfcm: encoder -> FCM -> decoder
//   efcm: truncated SVD projection -> FCM -> back-projection

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dfcm/autoencoder.hpp"
#include "dfcm/fcm.hpp"
#include "dfcm/svd.hpp"
#include "dfcm/textprep.hpp"

namespace dfcm {

enum class Method { Dfcm, Efcm };

const char* to_string(Method m);
Method parse_method(const std::string& name);

struct PipelineConfig {
  Method method = Method::Dfcm;
  Index dim = 5;  // code / eigenspace dimension p
  FcmConfig fcm{.clusters = 10};  // fcm.clusters is the topic count c
  TrainConfig train;
  std::vector<Index> hidden = kDefaultHiddenDims;
  bool pretrain = true;
  Index top_n = 10;
  std::uint64_t seed = 0;
  /// Keep zero-vector topics (with a warning) instead of failing.
  bool allow_degenerate = false;

  void validate() const;
};

struct TopicWord {
  std::string term;
  double weight = 0.0;
};

struct Topic {
  std::vector<TopicWord> words;
  std::size_t vector_index = 0;  // row of DetectionResult::topic_vectors
  std::optional<std::string> warning;
};

struct TopicSet {
  Method method = Method::Dfcm;
  nlohmann::ordered_json config;
  std::vector<Topic> topics;
  std::vector<std::size_t> degenerate;  // indices of all-zero topics
  std::vector<std::string> warnings;
};

struct DetectionResult {
  TopicSet topic_set;
  Matrix<double> topic_vectors;  // c x n_terms, nonnegative
  FcmResult<double> fcm;
  Matrix<double> reduced;  // the n x p data FCM ran on
  std::optional<Autoencoder<double>> model;
  std::vector<std::vector<double>> pretrain_traces;
  std::vector<double> finetune_trace;
};

/// The n largest strictly positive weights, descending, ties by term. A warning
/// is attached when fewer than n positive weights exist.
Topic extract_top_words(const Vector<double>& mu, const Vocabulary& vocab, Index n);

DetectionResult dfcm_detect(const DocTermMatrix& D, const Vocabulary& vocab,
                            const PipelineConfig& cfg);
DetectionResult efcm_detect(const DocTermMatrix& D, const Vocabulary& vocab,
                            const PipelineConfig& cfg);
DetectionResult detect(const DocTermMatrix& D, const Vocabulary& vocab, const PipelineConfig& cfg);

nlohmann::ordered_json topicset_to_json(const TopicSet& set);
TopicSet topicset_from_json(const nlohmann::ordered_json& j);
void write_topicset(const TopicSet& set, const std::filesystem::path& path);
TopicSet read_topicset(const std::filesystem::path& path);

}  // namespace dfcm
