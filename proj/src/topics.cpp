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

#include "dfcm/topics.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include "dfcm/config.hpp"

namespace dfcm {

const char* to_string(Method m) { return m == Method::Dfcm ? "dfcm" : "efcm"; }

Method parse_method(const std::string& name) {
  if (name == "dfcm") return Method::Dfcm;
  if (name == "efcm") return Method::Efcm;
  throw Error(ErrorCode::InvalidConfig, "field 'method': expected dfcm or efcm, got '" + name + "'");
}

void PipelineConfig::validate() const {
  if (dim < 1) throw Error(ErrorCode::InvalidConfig, "dim must be >= 1");
  if (top_n < 1) throw Error(ErrorCode::InvalidConfig, "top_n must be >= 1");
  fcm.validate();
  if (method == Method::Dfcm) train.validate();
}

Topic extract_top_words(const Vector<double>& mu, const Vocabulary& vocab, Index n) {
  if (mu.size() != static_cast<Index>(vocab.size())) {
    throw Error(ErrorCode::DimensionMismatch, "topic vector has " + std::to_string(mu.size()) +
                                                  " entries, vocabulary " +
                                                  std::to_string(vocab.size()));
  }
  std::vector<Index> positive;
  for (Index j = 0; j < mu.size(); ++j) {
    if (mu(j) > 0.0) positive.push_back(j);
  }
  const auto take = std::min<std::size_t>(positive.size(), static_cast<std::size_t>(n));
  // Terms are sorted, so comparing indices breaks ties lexicographically.
  std::partial_sort(positive.begin(), positive.begin() + static_cast<std::ptrdiff_t>(take),
                    positive.end(), [&](Index a, Index b) {
                      return mu(a) != mu(b) ? mu(a) > mu(b) : vocab.terms[a] < vocab.terms[b];
                    });
  Topic topic;
  for (std::size_t r = 0; r < take; ++r) {
    topic.words.push_back({vocab.terms[positive[r]], mu(positive[r])});
  }
  if (take < static_cast<std::size_t>(n)) {
    topic.warning = "only " + std::to_string(take) + " of " + std::to_string(n) +
                    " requested words have positive weight";
  }
  return topic;
}

namespace {

void check_input(const DocTermMatrix& D, const Vocabulary& vocab, const PipelineConfig& cfg) {
  cfg.validate();
  if (D.rows() == 0 || D.cols() == 0) throw Error(ErrorCode::DimensionMismatch, "empty matrix");
  if (D.cols() != static_cast<Index>(vocab.size())) {
    throw Error(ErrorCode::DimensionMismatch, "matrix has " + std::to_string(D.cols()) +
                                                  " columns, vocabulary " +
                                                  std::to_string(vocab.size()));
  }
}

FcmConfig fcm_stage(const PipelineConfig& cfg) {
  FcmConfig f = cfg.fcm;
  f.seed = mix_seed(cfg.seed, "fcm");
  return f;
}

/// Clamps back-projected centroids and builds the topic set.
void finish(DetectionResult& result, Matrix<double> back, const Vocabulary& vocab,
            const PipelineConfig& cfg) {
  result.topic_vectors = back.cwiseMax(0.0);
  TopicSet& set = result.topic_set;
  set.method = cfg.method;
  set.config = pipeline_config_to_json(cfg);
  for (Index i = 0; i < result.topic_vectors.rows(); ++i) {
    Topic topic = extract_top_words(result.topic_vectors.row(i).transpose(), vocab, cfg.top_n);
    topic.vector_index = static_cast<std::size_t>(i);
    if (topic.words.empty()) {
      set.degenerate.push_back(static_cast<std::size_t>(i));
      topic.warning = "degenerate topic: all weights are zero after rectification";
    }
    if (topic.warning) {
      set.warnings.push_back("topic " + std::to_string(i) + ": " + *topic.warning);
    }
    set.topics.push_back(std::move(topic));
  }
  if (!set.degenerate.empty() && !cfg.allow_degenerate) {
    std::string which;
    for (auto i : set.degenerate) which += (which.empty() ? "" : ", ") + std::to_string(i);
    throw Error(ErrorCode::DegenerateTopics, "topics [" + which + "] are zero vectors");
  }
}

}  // namespace

DetectionResult dfcm_detect(const DocTermMatrix& D, const Vocabulary& vocab,
                            const PipelineConfig& cfg) {
  check_input(D, vocab, cfg);
  if (cfg.method != Method::Dfcm) throw Error(ErrorCode::InvalidConfig, "method must be dfcm");

  TrainConfig train = cfg.train;
  train.seed = mix_seed(cfg.seed, "autoencoder");

  DetectionResult result;
  auto model = build_autoencoder<double>(D.cols(), cfg.dim, mix_seed(cfg.seed, "init"), cfg.hidden);
  if (cfg.pretrain) result.pretrain_traces = greedy_pretrain(D, model, train);
  result.finetune_trace = fine_tune(D, model, train);

  result.reduced = encode(model, D);
  result.fcm = fcm_fit(result.reduced, fcm_stage(cfg));
  Matrix<double> back = decode(model, result.fcm.centroids);
  result.model = std::move(model);
  finish(result, std::move(back), vocab, cfg);
  return result;
}

DetectionResult efcm_detect(const DocTermMatrix& D, const Vocabulary& vocab,
                            const PipelineConfig& cfg) {
  check_input(D, vocab, cfg);
  if (cfg.method != Method::Efcm) throw Error(ErrorCode::InvalidConfig, "method must be efcm");

  DetectionResult result;
  const auto svd = truncated_svd(D, cfg.dim, mix_seed(cfg.seed, "svd"));
  result.reduced = project(D, svd);
  result.fcm = fcm_fit(result.reduced, fcm_stage(cfg));
  finish(result, back_project(result.fcm.centroids, svd), vocab, cfg);
  return result;
}

DetectionResult detect(const DocTermMatrix& D, const Vocabulary& vocab, const PipelineConfig& cfg) {
  return cfg.method == Method::Dfcm ? dfcm_detect(D, vocab, cfg) : efcm_detect(D, vocab, cfg);
}

nlohmann::ordered_json topicset_to_json(const TopicSet& set) {
  nlohmann::ordered_json j;
  j["method"] = to_string(set.method);
  j["config"] = set.config;
  j["topics"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < set.topics.size(); ++i) {
    const Topic& t = set.topics[i];
    nlohmann::ordered_json tj;
    tj["index"] = i;
    tj["vector_index"] = t.vector_index;
    tj["words"] = nlohmann::ordered_json::array();
    for (const auto& w : t.words) {
      tj["words"].push_back(nlohmann::ordered_json{{"term", w.term}, {"weight", w.weight}});
    }
    if (t.warning) tj["warning"] = *t.warning;
    j["topics"].push_back(std::move(tj));
  }
  j["degenerate_topics"] = set.degenerate;
  j["warnings"] = set.warnings;
  return j;
}

TopicSet topicset_from_json(const nlohmann::ordered_json& j) {
  TopicSet set;
  try {
    set.method = parse_method(j.at("method").get<std::string>());
    if (j.contains("config")) set.config = j.at("config");
    for (const auto& tj : j.at("topics")) {
      Topic t;
      t.vector_index = tj.value("vector_index", set.topics.size());
      for (const auto& wj : tj.at("words")) {
        t.words.push_back({wj.at("term").get<std::string>(), wj.at("weight").get<double>()});
      }
      if (tj.contains("warning")) t.warning = tj.at("warning").get<std::string>();
      set.topics.push_back(std::move(t));
    }
    if (j.contains("degenerate_topics")) {
      set.degenerate = j.at("degenerate_topics").get<std::vector<std::size_t>>();
    }
    if (j.contains("warnings")) set.warnings = j.at("warnings").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("topic set: ") + e.what());
  }
  return set;
}

void write_topicset(const TopicSet& set, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << topicset_to_json(set).dump(2) << '\n';
}

TopicSet read_topicset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  try {
    return topicset_from_json(nlohmann::ordered_json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::Parse, path.string() + ": " + e.what());
  }
}

}  // namespace dfcm
