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

#include "dfcm/config.hpp"

#include <fstream>
#include <functional>
#include <map>

namespace dfcm {

namespace {

using Json = nlohmann::json;

template <typename T>
T field(const Json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::InvalidConfig, "field '" + key + "' has the wrong type");
  }
}

OptimizerKind parse_optimizer(const std::string& name) {
  if (name == "adaptive_moments") return OptimizerKind::AdaptiveMoments;
  if (name == "sgd_momentum") return OptimizerKind::SgdMomentum;
  throw Error(ErrorCode::InvalidConfig,
              "field 'optimizer': expected adaptive_moments or sgd_momentum, got '" + name + "'");
}

const char* optimizer_name(OptimizerKind k) {
  return k == OptimizerKind::AdaptiveMoments ? "adaptive_moments" : "sgd_momentum";
}

using Setter = std::function<void(RunConfig&, const Json&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"method",
       [](RunConfig& c, const Json& v, const std::string& k) {
         c.pipeline.method = parse_method(field<std::string>(v, k));
       }},
      {"dim", [](RunConfig& c, const Json& v, const std::string& k) { c.pipeline.dim = field<Index>(v, k); }},
      {"clusters",
       [](RunConfig& c, const Json& v, const std::string& k) { c.pipeline.fcm.clusters = field<Index>(v, k); }},
      {"fuzzifier",
       [](RunConfig& c, const Json& v, const std::string& k) { c.pipeline.fcm.fuzzifier = field<double>(v, k); }},
      {"max_iter",
       [](RunConfig& c, const Json& v, const std::string& k) { c.pipeline.fcm.max_iter = field<int>(v, k); }},
      {"eps", [](RunConfig& c, const Json& v, const std::string& k) { c.pipeline.fcm.eps = field<double>(v, k); }},
      {"init_runs",
       [](RunConfig& c, const Json& v, const std::string& k) { c.pipeline.fcm.init_runs = field<int>(v, k); }},
      {"top_n", [](RunConfig& c, const Json& v, const std::string& k) { c.pipeline.top_n = field<Index>(v, k); }},
      {"seed",
       [](RunConfig& c, const Json& v, const std::string& k) {
         c.pipeline.seed = field<std::uint64_t>(v, k);
         c.seed_set = true;
       }},
      {"epochs",
       [](RunConfig& c, const Json& v, const std::string& k) { c.pipeline.train.epochs = field<int>(v, k); }},
      {"pretrain_epochs",
       [](RunConfig& c, const Json& v, const std::string& k) {
         if (v.is_null()) {
           c.pipeline.train.pretrain_epochs.reset();
         } else {
           c.pipeline.train.pretrain_epochs = field<int>(v, k);
         }
       }},
      {"pretrain",
       [](RunConfig& c, const Json& v, const std::string& k) { c.pipeline.pretrain = field<bool>(v, k); }},
      {"batch_size",
       [](RunConfig& c, const Json& v, const std::string& k) { c.pipeline.train.batch_size = field<Index>(v, k); }},
      {"learning_rate",
       [](RunConfig& c, const Json& v, const std::string& k) {
         c.pipeline.train.learning_rate = field<double>(v, k);
       }},
      {"dropout",
       [](RunConfig& c, const Json& v, const std::string& k) { c.pipeline.train.dropout = field<double>(v, k); }},
      {"optimizer",
       [](RunConfig& c, const Json& v, const std::string& k) {
         c.pipeline.train.optimizer = parse_optimizer(field<std::string>(v, k));
       }},
      {"beta1", [](RunConfig& c, const Json& v, const std::string& k) { c.pipeline.train.beta1 = field<double>(v, k); }},
      {"beta2", [](RunConfig& c, const Json& v, const std::string& k) { c.pipeline.train.beta2 = field<double>(v, k); }},
      {"stabilizer",
       [](RunConfig& c, const Json& v, const std::string& k) { c.pipeline.train.stabilizer = field<double>(v, k); }},
      {"momentum",
       [](RunConfig& c, const Json& v, const std::string& k) { c.pipeline.train.momentum = field<double>(v, k); }},
      {"hidden_layers",
       [](RunConfig& c, const Json& v, const std::string& k) {
         c.pipeline.hidden = field<std::vector<Index>>(v, k);
       }},
      {"corpus", [](RunConfig& c, const Json& v, const std::string& k) { c.corpus = field<std::string>(v, k); }},
      {"stopwords",
       [](RunConfig& c, const Json& v, const std::string& k) { c.stopwords = field<std::string>(v, k); }},
      {"embeddings",
       [](RunConfig& c, const Json& v, const std::string& k) { c.embeddings = field<std::string>(v, k); }},
      {"vectorized_dir",
       [](RunConfig& c, const Json& v, const std::string& k) { c.vectorized_dir = field<std::string>(v, k); }},
      {"output_dir",
       [](RunConfig& c, const Json& v, const std::string& k) { c.output_dir = field<std::string>(v, k); }},
      {"compare_methods",
       [](RunConfig& c, const Json& v, const std::string& k) {
         c.compare_methods = field<std::vector<std::string>>(v, k);
         for (const auto& m : c.compare_methods) parse_method(m);
       }},
      {"compare_clusters",
       [](RunConfig& c, const Json& v, const std::string& k) {
         c.compare_clusters = field<std::vector<Index>>(v, k);
       }},
      {"compare_epochs",
       [](RunConfig& c, const Json& v, const std::string& k) {
         c.compare_epochs = field<std::vector<int>>(v, k);
       }},
  };
  return table;
}

}  // namespace

void apply_config_json(RunConfig& cfg, const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    auto it = setters().find(key);
    if (it == setters().end()) {
      throw Error(ErrorCode::InvalidConfig, "unknown config key '" + key + "'");
    }
    it->second(cfg, value, key);
  }
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidConfig, "cannot open config " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, path.string() + ": " + e.what());
  }
  RunConfig cfg;
  apply_config_json(cfg, j);
  return cfg;
}

nlohmann::ordered_json train_config_to_json(const TrainConfig& cfg) {
  nlohmann::ordered_json j;
  j["epochs"] = cfg.epochs;
  j["pretrain_epochs"] = cfg.layer_epochs();
  j["batch_size"] = cfg.batch_size;
  j["learning_rate"] = cfg.learning_rate;
  j["dropout"] = cfg.dropout;
  j["optimizer"] = optimizer_name(cfg.optimizer);
  j["beta1"] = cfg.beta1;
  j["beta2"] = cfg.beta2;
  j["stabilizer"] = cfg.stabilizer;
  j["momentum"] = cfg.momentum;
  j["seed"] = cfg.seed;
  return j;
}

nlohmann::ordered_json pipeline_config_to_json(const PipelineConfig& cfg) {
  nlohmann::ordered_json j;
  j["method"] = to_string(cfg.method);
  j["dim"] = cfg.dim;
  j["clusters"] = cfg.fcm.clusters;
  j["fuzzifier"] = cfg.fcm.fuzzifier;
  j["max_iter"] = cfg.fcm.max_iter;
  j["eps"] = cfg.fcm.eps;
  j["init_runs"] = cfg.fcm.init_runs;
  j["top_n"] = cfg.top_n;
  j["seed"] = cfg.seed;
  if (cfg.method == Method::Dfcm) {
    auto train = train_config_to_json(cfg.train);
    train.erase("seed");
    for (auto& [k, v] : train.items()) j[k] = v;
    j["pretrain"] = cfg.pretrain;
    j["hidden_layers"] = cfg.hidden;
  }
  return j;
}

}  // namespace dfcm
