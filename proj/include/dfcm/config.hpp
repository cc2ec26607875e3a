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

// Run configuration: one flat JSON object whose keys mirror the CLI flags.
// Unknown keys are rejected.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dfcm/topics.hpp"

namespace dfcm {

struct RunConfig {
  PipelineConfig pipeline;
  bool seed_set = false;

  std::string corpus;
  std::string stopwords;
  std::string embeddings;
  std::string vectorized_dir = ".";
  std::string output_dir = ".";

  std::vector<std::string> compare_methods = {"dfcm", "efcm"};
  std::vector<Index> compare_clusters = {10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
  std::vector<int> compare_epochs = {100};
};

/// Overlays the keys of `j` onto `cfg`.
void apply_config_json(RunConfig& cfg, const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);

nlohmann::ordered_json train_config_to_json(const TrainConfig& cfg);
nlohmann::ordered_json pipeline_config_to_json(const PipelineConfig& cfg);

}  // namespace dfcm
