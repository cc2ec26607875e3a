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

// The four CLI subcommands as library calls. Each writes its artifacts into a
// directory and is byte-for-byte reproducible for identical inputs and seed;
// timestamps only go to `run.log`.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "dfcm/coherence.hpp"
#include "dfcm/config.hpp"
#include "dfcm/topics.hpp"

namespace dfcm {

inline constexpr const char* kVocabularyFile = "vocabulary.json";
inline constexpr const char* kMatrixFile = "matrix.txt";
inline constexpr const char* kDocumentsFile = "documents.txt";
inline constexpr const char* kTopicsFile = "topics.json";
inline constexpr const char* kMembershipsFile = "memberships.txt";
inline constexpr const char* kObjectiveFile = "objective_trace.txt";
inline constexpr const char* kModelFile = "model.bin";
inline constexpr const char* kModelSidecarFile = "model.json";
inline constexpr const char* kCompareFile = "compare.csv";
inline constexpr const char* kLogFile = "run.log";

struct VectorizeSummary {
  std::size_t documents = 0;
  std::size_t terms = 0;
  std::size_t nonzeros = 0;
};

/// Clean, tokenize and weight a JSON-lines corpus. `stopwords_path` may be empty.
VectorizeSummary cmd_vectorize(const std::filesystem::path& corpus_path,
                               const std::filesystem::path& stopwords_path,
                               const std::filesystem::path& out_dir, std::ostream& log);

/// Run the configured pipeline on the artifacts in cfg.vectorized_dir.
DetectionResult cmd_detect(const RunConfig& cfg, std::ostream& log);

CoherenceReport cmd_evaluate(const std::filesystem::path& topics_path,
                             const std::filesystem::path& embeddings_path,
                             const std::filesystem::path& out_path, std::ostream& log);

/// Sweep (method, clusters, epochs) and write a CSV table. Failed cells are
/// recorded in the status column. Returns the number of failed cells.
std::size_t cmd_compare(const RunConfig& cfg, std::ostream& log);

/// Seed of one sweep cell, derived from the global seed.
std::uint64_t cell_seed(std::uint64_t seed, Method method, Index clusters, int epochs);

}  // namespace dfcm
