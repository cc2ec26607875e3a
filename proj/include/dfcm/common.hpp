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

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Core>

namespace dfcm {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

using Index = Eigen::Index;

enum class ErrorCode {
  // configuration / usage
  InvalidConfig,
  InvalidFuzzifier,
  // data
  Io,
  Parse,
  EmptyVocabulary,
  DimensionMismatch,
  TooFewPoints,
  NonFiniteInput,
  RankTooLarge,
  MalformedLine,
  DimMismatch,
  ZeroVector,
  TooFewKnownWords,
  // numerical
  EmptyCluster,
  NonFiniteLoss,
  DegenerateTopics,
};

const char* to_string(ErrorCode code);

/// Process exit status for an error: 1 usage/config, 2 data, 3 numerical.
int exit_code(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Seed derivation. Stable across platforms (FNV-1a folded through splitmix64),
// unlike std::hash.
std::uint64_t mix_seed(std::uint64_t seed, std::string_view tag);
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t value);

}  // namespace dfcm
