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

// Binary model checkpoint, all integers and floats little-endian:
//
//   magic     8 bytes  "DFCMCKPT"
//   version   u32      kCheckpointVersion
//   input_dim u64
//   code_dim  u64
//   n_layers  u64      encoder layer count L (the decoder also has L)
//   L*2 x { in_dim u64, out_dim u64, activation u8 }   encoder then decoder
//   L*2 x { weights f64[out_dim * in_dim] row-major, bias f64[out_dim] }
//
// A JSON sidecar records the training configuration and final loss.

#include <filesystem>
#include <iosfwd>

#include "dfcm/autoencoder.hpp"

namespace dfcm {

inline constexpr std::uint32_t kCheckpointVersion = 1;

void write_checkpoint(const Autoencoder<double>& model, std::ostream& out);
Autoencoder<double> read_checkpoint(std::istream& in);

void save_checkpoint(const Autoencoder<double>& model, const std::filesystem::path& path);
Autoencoder<double> load_checkpoint(const std::filesystem::path& path);

void write_checkpoint_sidecar(const std::filesystem::path& path, const TrainConfig& cfg,
                              double final_loss);

}  // namespace dfcm
