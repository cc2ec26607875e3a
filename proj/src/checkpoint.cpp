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

#include "dfcm/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "dfcm/config.hpp"

namespace dfcm {

namespace {

constexpr std::array<char, 8> kMagic = {'D', 'F', 'C', 'M', 'C', 'K', 'P', 'T'};

template <typename U>
void put(std::ostream& out, U value) {
  std::array<char, sizeof(U)> bytes;
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xff);
  }
  out.write(bytes.data(), bytes.size());
}

template <typename U>
U get(std::istream& in) {
  std::array<unsigned char, sizeof(U)> bytes;
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
    throw Error(ErrorCode::Parse, "checkpoint truncated");
  }
  U value = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) value |= static_cast<U>(bytes[i]) << (8 * i);
  return value;
}

void put_f64(std::ostream& out, double v) { put(out, std::bit_cast<std::uint64_t>(v)); }
double get_f64(std::istream& in) { return std::bit_cast<double>(get<std::uint64_t>(in)); }

}  // namespace

void write_checkpoint(const Autoencoder<double>& model, std::ostream& out) {
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint64_t>(out, static_cast<std::uint64_t>(model.input_dim()));
  put<std::uint64_t>(out, static_cast<std::uint64_t>(model.code_dim()));
  put<std::uint64_t>(out, model.encoder.size());
  const auto layers = model.stack();
  for (const auto* layer : layers) {
    put<std::uint64_t>(out, static_cast<std::uint64_t>(layer->in_dim()));
    put<std::uint64_t>(out, static_cast<std::uint64_t>(layer->out_dim()));
    put<std::uint8_t>(out, static_cast<std::uint8_t>(layer->activation));
  }
  for (const auto* layer : layers) {
    for (Index r = 0; r < layer->weights.rows(); ++r) {
      for (Index c = 0; c < layer->weights.cols(); ++c) put_f64(out, layer->weights(r, c));
    }
    for (Index r = 0; r < layer->bias.size(); ++r) put_f64(out, layer->bias(r));
  }
  if (!out) throw Error(ErrorCode::Io, "failed writing checkpoint");
}

Autoencoder<double> read_checkpoint(std::istream& in) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw Error(ErrorCode::Parse, "not a model checkpoint");
  }
  const auto version = get<std::uint32_t>(in);
  if (version != kCheckpointVersion) {
    throw Error(ErrorCode::Parse, "unsupported checkpoint version " + std::to_string(version));
  }
  const auto input_dim = static_cast<Index>(get<std::uint64_t>(in));
  const auto code_dim = static_cast<Index>(get<std::uint64_t>(in));
  const auto n_layers = get<std::uint64_t>(in);
  if (n_layers == 0 || n_layers > 1024) throw Error(ErrorCode::Parse, "bad layer count");

  Autoencoder<double> model;
  for (std::uint64_t l = 0; l < 2 * n_layers; ++l) {
    const auto in_dim = static_cast<Index>(get<std::uint64_t>(in));
    const auto out_dim = static_cast<Index>(get<std::uint64_t>(in));
    const auto act = get<std::uint8_t>(in);
    if (act > 1 || in_dim < 1 || out_dim < 1) throw Error(ErrorCode::Parse, "bad layer header");
    auto& dst = l < n_layers ? model.encoder : model.decoder;
    dst.emplace_back(in_dim, out_dim, static_cast<Activation>(act));
  }
  if (model.input_dim() != input_dim || model.code_dim() != code_dim || !model.is_mirrored()) {
    throw Error(ErrorCode::Parse, "checkpoint layer dimensions are inconsistent");
  }
  for (auto* layer : model.stack()) {
    for (Index r = 0; r < layer->weights.rows(); ++r) {
      for (Index c = 0; c < layer->weights.cols(); ++c) layer->weights(r, c) = get_f64(in);
    }
    for (Index r = 0; r < layer->bias.size(); ++r) layer->bias(r) = get_f64(in);
  }
  return model;
}

void save_checkpoint(const Autoencoder<double>& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  write_checkpoint(model, out);
}

Autoencoder<double> load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return read_checkpoint(in);
}

void write_checkpoint_sidecar(const std::filesystem::path& path, const TrainConfig& cfg,
                              double final_loss) {
  nlohmann::ordered_json j;
  j["format_version"] = kCheckpointVersion;
  j["train"] = train_config_to_json(cfg);
  j["final_loss"] = final_loss;
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace dfcm
