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

// Deep autoencoder built from stacked denoising autoencoders.
//
// Data matrices hold one sample per row. A layer maps Z = A W^T + 1 b^T and
// applies its activation. The encoder runs D_x -> hidden... -> p and the
// decoder mirrors it back to D_x. Reconstruction loss is
//   L = (1/n) sum_n |x_n - y_n|^2.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "dfcm/common.hpp"

namespace dfcm {

enum class Activation : std::uint8_t { Linear = 0, Relu = 1 };

enum class OptimizerKind { AdaptiveMoments, SgdMomentum };

inline const std::vector<Index> kDefaultHiddenDims = {500, 500, 2000};

template <typename Scalar>
struct DenseLayer {
  Matrix<Scalar> weights;  // out x in
  Vector<Scalar> bias;     // out
  Activation activation = Activation::Linear;

  DenseLayer() = default;
  DenseLayer(Index in_dim, Index out_dim, Activation act)
      : weights(Matrix<Scalar>::Zero(out_dim, in_dim)),
        bias(Vector<Scalar>::Zero(out_dim)),
        activation(act) {}

  Index in_dim() const { return weights.cols(); }
  Index out_dim() const { return weights.rows(); }

  Matrix<Scalar> pre_activation(const Matrix<Scalar>& A) const {
    Matrix<Scalar> Z = A * weights.transpose();
    Z.rowwise() += bias.transpose();
    return Z;
  }

  Matrix<Scalar> activate(Matrix<Scalar> Z) const {
    if (activation == Activation::Relu) Z = Z.cwiseMax(Scalar(0));
    return Z;
  }

  Matrix<Scalar> forward(const Matrix<Scalar>& A) const { return activate(pre_activation(A)); }
};

template <typename Scalar>
struct Autoencoder {
  std::vector<DenseLayer<Scalar>> encoder;
  std::vector<DenseLayer<Scalar>> decoder;

  Index input_dim() const { return encoder.front().in_dim(); }
  Index code_dim() const { return encoder.back().out_dim(); }

  /// Decoder layer j mirrors encoder layer L-1-j.
  DenseLayer<Scalar>& mirror_of(std::size_t encoder_index) {
    return decoder[decoder.size() - 1 - encoder_index];
  }
  const DenseLayer<Scalar>& mirror_of(std::size_t encoder_index) const {
    return decoder[decoder.size() - 1 - encoder_index];
  }

  bool is_mirrored() const {
    if (encoder.size() != decoder.size()) return false;
    for (std::size_t i = 0; i < encoder.size(); ++i) {
      const auto& m = mirror_of(i);
      if (m.in_dim() != encoder[i].out_dim() || m.out_dim() != encoder[i].in_dim()) return false;
    }
    return true;
  }

  std::vector<const DenseLayer<Scalar>*> stack() const {
    std::vector<const DenseLayer<Scalar>*> out;
    for (const auto& l : encoder) out.push_back(&l);
    for (const auto& l : decoder) out.push_back(&l);
    return out;
  }
  std::vector<DenseLayer<Scalar>*> stack() {
    std::vector<DenseLayer<Scalar>*> out;
    for (auto& l : encoder) out.push_back(&l);
    for (auto& l : decoder) out.push_back(&l);
    return out;
  }
};

struct TrainConfig {
  int epochs = 100;
  std::optional<int> pretrain_epochs;  // per denoising layer; defaults to epochs
  Index batch_size = 256;
  double learning_rate = 1e-3;
  double dropout = 0.2;
  std::uint64_t seed = 0;
  OptimizerKind optimizer = OptimizerKind::AdaptiveMoments;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double stabilizer = 1e-8;
  double momentum = 0.9;

  int layer_epochs() const { return pretrain_epochs.value_or(epochs); }

  void validate() const {
    if (epochs < 1) throw Error(ErrorCode::InvalidConfig, "epochs must be >= 1");
    if (pretrain_epochs && *pretrain_epochs < 1) {
      throw Error(ErrorCode::InvalidConfig, "pretrain_epochs must be >= 1");
    }
    if (batch_size < 1) throw Error(ErrorCode::InvalidConfig, "batch_size must be >= 1");
    if (!(learning_rate > 0.0)) throw Error(ErrorCode::InvalidConfig, "learning_rate must be > 0");
    if (!(dropout >= 0.0 && dropout < 1.0)) {
      throw Error(ErrorCode::InvalidConfig, "dropout must be in [0, 1)");
    }
    if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0) || !(stabilizer > 0.0)) {
      throw Error(ErrorCode::InvalidConfig, "invalid moment-estimation hyperparameters");
    }
    if (!(momentum >= 0.0 && momentum < 1.0)) {
      throw Error(ErrorCode::InvalidConfig, "momentum must be in [0, 1)");
    }
  }
};

/// Encoder input -> hidden... -> code, decoder mirrored. Hidden layers are
/// relu; the code layer and the reconstruction layer are linear. Weights are
/// uniform in +-sqrt(6 / (fan_in + fan_out)), biases zero.
template <typename Scalar = double>
Autoencoder<Scalar> build_autoencoder(Index input_dim, Index code_dim, std::uint64_t seed,
                                      const std::vector<Index>& hidden = kDefaultHiddenDims) {
  if (input_dim < 1 || code_dim < 1) {
    throw Error(ErrorCode::InvalidConfig, "autoencoder dimensions must be >= 1");
  }
  std::vector<Index> dims{input_dim};
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(code_dim);
  for (Index d : dims) {
    if (d < 1) throw Error(ErrorCode::InvalidConfig, "layer width must be >= 1");
  }

  const std::size_t L = dims.size() - 1;
  Autoencoder<Scalar> model;
  for (std::size_t i = 0; i < L; ++i) {
    model.encoder.emplace_back(dims[i], dims[i + 1],
                               i + 1 == L ? Activation::Linear : Activation::Relu);
  }
  for (std::size_t j = 0; j < L; ++j) {
    model.decoder.emplace_back(dims[L - j], dims[L - j - 1],
                               j + 1 == L ? Activation::Linear : Activation::Relu);
  }

  std::mt19937_64 rng(seed);
  for (DenseLayer<Scalar>* layer : model.stack()) {
    const double limit = std::sqrt(6.0 / static_cast<double>(layer->in_dim() + layer->out_dim()));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (Index c = 0; c < layer->weights.cols(); ++c) {
      for (Index r = 0; r < layer->weights.rows(); ++r) layer->weights(r, c) = Scalar(dist(rng));
    }
  }
  return model;
}

// --- dropout -------------------------------------------------------------------

/// Inverted dropout with a given keep mask: kept entries scale by 1/(1-r).
template <typename DerivedX, typename DerivedK>
Matrix<typename DerivedX::Scalar> apply_dropout_mask(const Eigen::MatrixBase<DerivedX>& x,
                                                     const Eigen::MatrixBase<DerivedK>& keep,
                                                     double rate) {
  using Scalar = typename DerivedX::Scalar;
  const Scalar scale = Scalar(1.0 / (1.0 - rate));
  return (x.array() * keep.template cast<Scalar>().array() * scale).matrix();
}

template <typename Scalar>
Matrix<Scalar> sample_dropout_scale(Index rows, Index cols, double rate, std::mt19937_64& rng) {
  std::bernoulli_distribution keep(1.0 - rate);
  const Scalar scale = Scalar(1.0 / (1.0 - rate));
  Matrix<Scalar> mask(rows, cols);
  for (Index c = 0; c < cols; ++c) {
    for (Index r = 0; r < rows; ++r) mask(r, c) = keep(rng) ? scale : Scalar(0);
  }
  return mask;
}

template <typename Derived>
Matrix<typename Derived::Scalar> dropout(const Eigen::MatrixBase<Derived>& x, double rate,
                                         std::mt19937_64& rng) {
  using Scalar = typename Derived::Scalar;
  if (rate <= 0.0) return x;
  return x.cwiseProduct(sample_dropout_scale<Scalar>(x.rows(), x.cols(), rate, rng));
}

/// One pass through a denoising layer pair:
///   x~ = dropout(x), h = g1(W1 x~ + b1), h~ = dropout(h), y = g2(W2 h~ + b2)
template <typename Scalar>
std::pair<Vector<Scalar>, Vector<Scalar>> denoising_forward(const Vector<Scalar>& x,
                                                            const DenseLayer<Scalar>& layer_in,
                                                            const DenseLayer<Scalar>& layer_out,
                                                            double rate, std::mt19937_64& rng) {
  Matrix<Scalar> xr = dropout(x.transpose(), rate, rng);
  Matrix<Scalar> h = layer_in.forward(xr);
  Matrix<Scalar> y = layer_out.forward(dropout(h, rate, rng));
  return {h.row(0).transpose(), y.row(0).transpose()};
}

// --- forward / backward over a layer stack ---------------------------------------

template <typename Scalar>
struct LayerGradient {
  Matrix<Scalar> weights;
  Vector<Scalar> bias;
};

template <typename Scalar>
using Gradients = std::vector<LayerGradient<Scalar>>;

template <typename Scalar>
Matrix<Scalar> forward_stack(std::span<const DenseLayer<Scalar>* const> layers, Matrix<Scalar> A) {
  for (const auto* layer : layers) A = layer->forward(A);
  return A;
}

/// Loss and exact gradients of (1/n) |target - stack(input)|^2. When `rate` > 0
/// each layer's input is corrupted by inverted dropout drawn from `rng`.
template <typename Scalar>
Scalar loss_and_gradients(std::span<const DenseLayer<Scalar>* const> layers,
                          const Matrix<Scalar>& input, const Matrix<Scalar>& target,
                          Gradients<Scalar>* grads, double rate = 0.0,
                          std::mt19937_64* rng = nullptr) {
  const std::size_t L = layers.size();
  const Scalar n = Scalar(input.rows());
  std::vector<Matrix<Scalar>> inputs(L);  // post-dropout input to each layer
  std::vector<Matrix<Scalar>> masks(L);
  std::vector<Matrix<Scalar>> pre(L);
  Matrix<Scalar> A = input;
  for (std::size_t l = 0; l < L; ++l) {
    if (rate > 0.0 && rng) {
      masks[l] = sample_dropout_scale<Scalar>(A.rows(), A.cols(), rate, *rng);
      A = A.cwiseProduct(masks[l]);
    }
    inputs[l] = std::move(A);
    pre[l] = layers[l]->pre_activation(inputs[l]);
    A = layers[l]->activate(pre[l]);
  }
  const Matrix<Scalar> residual = A - target;
  const Scalar loss = residual.squaredNorm() / n;
  if (!grads) return loss;

  grads->assign(L, {});
  Matrix<Scalar> delta = (Scalar(2) / n) * residual;  // dL/dA for the last layer
  for (std::size_t l = L; l-- > 0;) {
    if (layers[l]->activation == Activation::Relu) {
      delta = (pre[l].array() > Scalar(0)).select(delta, Scalar(0));
    }
    (*grads)[l].weights = delta.transpose() * inputs[l];
    (*grads)[l].bias = delta.colwise().sum().transpose();
    if (l > 0) {
      delta = delta * layers[l]->weights;
      if (masks[l].size() > 0) delta = delta.cwiseProduct(masks[l]);
    }
  }
  return loss;
}

/// Gradients of the end-to-end reconstruction loss for every encoder layer
/// followed by every decoder layer.
template <typename Scalar>
Gradients<Scalar> backprop_gradients(const Autoencoder<Scalar>& model, const Matrix<Scalar>& batch,
                                     Scalar* loss = nullptr) {
  const auto layers = model.stack();
  Gradients<Scalar> grads;
  Scalar value = loss_and_gradients<Scalar>(layers, batch, batch, &grads);
  if (loss) *loss = value;
  return grads;
}

// --- optimizers --------------------------------------------------------------------

template <typename Scalar>
class Optimizer {
 public:
  Optimizer(const TrainConfig& cfg, std::span<DenseLayer<Scalar>* const> layers) : cfg_(cfg) {
    for (const auto* layer : layers) {
      first_.push_back({Matrix<Scalar>::Zero(layer->out_dim(), layer->in_dim()),
                        Vector<Scalar>::Zero(layer->out_dim())});
      if (cfg.optimizer == OptimizerKind::AdaptiveMoments) second_.push_back(first_.back());
    }
  }

  void step(std::span<DenseLayer<Scalar>* const> layers, const Gradients<Scalar>& grads) {
    ++t_;
    const Scalar lr = Scalar(cfg_.learning_rate);
    if (cfg_.optimizer == OptimizerKind::SgdMomentum) {
      const Scalar mu = Scalar(cfg_.momentum);
      for (std::size_t l = 0; l < layers.size(); ++l) {
        first_[l].weights = mu * first_[l].weights - lr * grads[l].weights;
        first_[l].bias = mu * first_[l].bias - lr * grads[l].bias;
        layers[l]->weights += first_[l].weights;
        layers[l]->bias += first_[l].bias;
      }
      return;
    }
    const Scalar b1 = Scalar(cfg_.beta1);
    const Scalar b2 = Scalar(cfg_.beta2);
    const Scalar eps = Scalar(cfg_.stabilizer);
    const Scalar c1 = Scalar(1) - Scalar(std::pow(cfg_.beta1, t_));
    const Scalar c2 = Scalar(1) - Scalar(std::pow(cfg_.beta2, t_));
    const Scalar step = lr * std::sqrt(c2) / c1;
    auto update = [&](auto& param, auto& m, auto& v, const auto& g) {
      m = b1 * m + (Scalar(1) - b1) * g;
      v = b2 * v + (Scalar(1) - b2) * g.cwiseAbs2();
      param.array() -= step * m.array() / (v.array().sqrt() + eps * std::sqrt(c2));
    };
    for (std::size_t l = 0; l < layers.size(); ++l) {
      update(layers[l]->weights, first_[l].weights, second_[l].weights, grads[l].weights);
      update(layers[l]->bias, first_[l].bias, second_[l].bias, grads[l].bias);
    }
  }

 private:
  TrainConfig cfg_;
  long t_ = 0;
  std::vector<LayerGradient<Scalar>> first_;
  std::vector<LayerGradient<Scalar>> second_;
};

// --- row access for dense and sparse inputs ----------------------------------------

template <typename Derived>
Matrix<typename Derived::Scalar> gather_rows(const Eigen::MatrixBase<Derived>& X,
                                             std::span<const Index> rows) {
  Matrix<typename Derived::Scalar> out(static_cast<Index>(rows.size()), X.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Index>(r)) = X.row(rows[r]);
  return out;
}

template <typename Scalar, typename StorageIndex>
Matrix<Scalar> gather_rows(const Eigen::SparseMatrix<Scalar, Eigen::RowMajor, StorageIndex>& X,
                           std::span<const Index> rows) {
  Matrix<Scalar> out = Matrix<Scalar>::Zero(static_cast<Index>(rows.size()), X.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    using It = typename Eigen::SparseMatrix<Scalar, Eigen::RowMajor, StorageIndex>::InnerIterator;
    for (It it(X, rows[r]); it; ++it) out(static_cast<Index>(r), it.col()) = it.value();
  }
  return out;
}

/// Applies `fn` to consecutive dense row blocks of at most `chunk` rows.
template <typename Input, typename Fn>
void for_each_chunk(const Input& X, Index chunk, Fn&& fn) {
  std::vector<Index> idx;
  for (Index start = 0; start < X.rows(); start += chunk) {
    const Index stop = std::min<Index>(X.rows(), start + chunk);
    idx.resize(static_cast<std::size_t>(stop - start));
    std::iota(idx.begin(), idx.end(), start);
    fn(start, gather_rows(X, idx));
  }
}

inline constexpr Index kInferenceChunk = 1024;

template <typename Scalar, typename Input>
Scalar reconstruction_loss(std::span<const DenseLayer<Scalar>* const> layers, const Input& X) {
  Scalar total(0);
  for_each_chunk(X, kInferenceChunk, [&](Index, const Matrix<Scalar>& block) {
    total += (forward_stack<Scalar>(layers, block) - block).squaredNorm();
  });
  return total / Scalar(X.rows());
}

/// Minibatch training of `layers` to reconstruct X. trace[0] is the clean loss
/// before training and trace[e] the clean loss after epoch e.
template <typename Scalar, typename Input>
std::vector<Scalar> train_reconstruction(std::span<DenseLayer<Scalar>* const> layers,
                                         const Input& X, const TrainConfig& cfg, int epochs,
                                         double rate, std::uint64_t seed) {
  std::vector<const DenseLayer<Scalar>*> view(layers.begin(), layers.end());
  std::mt19937_64 rng(seed);
  Optimizer<Scalar> optimizer(cfg, layers);
  std::vector<Index> order(static_cast<std::size_t>(X.rows()));
  std::iota(order.begin(), order.end(), Index{0});

  auto checked = [&](Scalar loss, int epoch) {
    if (!std::isfinite(static_cast<double>(loss))) {
      throw Error(ErrorCode::NonFiniteLoss,
                  "loss became non-finite at epoch " + std::to_string(epoch) +
                      "; try a smaller learning rate");
    }
    return loss;
  };

  std::vector<Scalar> trace{checked(reconstruction_loss<Scalar>(view, X), 0)};
  Gradients<Scalar> grads;
  for (int epoch = 1; epoch <= epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t stop = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      const Matrix<Scalar> batch =
          gather_rows(X, std::span<const Index>(order.data() + start, stop - start));
      checked(loss_and_gradients<Scalar>(view, batch, batch, &grads, rate, &rng), epoch);
      optimizer.step(layers, grads);
    }
    trace.push_back(checked(reconstruction_loss<Scalar>(view, X), epoch));
  }
  return trace;
}

// --- pretraining, fine-tuning, transforms --------------------------------------------

template <typename Scalar>
struct PretrainedLayer {
  DenseLayer<Scalar> encoder;
  DenseLayer<Scalar> decoder;
  Matrix<Scalar> next_input;  // clean encoder activations of the training input
  std::vector<Scalar> loss_trace;
};

/// Fits the denoising pair (encoder layer i, its mirrored decoder layer) to
/// reconstruct H_prev, with dropout on both layer inputs.
template <typename Scalar, typename Input>
PretrainedLayer<Scalar> pretrain_layer(const Input& H_prev, const Autoencoder<Scalar>& model,
                                       std::size_t layer_index, const TrainConfig& cfg) {
  cfg.validate();
  if (layer_index >= model.encoder.size()) {
    throw Error(ErrorCode::InvalidConfig, "layer index out of range");
  }
  PretrainedLayer<Scalar> out{model.encoder[layer_index], model.mirror_of(layer_index), {}, {}};
  if (H_prev.cols() != out.encoder.in_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "layer input width does not match");
  }
  std::vector<DenseLayer<Scalar>*> pair{&out.encoder, &out.decoder};
  out.loss_trace = train_reconstruction<Scalar>(
      pair, H_prev, cfg, cfg.layer_epochs(), cfg.dropout,
      mix_seed(cfg.seed, "pretrain-" + std::to_string(layer_index)));

  out.next_input.resize(H_prev.rows(), out.encoder.out_dim());
  for_each_chunk(H_prev, kInferenceChunk, [&](Index start, const Matrix<Scalar>& block) {
    out.next_input.middleRows(start, block.rows()) = out.encoder.forward(block);
  });
  return out;
}

/// Greedy layer-wise pretraining: layer i trains on the clean activations of
/// layer i-1 (layer 0 on X) and its weights are copied into the model.
template <typename Scalar, typename Input>
std::vector<std::vector<Scalar>> greedy_pretrain(const Input& X, Autoencoder<Scalar>& model,
                                                 const TrainConfig& cfg) {
  std::vector<std::vector<Scalar>> traces;
  auto first = pretrain_layer(X, model, 0, cfg);
  model.encoder[0] = std::move(first.encoder);
  model.mirror_of(0) = std::move(first.decoder);
  traces.push_back(std::move(first.loss_trace));
  Matrix<Scalar> H = std::move(first.next_input);
  for (std::size_t i = 1; i < model.encoder.size(); ++i) {
    auto trained = pretrain_layer(H, model, i, cfg);
    model.encoder[i] = std::move(trained.encoder);
    model.mirror_of(i) = std::move(trained.decoder);
    traces.push_back(std::move(trained.loss_trace));
    H = std::move(trained.next_input);
  }
  return traces;
}

/// End-to-end reconstruction training without dropout. Returns the loss trace.
template <typename Scalar, typename Input>
std::vector<Scalar> fine_tune(const Input& X, Autoencoder<Scalar>& model, const TrainConfig& cfg) {
  cfg.validate();
  if (X.cols() != model.input_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "input width does not match the model");
  }
  auto layers = model.stack();
  return train_reconstruction<Scalar>(layers, X, cfg, cfg.epochs, 0.0,
                                      mix_seed(cfg.seed, "finetune"));
}

template <typename Scalar, typename Input>
Matrix<Scalar> encode(const Autoencoder<Scalar>& model, const Input& X) {
  if (X.cols() != model.input_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "encode: expected " +
                                                  std::to_string(model.input_dim()) +
                                                  " columns, got " + std::to_string(X.cols()));
  }
  std::vector<const DenseLayer<Scalar>*> layers;
  for (const auto& l : model.encoder) layers.push_back(&l);
  Matrix<Scalar> codes(X.rows(), model.code_dim());
  for_each_chunk(X, kInferenceChunk, [&](Index start, const Matrix<Scalar>& block) {
    codes.middleRows(start, block.rows()) = forward_stack<Scalar>(layers, block);
  });
  return codes;
}

template <typename Scalar, typename Derived>
Matrix<Scalar> decode(const Autoencoder<Scalar>& model, const Eigen::MatrixBase<Derived>& C) {
  if (C.cols() != model.code_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "decode: expected " +
                                                  std::to_string(model.code_dim()) +
                                                  " columns, got " + std::to_string(C.cols()));
  }
  std::vector<const DenseLayer<Scalar>*> layers;
  for (const auto& l : model.decoder) layers.push_back(&l);
  return forward_stack<Scalar>(layers, C.template cast<Scalar>().eval());
}

}  // namespace dfcm
