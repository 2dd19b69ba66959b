// Copyright 2026 The sclrl Authors.
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

#ifndef SCLRL_CONTRAST_H_
#define SCLRL_CONTRAST_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "sclrl/augment.h"
#include "sclrl/nn.h"
#include "sclrl/subgraph.h"
#include "sclrl/tensor.h"

namespace sclrl {

// kExclusive drops the positive pair from the softmax denominator; kNtXent keeps
// it (the usual InfoNCE / NT-Xent form). View 1 is the only anchor in both.
enum class LossMode { kExclusive, kNtXent };
enum class OptimizerKind { kAdam, kSgd };

std::string_view loss_mode_name(LossMode mode);
LossMode parse_loss_mode(std::string_view name);
std::string_view optimizer_name(OptimizerKind kind);
OptimizerKind parse_optimizer(std::string_view name);

// Norms are clamped from below before dividing, so a zero vector has
// similarity 0 with everything.
inline constexpr double kNormFloor = 1e-8;

// Cosine similarity a.b / (max(|a|, floor) max(|b|, floor)).
template <typename T>
double cosine_sim(std::span<const T> a, std::span<const T> b);

// Mean over rows i of
//   -log( exp(s(z1_i, z2_i)/tau) / sum_{j in D_i} exp(s(z1_i, z2_j)/tau) )
// with D_i = {j != i} (kExclusive) or all j (kNtXent), evaluated with
// log-sum-exp. When dz1/dz2 are given they receive the gradient.
template <typename T>
double batch_loss(const BasicMatrix<T>& z1, const BasicMatrix<T>& z2,
                  double tau, LossMode mode, BasicMatrix<T>* dz1 = nullptr,
                  BasicMatrix<T>* dz2 = nullptr);

template <typename T>
struct BatchResult {
  double loss = 0.0;
  EncoderParams<T> grads;
  std::size_t activation_bytes = 0;
};

// Loss of a batch of view pairs and its exact gradient with respect to every
// encoder parameter. Gradients are accumulated per worker and summed in
// worker order.
template <typename T>
BatchResult<T> batch_gradients(std::span<const View> views1,
                               std::span<const View> views2,
                               const EncoderParams<T>& params, double tau,
                               LossMode mode, int workers = 1);

// Forward-only batch loss.
template <typename T>
double batch_objective(std::span<const View> views1,
                       std::span<const View> views2,
                       const EncoderParams<T>& params, double tau,
                       LossMode mode);

struct TrainConfig {
  std::size_t batch_size = 128;
  double temperature = 0.5;
  int epochs = 50;
  double learning_rate = 1e-3;
  OptimizerKind optimizer = OptimizerKind::kAdam;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  AugmentorSpec aug1{AugmentKind::kAttrSimilarity, 0.2, 3};
  AugmentorSpec aug2{AugmentKind::kEdgeRemove, 0.2, 3};
  bool resample_aug = false;  // draw both kinds per batch from all five
  bool freeze_views = false;  // reuse epoch-0 view randomness every epoch
  LossMode loss_mode = LossMode::kExclusive;
  std::uint64_t seed = 0;
  int workers = 1;

  void validate() const;
};

class Optimizer {
 public:
  Optimizer(const TrainConfig& cfg, const EncoderConfig& shape);
  void step(EncoderParams<float>& params, const EncoderParams<float>& grads);

 private:
  OptimizerKind kind_;
  double lr_;
  double beta1_;
  double beta2_;
  double eps_;
  std::int64_t t_ = 0;
  EncoderParams<float> m_;
  EncoderParams<float> v_;
};

struct TrainReport {
  std::vector<double> epoch_loss;
  std::vector<double> epoch_seconds;
  std::size_t batches_per_epoch = 0;
  std::size_t parameter_bytes = 0;
  std::size_t peak_activation_bytes = 0;
  double temperature = 0.0;

  std::size_t memory_bytes() const {
    return parameter_bytes + peak_activation_bytes;
  }
};

struct TrainResult {
  EncoderParams<float> params;
  TrainReport report;
};

using EpochCallback =
    std::function<void(int epoch, double mean_loss, double seconds)>;

// Contrastive training: per epoch a seeded shuffle, batches of batch_size
// (a trailing batch with fewer than two samples is dropped), two views per
// sample, loss, backprop, optimizer step. Throws DivergenceError naming the
// epoch and batch on a non-finite loss. Bit-reproducible with workers = 1.
TrainResult train(std::span<const SubgraphSample> samples,
                  EncoderParams<float> params, const TrainConfig& cfg,
                  const EpochCallback& on_epoch = {});

// One row per sample: z (or h when `pooled`) of the unaugmented subgraph.
Matrix embed_links(std::span<const SubgraphSample> samples,
                   const EncoderParams<float>& params, bool pooled = false,
                   int workers = 1);

}  // namespace sclrl

#endif  // SCLRL_CONTRAST_H_
