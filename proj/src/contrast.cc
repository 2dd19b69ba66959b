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

#include "sclrl/contrast.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "sclrl/errors.h"
#include "sclrl/parallel.h"
#include "sclrl/rng.h"

namespace sclrl {
namespace {

constexpr std::uint64_t kShuffleStream = 11;
constexpr std::uint64_t kViewStream = 12;
constexpr std::uint64_t kAugPairStream = 13;

template <typename T>
double norm(std::span<const T> v) {
  double acc = 0.0;
  for (T x : v) acc += static_cast<double>(x) * x;
  return std::sqrt(acc);
}

template <typename T>
double dot(std::span<const T> a, std::span<const T> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    acc += static_cast<double>(a[i]) * b[i];
  }
  return acc;
}

}  // namespace

std::string_view loss_mode_name(LossMode mode) {
  return mode == LossMode::kExclusive ? "exclusive" : "ntxent";
}

LossMode parse_loss_mode(std::string_view name) {
  if (name == "exclusive") return LossMode::kExclusive;
  if (name == "ntxent") return LossMode::kNtXent;
  throw std::invalid_argument("unknown loss mode '" + std::string(name) +
                              "' (expected exclusive or ntxent)");
}

std::string_view optimizer_name(OptimizerKind kind) {
  return kind == OptimizerKind::kAdam ? "adam" : "sgd";
}

OptimizerKind parse_optimizer(std::string_view name) {
  if (name == "adam") return OptimizerKind::kAdam;
  if (name == "sgd") return OptimizerKind::kSgd;
  throw std::invalid_argument("unknown optimizer '" + std::string(name) +
                              "' (expected adam or sgd)");
}

template <typename T>
double cosine_sim(std::span<const T> a, std::span<const T> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("cosine_sim: length mismatch");
  }
  return dot(a, b) / (std::max(norm(a), kNormFloor) * std::max(norm(b), kNormFloor));
}

template <typename T>
double batch_loss(const BasicMatrix<T>& z1, const BasicMatrix<T>& z2,
                  double tau, LossMode mode, BasicMatrix<T>* dz1,
                  BasicMatrix<T>* dz2) {
  const std::size_t n = z1.rows();
  const std::size_t d = z1.cols();
  if (!same_shape(z1, z2)) {
    throw std::invalid_argument("batch_loss: view embeddings differ in shape");
  }
  if (n < 2) {
    throw std::invalid_argument("batch_loss: need at least 2 rows, got " +
                                std::to_string(n));
  }
  if (!(tau > 0.0)) {
    throw std::invalid_argument("batch_loss: temperature must be positive");
  }

  // Norms below the floor are clamped; such rows get no projection term in
  // the gradient since the clamped normalization is linear there.
  std::vector<double> n1(n);
  std::vector<double> n2(n);
  std::vector<double> proj1(n);
  std::vector<double> proj2(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = norm(z1.row(i));
    const double b = norm(z2.row(i));
    n1[i] = std::max(a, kNormFloor);
    n2[i] = std::max(b, kNormFloor);
    proj1[i] = a > kNormFloor ? 1.0 : 0.0;
    proj2[i] = b > kNormFloor ? 1.0 : 0.0;
  }
  std::vector<double> s(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      s[i * n + j] = dot(z1.row(i), z2.row(j)) / (n1[i] * n2[j]);
    }
  }

  // g[i*n+j] = dL/ds_ij.
  std::vector<double> g(n * n, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (mode == LossMode::kExclusive && j == i) continue;
      mx = std::max(mx, s[i * n + j] / tau);
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (mode == LossMode::kExclusive && j == i) continue;
      sum += std::exp(s[i * n + j] / tau - mx);
    }
    const double lse = mx + std::log(sum);
    total += lse - s[i * n + i] / tau;
    for (std::size_t j = 0; j < n; ++j) {
      if (mode == LossMode::kExclusive && j == i) continue;
      g[i * n + j] = std::exp(s[i * n + j] / tau - lse) / (tau * n);
    }
    g[i * n + i] -= 1.0 / (tau * n);
  }

  if (dz1 != nullptr && dz2 != nullptr) {
    *dz1 = BasicMatrix<T>(n, d);
    *dz2 = BasicMatrix<T>(n, d);
    // ds_ij/dz1_i = (u2_j - s_ij u1_i) / |z1_i|, u = unit vector; likewise
    // for z2_j with the roles swapped.
    std::vector<double> acc(d);
    for (std::size_t i = 0; i < n; ++i) {
      std::fill(acc.begin(), acc.end(), 0.0);
      const auto a = z1.row(i);
      for (std::size_t j = 0; j < n; ++j) {
        const double gij = g[i * n + j];
        if (gij == 0.0) continue;
        const auto b = z2.row(j);
        for (std::size_t c = 0; c < d; ++c) {
          acc[c] += gij * (b[c] / n2[j] - proj1[i] * s[i * n + j] * a[c] / n1[i]);
        }
      }
      for (std::size_t c = 0; c < d; ++c) {
        (*dz1)(i, c) = static_cast<T>(acc[c] / n1[i]);
      }
    }
    for (std::size_t j = 0; j < n; ++j) {
      std::fill(acc.begin(), acc.end(), 0.0);
      const auto b = z2.row(j);
      for (std::size_t i = 0; i < n; ++i) {
        const double gij = g[i * n + j];
        if (gij == 0.0) continue;
        const auto a = z1.row(i);
        for (std::size_t c = 0; c < d; ++c) {
          acc[c] += gij * (a[c] / n1[i] - proj2[j] * s[i * n + j] * b[c] / n2[j]);
        }
      }
      for (std::size_t c = 0; c < d; ++c) {
        (*dz2)(j, c) = static_cast<T>(acc[c] / n2[j]);
      }
    }
  }
  return total / static_cast<double>(n);
}

template <typename T>
BatchResult<T> batch_gradients(std::span<const View> views1,
                               std::span<const View> views2,
                               const EncoderParams<T>& params, double tau,
                               LossMode mode, int workers) {
  const std::size_t n = views1.size();
  if (views2.size() != n) {
    throw std::invalid_argument("batch_gradients: view lists differ in size");
  }
  const std::size_t d = params.config.embed_dim;
  std::vector<EncodeTape<T>> tapes1(n);
  std::vector<EncodeTape<T>> tapes2(n);
  parallel_chunks(n, workers, [&](std::size_t begin, std::size_t end, int) {
    for (std::size_t i = begin; i < end; ++i) {
      tapes1[i] = encode_forward(views1[i], params);
      tapes2[i] = encode_forward(views2[i], params);
    }
  });

  BatchResult<T> result;
  BasicMatrix<T> z1(n, d);
  BasicMatrix<T> z2(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    std::copy_n(tapes1[i].z.data(), d, z1.row(i).begin());
    std::copy_n(tapes2[i].z.data(), d, z2.row(i).begin());
    result.activation_bytes += tapes1[i].bytes() + tapes2[i].bytes();
  }
  result.activation_bytes += 4 * n * d * sizeof(T);

  BasicMatrix<T> dz1;
  BasicMatrix<T> dz2;
  result.loss = batch_loss(z1, z2, tau, mode, &dz1, &dz2);

  const int w = std::max(1, std::min<int>(workers, static_cast<int>(n)));
  std::vector<EncoderParams<T>> partial(w);
  parallel_chunks(n, w, [&](std::size_t begin, std::size_t end, int worker) {
    EncoderParams<T>& g = partial[worker];
    g = zero_params<T>(params.config);
    for (std::size_t i = begin; i < end; ++i) {
      encode_backward<T>(tapes1[i], params, dz1.row(i), {}, g);
      encode_backward<T>(tapes2[i], params, dz2.row(i), {}, g);
    }
  });
  result.grads = std::move(partial[0]);
  for (int k = 1; k < w; ++k) {
    if (partial[k].layers.empty()) continue;  // worker had no rows
    add_scaled(result.grads, partial[k], T(1));
  }
  return result;
}

template <typename T>
double batch_objective(std::span<const View> views1,
                       std::span<const View> views2,
                       const EncoderParams<T>& params, double tau,
                       LossMode mode) {
  const std::size_t n = views1.size();
  const std::size_t d = params.config.embed_dim;
  BasicMatrix<T> z1(n, d);
  BasicMatrix<T> z2(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    const auto e1 = encode(views1[i], params);
    const auto e2 = encode(views2[i], params);
    std::copy(e1.z.begin(), e1.z.end(), z1.row(i).begin());
    std::copy(e2.z.begin(), e2.z.end(), z2.row(i).begin());
  }
  return batch_loss(z1, z2, tau, mode);
}

template double cosine_sim<float>(std::span<const float>,
                                  std::span<const float>);
template double cosine_sim<double>(std::span<const double>,
                                   std::span<const double>);
template double batch_loss<float>(const Matrix&, const Matrix&, double,
                                  LossMode, Matrix*, Matrix*);
template double batch_loss<double>(const BasicMatrix<double>&,
                                   const BasicMatrix<double>&, double,
                                   LossMode, BasicMatrix<double>*,
                                   BasicMatrix<double>*);
template BatchResult<float> batch_gradients<float>(
    std::span<const View>, std::span<const View>, const EncoderParams<float>&,
    double, LossMode, int);
template BatchResult<double> batch_gradients<double>(
    std::span<const View>, std::span<const View>,
    const EncoderParams<double>&, double, LossMode, int);
template double batch_objective<float>(std::span<const View>,
                                       std::span<const View>,
                                       const EncoderParams<float>&, double,
                                       LossMode);
template double batch_objective<double>(std::span<const View>,
                                        std::span<const View>,
                                        const EncoderParams<double>&, double,
                                        LossMode);

void TrainConfig::validate() const {
  if (batch_size < 2) {
    throw std::invalid_argument("batch_size must be >= 2");
  }
  if (!(temperature > 0.0)) {
    throw std::invalid_argument("temperature must be positive");
  }
  if (epochs < 0) throw std::invalid_argument("epochs must be >= 0");
  if (!(learning_rate >= 0.0)) {
    throw std::invalid_argument("learning_rate must be >= 0");
  }
  if (!(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0)) {
    throw std::invalid_argument("adam betas must lie in [0,1)");
  }
  if (!(adam_eps > 0.0)) throw std::invalid_argument("adam eps must be > 0");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  aug1.validate();
  aug2.validate();
}

Optimizer::Optimizer(const TrainConfig& cfg, const EncoderConfig& shape)
    : kind_(cfg.optimizer),
      lr_(cfg.learning_rate),
      beta1_(cfg.beta1),
      beta2_(cfg.beta2),
      eps_(cfg.adam_eps) {
  if (kind_ == OptimizerKind::kAdam) {
    m_ = zero_params<float>(shape);
    v_ = zero_params<float>(shape);
  }
}

void Optimizer::step(EncoderParams<float>& params,
                     const EncoderParams<float>& grads) {
  if (kind_ == OptimizerKind::kSgd) {
    add_scaled(params, grads, static_cast<float>(-lr_));
    return;
  }
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  std::vector<Matrix*> ps;
  std::vector<const Matrix*> gs;
  std::vector<Matrix*> ms;
  std::vector<Matrix*> vs;
  params.visit([&](const std::string&, Matrix& t) { ps.push_back(&t); });
  grads.visit([&](const std::string&, const Matrix& t) { gs.push_back(&t); });
  m_.visit([&](const std::string&, Matrix& t) { ms.push_back(&t); });
  v_.visit([&](const std::string&, Matrix& t) { vs.push_back(&t); });
  for (std::size_t k = 0; k < ps.size(); ++k) {
    auto p = ps[k]->values();
    const auto g = gs[k]->values();
    auto m = ms[k]->values();
    auto v = vs[k]->values();
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double gi = g[i];
      const double mi = beta1_ * m[i] + (1.0 - beta1_) * gi;
      const double vi = beta2_ * v[i] + (1.0 - beta2_) * gi * gi;
      m[i] = static_cast<float>(mi);
      v[i] = static_cast<float>(vi);
      p[i] -= static_cast<float>(lr_ * (mi / c1) /
                                 (std::sqrt(vi / c2) + eps_));
    }
  }
}

TrainResult train(std::span<const SubgraphSample> samples,
                  EncoderParams<float> params, const TrainConfig& cfg,
                  const EpochCallback& on_epoch) {
  cfg.validate();
  const std::size_t n = samples.size();
  if (n < cfg.batch_size) {
    throw std::invalid_argument("train: " + std::to_string(n) +
                                " samples is fewer than one batch of " +
                                std::to_string(cfg.batch_size));
  }
  TrainResult result;
  TrainReport& report = result.report;
  report.temperature = cfg.temperature;
  report.parameter_bytes = params.num_scalars() * sizeof(float);
  Optimizer optimizer(cfg, params.config);

  std::vector<std::size_t> order(n);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng shuffle_rng(derive_seed(cfg.seed, {kShuffleStream,
                                           static_cast<std::uint64_t>(epoch)}));
    std::shuffle(order.begin(), order.end(), shuffle_rng);

    double loss_sum = 0.0;
    std::size_t batches = 0;
    for (std::size_t begin = 0; begin < n; begin += cfg.batch_size) {
      const std::size_t size = std::min(cfg.batch_size, n - begin);
      if (size < 2) break;
      const std::size_t batch_index = begin / cfg.batch_size;

      AugmentorSpec t1 = cfg.aug1;
      AugmentorSpec t2 = cfg.aug2;
      if (cfg.resample_aug) {
        Rng pick(derive_seed(cfg.seed, {kAugPairStream,
                                        static_cast<std::uint64_t>(epoch),
                                        batch_index}));
        std::uniform_int_distribution<std::size_t> kind(
            0, kAllAugmentKinds.size() - 1);
        t1.kind = kAllAugmentKinds[kind(pick)];
        t2.kind = kAllAugmentKinds[kind(pick)];
      }

      std::vector<View> views1(size);
      std::vector<View> views2(size);
      const std::uint64_t view_epoch =
          cfg.freeze_views ? 0 : static_cast<std::uint64_t>(epoch);
      parallel_chunks(size, cfg.workers,
                      [&](std::size_t lo, std::size_t hi, int) {
                        for (std::size_t r = lo; r < hi; ++r) {
                          const std::size_t idx = order[begin + r];
                          auto [a, b] = make_views(
                              samples[idx], t1, t2,
                              derive_seed(cfg.seed,
                                          {kViewStream, view_epoch, idx}));
                          views1[r] = std::move(a);
                          views2[r] = std::move(b);
                        }
                      });

      BatchResult<float> br;
      try {
        br = batch_gradients<float>(views1, views2, params, cfg.temperature,
                                    cfg.loss_mode, cfg.workers);
      } catch (const std::domain_error& e) {
        throw DivergenceError("epoch " + std::to_string(epoch) + " batch " +
                              std::to_string(batch_index) + ": " + e.what());
      } catch (const DivergenceError& e) {
        throw DivergenceError("epoch " + std::to_string(epoch) + " batch " +
                              std::to_string(batch_index) + ": " + e.what());
      }
      if (!std::isfinite(br.loss)) {
        throw DivergenceError("non-finite loss at epoch " +
                              std::to_string(epoch) + " batch " +
                              std::to_string(batch_index));
      }
      std::size_t view_bytes = 0;
      for (std::size_t r = 0; r < size; ++r) {
        view_bytes += (views1[r].adjacency.size() + views1[r].features.size() +
                       views2[r].adjacency.size() + views2[r].features.size()) *
                      sizeof(float);
      }
      report.peak_activation_bytes =
          std::max(report.peak_activation_bytes,
                   br.activation_bytes + view_bytes +
                       br.grads.num_scalars() * sizeof(float));
      optimizer.step(params, br.grads);
      loss_sum += br.loss;
      ++batches;
    }
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    const double mean = batches > 0 ? loss_sum / static_cast<double>(batches)
                                    : 0.0;
    report.batches_per_epoch = batches;
    report.epoch_loss.push_back(mean);
    report.epoch_seconds.push_back(secs);
    if (on_epoch) on_epoch(epoch, mean, secs);
  }
  result.params = std::move(params);
  return result;
}

Matrix embed_links(std::span<const SubgraphSample> samples,
                   const EncoderParams<float>& params, bool pooled,
                   int workers) {
  const std::size_t width =
      pooled ? params.config.pooled_dim() : params.config.embed_dim;
  Matrix out(samples.size(), width);
  parallel_chunks(samples.size(), workers,
                  [&](std::size_t begin, std::size_t end, int) {
                    for (std::size_t i = begin; i < end; ++i) {
                      const View view{samples[i].adjacency,
                                      samples[i].features,
                                      AugmentKind::kIdentical};
                      const Encoding<float> e = encode(view, params);
                      const auto& src = pooled ? e.pooled : e.z;
                      std::copy(src.begin(), src.end(), out.row(i).begin());
                    }
                  });
  return out;
}

}  // namespace sclrl
