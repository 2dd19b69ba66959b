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

#ifndef SCLRL_NN_H_
#define SCLRL_NN_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sclrl/augment.h"
#include "sclrl/tensor.h"

namespace sclrl {

struct EncoderConfig {
  std::size_t feature_dim = 0;     // raw node feature width F
  std::size_t similarity_dim = 8;  // widest AttrSimilarity view (m_max)
  std::size_t hidden_dim = 128;
  std::size_t num_layers = 2;
  std::size_t proj_hidden_dim = 128;
  std::size_t embed_dim = 128;

  std::size_t pooled_dim() const { return num_layers * hidden_dim; }
  bool operator==(const EncoderConfig&) const = default;
};

// y = x W + b, with W stored input-major (in x out) and b as 1 x out.
template <typename T>
struct Linear {
  BasicMatrix<T> weight;
  BasicMatrix<T> bias;
};

// H' = fc2(relu(fc1((1 + eps) H + A H))).
template <typename T>
struct GinLayer {
  BasicMatrix<T> eps;  // 1 x 1
  Linear<T> fc1;
  Linear<T> fc2;
};

// Parameters of the whole encoder: input adapters, GIN trunk, and the
// projection head. Also used as the gradient container.
template <typename T>
struct EncoderParams {
  EncoderConfig config;
  Linear<T> raw_adapter;         // F -> hidden
  Linear<T> similarity_adapter;  // m_max -> hidden
  std::vector<GinLayer<T>> layers;
  Linear<T> proj1;  // pooled -> proj_hidden
  Linear<T> proj2;  // proj_hidden -> embed

  // Calls fn(name, tensor) for every tensor in a fixed order.
  template <typename Fn>
  void visit(Fn&& fn) {
    visit_impl(*this, fn);
  }
  template <typename Fn>
  void visit(Fn&& fn) const {
    visit_impl(*this, fn);
  }

  std::size_t num_scalars() const {
    std::size_t n = 0;
    visit([&](const std::string&, const BasicMatrix<T>& t) { n += t.size(); });
    return n;
  }

  template <typename U>
  EncoderParams<U> cast() const;

 private:
  template <typename Self, typename Fn>
  static void visit_impl(Self& self, Fn& fn) {
    auto linear = [&](const std::string& prefix, auto& lin) {
      fn(prefix + ".weight", lin.weight);
      fn(prefix + ".bias", lin.bias);
    };
    linear("adapter.raw", self.raw_adapter);
    linear("adapter.similarity", self.similarity_adapter);
    for (std::size_t l = 0; l < self.layers.size(); ++l) {
      const std::string p = "gin." + std::to_string(l);
      fn(p + ".eps", self.layers[l].eps);
      linear(p + ".fc1", self.layers[l].fc1);
      linear(p + ".fc2", self.layers[l].fc2);
    }
    linear("proj.0", self.proj1);
    linear("proj.1", self.proj2);
  }
};

// All-zero parameters with the given shapes.
template <typename T>
EncoderParams<T> zero_params(const EncoderConfig& config);

// Weights uniform in +-sqrt(6 / (fan_in + fan_out)); biases and eps zero.
EncoderParams<float> init_encoder(const EncoderConfig& config,
                                  std::uint64_t seed);

template <typename T>
template <typename U>
EncoderParams<U> EncoderParams<T>::cast() const {
  EncoderParams<U> out = zero_params<U>(config);
  std::vector<const BasicMatrix<T>*> src;
  visit([&](const std::string&, const BasicMatrix<T>& t) { src.push_back(&t); });
  std::size_t i = 0;
  out.visit([&](const std::string&, BasicMatrix<U>& t) {
    t = src[i++]->template cast<U>();
  });
  return out;
}

// dst += scale * src, tensor by tensor.
template <typename T>
void add_scaled(EncoderParams<T>& dst, const EncoderParams<T>& src, T scale);

// Bare GIN update MLP((1 + eps) H + A H), no activation on the output.
template <typename T>
BasicMatrix<T> gin_layer_forward(const Matrix& adjacency,
                                 const BasicMatrix<T>& h,
                                 const GinLayer<T>& layer);

// Concatenation over layers of the column sums of each layer's node matrix.
template <typename T>
std::vector<T> readout(std::span<const BasicMatrix<T>> per_layer);

template <typename T>
struct Encoding {
  std::vector<T> pooled;  // h, length num_layers * hidden_dim
  std::vector<T> z;       // projection output, length embed_dim
};

// Activations recorded by the forward pass, consumed by encode_backward. The
// view must outlive the tape.
template <typename T>
struct EncodeTape {
  struct Layer {
    BasicMatrix<T> input;
    BasicMatrix<T> aggregated;
    BasicMatrix<T> pre1;
    BasicMatrix<T> act1;
    BasicMatrix<T> pre2;
    BasicMatrix<T> output;  // relu(pre2)
  };

  const View* view = nullptr;
  bool similarity_input = false;
  std::vector<Layer> layers;
  BasicMatrix<T> pooled;    // 1 x pooled_dim
  BasicMatrix<T> pre_proj;  // 1 x proj_hidden
  BasicMatrix<T> act_proj;
  BasicMatrix<T> z;  // 1 x embed

  std::size_t bytes() const;
};

// View features -> adapter -> GIN layers (ReLU after each) -> readout -> h;
// z = proj(h). Throws DivergenceError on a non-finite output.
template <typename T>
EncodeTape<T> encode_forward(const View& view, const EncoderParams<T>& params);

template <typename T>
Encoding<T> encode(const View& view, const EncoderParams<T>& params);

// Accumulates d(objective)/d(params) into `grads`, given the upstream
// gradient with respect to z (and optionally h).
template <typename T>
void encode_backward(const EncodeTape<T>& tape, const EncoderParams<T>& params,
                     std::span<const T> dz, std::span<const T> dpooled,
                     EncoderParams<T>& grads);

// Named tensors in the binary checkpoint layout: magic "SCLRL1", then per
// tensor name length, name, rows, cols (little-endian u64) and row-major
// little-endian f32 values.
void write_tensors(std::ostream& out,
                   const std::vector<std::pair<std::string, Matrix>>& tensors);
std::vector<std::pair<std::string, Matrix>> read_tensors(std::istream& in);

void save_checkpoint(std::ostream& out, const EncoderParams<float>& params);
EncoderParams<float> load_checkpoint(std::istream& in);

}  // namespace sclrl

#endif  // SCLRL_NN_H_
