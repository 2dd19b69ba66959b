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

#include "sclrl/nn.h"

#include <Eigen/Core>

#include <bit>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <stdexcept>

#include "sclrl/errors.h"
#include "sclrl/rng.h"

namespace sclrl {
namespace {

template <typename T>
using RowMajor =
    Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename T>
Eigen::Map<RowMajor<T>> as_eigen(BasicMatrix<T>& m) {
  return {m.data(), static_cast<Eigen::Index>(m.rows()),
          static_cast<Eigen::Index>(m.cols())};
}

template <typename T>
Eigen::Map<const RowMajor<T>> as_eigen(const BasicMatrix<T>& m) {
  return {m.data(), static_cast<Eigen::Index>(m.rows()),
          static_cast<Eigen::Index>(m.cols())};
}

void check_inner(std::size_t a_cols, std::size_t b_rows, const char* what) {
  if (a_cols != b_rows) {
    throw std::invalid_argument(std::string(what) + ": inner dimensions " +
                                std::to_string(a_cols) + " and " +
                                std::to_string(b_rows) + " differ");
  }
}

// x W + b, bias broadcast over rows.
template <typename T>
BasicMatrix<T> affine(const BasicMatrix<T>& x, const Linear<T>& lin) {
  check_inner(x.cols(), lin.weight.rows(), "linear");
  BasicMatrix<T> y(x.rows(), lin.weight.cols());
  as_eigen(y).noalias() = as_eigen(x) * as_eigen(lin.weight);
  for (std::size_t i = 0; i < y.rows(); ++i) {
    auto row = y.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) row[j] += lin.bias(0, j);
  }
  return y;
}

template <typename T>
BasicMatrix<T> relu(const BasicMatrix<T>& x) {
  BasicMatrix<T> y = x;
  for (T& v : y.values()) v = v > T(0) || std::isnan(v) ? v : T(0);
  return y;
}

// dy * relu'(pre), with relu'(0) = 0.
template <typename T>
BasicMatrix<T> relu_backward(const BasicMatrix<T>& dy,
                             const BasicMatrix<T>& pre) {
  BasicMatrix<T> dx = dy;
  for (std::size_t i = 0; i < dx.size(); ++i) {
    if (!(pre.values()[i] > T(0))) dx.values()[i] = T(0);
  }
  return dx;
}

// Given dy for y = x W + b: accumulates dW and db and returns dx.
template <typename T>
BasicMatrix<T> affine_backward(const BasicMatrix<T>& x,
                               const BasicMatrix<T>& dy, const Linear<T>& lin,
                               Linear<T>& grad) {
  as_eigen(grad.weight).noalias() += as_eigen(x).transpose() * as_eigen(dy);
  for (std::size_t j = 0; j < dy.cols(); ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < dy.rows(); ++i) acc += dy(i, j);
    grad.bias(0, j) += static_cast<T>(acc);
  }
  BasicMatrix<T> dx(x.rows(), x.cols());
  as_eigen(dx).noalias() = as_eigen(dy) * as_eigen(lin.weight).transpose();
  return dx;
}

// (1 + eps) H + A H; A is a small 0/1 matrix so only its nonzeros are visited.
template <typename T>
BasicMatrix<T> aggregate(const Matrix& adjacency, const BasicMatrix<T>& h,
                         T eps) {
  const std::size_t m = h.rows();
  if (adjacency.rows() != m || adjacency.cols() != m) {
    throw std::invalid_argument("gin: adjacency is " +
                                std::to_string(adjacency.rows()) + "x" +
                                std::to_string(adjacency.cols()) +
                                " but there are " + std::to_string(m) +
                                " node rows");
  }
  BasicMatrix<T> out(m, h.cols());
  for (std::size_t i = 0; i < m; ++i) {
    auto dst = out.row(i);
    const auto self = h.row(i);
    for (std::size_t c = 0; c < dst.size(); ++c) dst[c] = (T(1) + eps) * self[c];
    for (std::size_t j = 0; j < m; ++j) {
      const float a = adjacency(i, j);
      if (a == 0.0f) continue;
      const auto nb = h.row(j);
      for (std::size_t c = 0; c < dst.size(); ++c) dst[c] += T(a) * nb[c];
    }
  }
  return out;
}

// Adapter input: feature rows, skipping zeros (bag-of-words features are
// mostly zero). Similarity views narrower than m_max read as zero-padded.
template <typename T>
BasicMatrix<T> adapter_forward(const View& view, const Linear<T>& lin) {
  const Matrix& x = view.features;
  if (x.cols() > lin.weight.rows()) {
    throw std::invalid_argument("adapter: input width " +
                                std::to_string(x.cols()) + " exceeds " +
                                std::to_string(lin.weight.rows()));
  }
  const std::size_t d = lin.weight.cols();
  BasicMatrix<T> h(x.rows(), d);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    auto dst = h.row(i);
    for (std::size_t c = 0; c < d; ++c) dst[c] = lin.bias(0, c);
    const auto src = x.row(i);
    for (std::size_t f = 0; f < src.size(); ++f) {
      if (src[f] == 0.0f) continue;
      const T v = static_cast<T>(src[f]);
      const auto w = lin.weight.row(f);
      for (std::size_t c = 0; c < d; ++c) dst[c] += v * w[c];
    }
  }
  return h;
}

template <typename T>
void adapter_backward(const View& view, const BasicMatrix<T>& dh,
                      Linear<T>& grad) {
  const Matrix& x = view.features;
  const std::size_t d = dh.cols();
  for (std::size_t c = 0; c < d; ++c) {
    double acc = 0.0;
    for (std::size_t i = 0; i < dh.rows(); ++i) acc += dh(i, c);
    grad.bias(0, c) += static_cast<T>(acc);
  }
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto src = x.row(i);
    const auto g = dh.row(i);
    for (std::size_t f = 0; f < src.size(); ++f) {
      if (src[f] == 0.0f) continue;
      const T v = static_cast<T>(src[f]);
      auto w = grad.weight.row(f);
      for (std::size_t c = 0; c < d; ++c) w[c] += v * g[c];
    }
  }
}

template <typename T>
const Linear<T>& adapter_for(const View& view, const EncoderParams<T>& params,
                             bool* similarity) {
  *similarity = view.source_kind == AugmentKind::kAttrSimilarity;
  if (*similarity) {
    if (view.features.cols() != view.features.rows()) {
      throw std::invalid_argument(
          "attr_similarity view must have m x m features");
    }
    return params.similarity_adapter;
  }
  if (view.features.cols() != params.config.feature_dim) {
    throw std::invalid_argument(
        "view has feature width " + std::to_string(view.features.cols()) +
        ", encoder expects " + std::to_string(params.config.feature_dim));
  }
  return params.raw_adapter;
}

template <typename T>
Linear<T> zero_linear(std::size_t in, std::size_t out) {
  return {BasicMatrix<T>(in, out), BasicMatrix<T>(1, out)};
}

template <typename T>
BasicMatrix<T> row_vector(std::span<const T> v) {
  return BasicMatrix<T>(1, v.size(), std::vector<T>(v.begin(), v.end()));
}

}  // namespace

template <typename T>
EncoderParams<T> zero_params(const EncoderConfig& c) {
  EncoderParams<T> p;
  p.config = c;
  p.raw_adapter = zero_linear<T>(c.feature_dim, c.hidden_dim);
  p.similarity_adapter = zero_linear<T>(c.similarity_dim, c.hidden_dim);
  p.layers.resize(c.num_layers);
  for (auto& layer : p.layers) {
    layer.eps = BasicMatrix<T>(1, 1);
    layer.fc1 = zero_linear<T>(c.hidden_dim, c.hidden_dim);
    layer.fc2 = zero_linear<T>(c.hidden_dim, c.hidden_dim);
  }
  p.proj1 = zero_linear<T>(c.pooled_dim(), c.proj_hidden_dim);
  p.proj2 = zero_linear<T>(c.proj_hidden_dim, c.embed_dim);
  return p;
}

EncoderParams<float> init_encoder(const EncoderConfig& config,
                                  std::uint64_t seed) {
  if (config.hidden_dim == 0 || config.num_layers == 0 ||
      config.embed_dim == 0 || config.proj_hidden_dim == 0) {
    throw std::invalid_argument("encoder dimensions must be positive");
  }
  EncoderParams<float> p = zero_params<float>(config);
  std::uint64_t index = 0;
  p.visit([&](const std::string& name, Matrix& t) {
    ++index;
    if (!name.ends_with(".weight")) return;
    const double bound =
        std::sqrt(6.0 / static_cast<double>(t.rows() + t.cols()));
    Rng rng(derive_seed(seed, {index}));
    std::uniform_real_distribution<float> dist(static_cast<float>(-bound),
                                               static_cast<float>(bound));
    for (float& v : t.values()) v = dist(rng);
  });
  return p;
}

template <typename T>
void add_scaled(EncoderParams<T>& dst, const EncoderParams<T>& src, T scale) {
  std::vector<const BasicMatrix<T>*> s;
  src.visit([&](const std::string&, const BasicMatrix<T>& t) { s.push_back(&t); });
  std::size_t i = 0;
  dst.visit([&](const std::string&, BasicMatrix<T>& t) {
    const auto from = s[i++]->values();
    auto to = t.values();
    for (std::size_t k = 0; k < to.size(); ++k) to[k] += scale * from[k];
  });
}

template <typename T>
BasicMatrix<T> gin_layer_forward(const Matrix& adjacency,
                                 const BasicMatrix<T>& h,
                                 const GinLayer<T>& layer) {
  const BasicMatrix<T> agg = aggregate(adjacency, h, layer.eps(0, 0));
  return affine(relu(affine(agg, layer.fc1)), layer.fc2);
}

template <typename T>
std::vector<T> readout(std::span<const BasicMatrix<T>> per_layer) {
  if (per_layer.empty()) {
    throw std::invalid_argument("readout: no layers");
  }
  std::vector<T> out;
  const std::size_t m = per_layer.front().rows();
  for (const BasicMatrix<T>& h : per_layer) {
    if (h.rows() != m) {
      throw std::invalid_argument("readout: layers disagree on node count");
    }
    for (std::size_t c = 0; c < h.cols(); ++c) {
      double acc = 0.0;
      for (std::size_t i = 0; i < m; ++i) acc += h(i, c);
      out.push_back(static_cast<T>(acc));
    }
  }
  return out;
}

template <typename T>
std::size_t EncodeTape<T>::bytes() const {
  std::size_t n = pooled.size() + pre_proj.size() + act_proj.size() + z.size();
  for (const Layer& l : layers) {
    n += l.input.size() + l.aggregated.size() + l.pre1.size() +
         l.act1.size() + l.pre2.size() + l.output.size();
  }
  return n * sizeof(T);
}

template <typename T>
EncodeTape<T> encode_forward(const View& view, const EncoderParams<T>& params) {
  const std::size_t m = view.features.rows();
  if (m == 0 || view.adjacency.rows() != m || view.adjacency.cols() != m) {
    throw std::invalid_argument("encode: view adjacency/features disagree");
  }
  if (!view.features.all_finite()) {
    throw DivergenceError("encode: non-finite input features");
  }
  EncodeTape<T> tape;
  tape.view = &view;
  const Linear<T>& adapter = adapter_for(view, params, &tape.similarity_input);

  BasicMatrix<T> h = adapter_forward(view, adapter);
  tape.layers.reserve(params.layers.size());
  std::vector<BasicMatrix<T>> outputs;
  for (const GinLayer<T>& layer : params.layers) {
    typename EncodeTape<T>::Layer rec;
    rec.input = std::move(h);
    rec.aggregated = aggregate(view.adjacency, rec.input, layer.eps(0, 0));
    rec.pre1 = affine(rec.aggregated, layer.fc1);
    rec.act1 = relu(rec.pre1);
    rec.pre2 = affine(rec.act1, layer.fc2);
    rec.output = relu(rec.pre2);
    h = rec.output;
    outputs.push_back(rec.output);
    tape.layers.push_back(std::move(rec));
  }
  const std::vector<T> pooled =
      readout(std::span<const BasicMatrix<T>>(outputs));
  tape.pooled = row_vector<T>(pooled);
  tape.pre_proj = affine(tape.pooled, params.proj1);
  tape.act_proj = relu(tape.pre_proj);
  tape.z = affine(tape.act_proj, params.proj2);
  if (!tape.z.all_finite() || !tape.pooled.all_finite()) {
    throw DivergenceError("encode: non-finite embedding");
  }
  return tape;
}

template <typename T>
Encoding<T> encode(const View& view, const EncoderParams<T>& params) {
  const EncodeTape<T> tape = encode_forward(view, params);
  const auto pooled = tape.pooled.values();
  const auto z = tape.z.values();
  return {std::vector<T>(pooled.begin(), pooled.end()),
          std::vector<T>(z.begin(), z.end())};
}

template <typename T>
void encode_backward(const EncodeTape<T>& tape, const EncoderParams<T>& params,
                     std::span<const T> dz, std::span<const T> dpooled,
                     EncoderParams<T>& grads) {
  if (tape.view == nullptr) {
    throw std::logic_error("encode_backward called without a forward pass");
  }
  if (dz.size() != tape.z.cols()) {
    throw std::invalid_argument("encode_backward: dz has wrong length");
  }
  const BasicMatrix<T> dz_row = row_vector<T>(dz);
  BasicMatrix<T> dact =
      affine_backward(tape.act_proj, dz_row, params.proj2, grads.proj2);
  BasicMatrix<T> dpre = relu_backward(dact, tape.pre_proj);
  BasicMatrix<T> dh =
      affine_backward(tape.pooled, dpre, params.proj1, grads.proj1);
  if (!dpooled.empty()) {
    if (dpooled.size() != dh.cols()) {
      throw std::invalid_argument("encode_backward: dpooled has wrong length");
    }
    for (std::size_t c = 0; c < dh.cols(); ++c) dh(0, c) += dpooled[c];
  }

  const std::size_t hidden = params.config.hidden_dim;
  const std::size_t m = tape.view->features.rows();
  BasicMatrix<T> carry(m, hidden);  // gradient w.r.t. the next layer's input
  for (std::size_t l = tape.layers.size(); l-- > 0;) {
    const auto& rec = tape.layers[l];
    const GinLayer<T>& layer = params.layers[l];
    GinLayer<T>& g = grads.layers[l];

    // Sum readout sends the pooled gradient to every node row.
    BasicMatrix<T> dout = carry;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t c = 0; c < hidden; ++c) {
        dout(i, c) += dh(0, l * hidden + c);
      }
    }
    const BasicMatrix<T> dpre2 = relu_backward(dout, rec.pre2);
    const BasicMatrix<T> dact1 =
        affine_backward(rec.act1, dpre2, layer.fc2, g.fc2);
    const BasicMatrix<T> dpre1 = relu_backward(dact1, rec.pre1);
    const BasicMatrix<T> dagg =
        affine_backward(rec.aggregated, dpre1, layer.fc1, g.fc1);

    double deps = 0.0;
    for (std::size_t i = 0; i < dagg.size(); ++i) {
      deps += static_cast<double>(dagg.values()[i]) * rec.input.values()[i];
    }
    g.eps(0, 0) += static_cast<T>(deps);

    // d/dH of (1 + eps) H + A H is (1 + eps) dAgg + A^T dAgg.
    const T scale = T(1) + layer.eps(0, 0);
    const Matrix& a = tape.view->adjacency;
    BasicMatrix<T> din(m, hidden);
    for (std::size_t j = 0; j < m; ++j) {
      auto dst = din.row(j);
      const auto self = dagg.row(j);
      for (std::size_t c = 0; c < hidden; ++c) dst[c] = scale * self[c];
      for (std::size_t i = 0; i < m; ++i) {
        const float aij = a(i, j);
        if (aij == 0.0f) continue;
        const auto src = dagg.row(i);
        for (std::size_t c = 0; c < hidden; ++c) dst[c] += T(aij) * src[c];
      }
    }
    carry = std::move(din);
  }
  adapter_backward(*tape.view, carry,
                   tape.similarity_input ? grads.similarity_adapter
                                         : grads.raw_adapter);
}

#define SCLRL_INSTANTIATE_NN(T)                                              \
  template EncoderParams<T> zero_params<T>(const EncoderConfig&);            \
  template void add_scaled<T>(EncoderParams<T>&, const EncoderParams<T>&, T); \
  template BasicMatrix<T> gin_layer_forward<T>(                              \
      const Matrix&, const BasicMatrix<T>&, const GinLayer<T>&);             \
  template std::vector<T> readout<T>(std::span<const BasicMatrix<T>>);       \
  template struct EncodeTape<T>;                                             \
  template EncodeTape<T> encode_forward<T>(const View&,                      \
                                           const EncoderParams<T>&);         \
  template Encoding<T> encode<T>(const View&, const EncoderParams<T>&);      \
  template void encode_backward<T>(const EncodeTape<T>&,                     \
                                   const EncoderParams<T>&,                  \
                                   std::span<const T>, std::span<const T>,   \
                                   EncoderParams<T>&);

SCLRL_INSTANTIATE_NN(float)
SCLRL_INSTANTIATE_NN(double)

#undef SCLRL_INSTANTIATE_NN

// ---------------------------------------------------------------------------
// Checkpoint format.

namespace {

constexpr char kMagic[] = "SCLRL1";
constexpr std::size_t kMagicLen = 6;

void put_u64(std::ostream& out, std::uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(buf, 8);
}

bool get_u64(std::istream& in, std::uint64_t& v) {
  unsigned char buf[8];
  if (!in.read(reinterpret_cast<char*>(buf), 8)) return false;
  v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return true;
}

void put_f32(std::ostream& out, float f) {
  const auto bits = std::bit_cast<std::uint32_t>(f);
  char buf[4];
  for (int i = 0; i < 4; ++i) buf[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
  out.write(buf, 4);
}

}  // namespace

void write_tensors(std::ostream& out,
                   const std::vector<std::pair<std::string, Matrix>>& tensors) {
  out.write(kMagic, kMagicLen);
  for (const auto& [name, t] : tensors) {
    put_u64(out, name.size());
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    put_u64(out, t.rows());
    put_u64(out, t.cols());
    for (float v : t.values()) put_f32(out, v);
  }
  if (!out) throw DataError("failed writing tensor file");
}

std::vector<std::pair<std::string, Matrix>> read_tensors(std::istream& in) {
  char magic[kMagicLen];
  if (!in.read(magic, kMagicLen) ||
      std::string(magic, kMagicLen) != std::string(kMagic, kMagicLen)) {
    throw DataError("not a checkpoint file (missing SCLRL1 magic)");
  }
  std::vector<std::pair<std::string, Matrix>> out;
  std::uint64_t name_len = 0;
  while (get_u64(in, name_len)) {
    if (name_len > 4096) throw DataError("checkpoint: implausible name length");
    std::string name(name_len, '\0');
    std::uint64_t rows = 0;
    std::uint64_t cols = 0;
    if (!in.read(name.data(), static_cast<std::streamsize>(name_len)) ||
        !get_u64(in, rows) || !get_u64(in, cols)) {
      throw DataError("checkpoint: truncated tensor header");
    }
    if (rows != 0 && cols > (std::uint64_t{1} << 40) / rows) {
      throw DataError("checkpoint: implausible tensor shape for " + name);
    }
    std::vector<unsigned char> raw(rows * cols * 4);
    if (!in.read(reinterpret_cast<char*>(raw.data()),
                 static_cast<std::streamsize>(raw.size()))) {
      throw DataError("checkpoint: truncated data for tensor " + name);
    }
    Matrix t(rows, cols);
    for (std::size_t i = 0; i < t.size(); ++i) {
      std::uint32_t bits = 0;
      for (int b = 0; b < 4; ++b) {
        bits |= static_cast<std::uint32_t>(raw[4 * i + b]) << (8 * b);
      }
      t.values()[i] = std::bit_cast<float>(bits);
    }
    out.emplace_back(std::move(name), std::move(t));
  }
  return out;
}

void save_checkpoint(std::ostream& out, const EncoderParams<float>& params) {
  std::vector<std::pair<std::string, Matrix>> tensors;
  params.visit([&](const std::string& name, const Matrix& t) {
    tensors.emplace_back(name, t);
  });
  write_tensors(out, tensors);
}

EncoderParams<float> load_checkpoint(std::istream& in) {
  std::map<std::string, Matrix> by_name;
  for (auto& [name, t] : read_tensors(in)) by_name[name] = std::move(t);
  auto shape_of = [&](const std::string& name) -> const Matrix& {
    auto it = by_name.find(name);
    if (it == by_name.end()) throw DataError("checkpoint lacks tensor " + name);
    return it->second;
  };
  EncoderConfig c;
  c.feature_dim = shape_of("adapter.raw.weight").rows();
  c.hidden_dim = shape_of("adapter.raw.weight").cols();
  c.similarity_dim = shape_of("adapter.similarity.weight").rows();
  c.num_layers = 0;
  while (by_name.contains("gin." + std::to_string(c.num_layers) + ".eps")) {
    ++c.num_layers;
  }
  c.proj_hidden_dim = shape_of("proj.0.weight").cols();
  c.embed_dim = shape_of("proj.1.weight").cols();

  EncoderParams<float> p = zero_params<float>(c);
  std::size_t used = 0;
  p.visit([&](const std::string& name, Matrix& t) {
    const Matrix& src = shape_of(name);
    if (!same_shape(src, t)) {
      throw DataError("checkpoint tensor " + name + " has shape " +
                      std::to_string(src.rows()) + "x" +
                      std::to_string(src.cols()) + ", expected " +
                      std::to_string(t.rows()) + "x" +
                      std::to_string(t.cols()));
    }
    t = src;
    ++used;
  });
  if (used != by_name.size()) {
    throw DataError("checkpoint has unexpected extra tensors");
  }
  return p;
}

}  // namespace sclrl
