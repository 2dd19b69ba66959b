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

#include "sclrl/augment.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace sclrl {
namespace {

void check_probability(double p, std::string_view what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(what) +
                                ": probability must lie in [0,1], got " +
                                std::to_string(p));
  }
}

// Gram matrix X X^T with 64-bit accumulation.
std::vector<double> gram(const Matrix& x) {
  const std::size_t m = x.rows();
  std::vector<double> s(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto xi = x.row(i);
    for (std::size_t j = i; j < m; ++j) {
      const auto xj = x.row(j);
      double acc = 0.0;
      for (std::size_t f = 0; f < x.cols(); ++f) {
        acc += static_cast<double>(xi[f]) * xj[f];
      }
      s[i * m + j] = acc;
      s[j * m + i] = acc;
    }
  }
  return s;
}

}  // namespace

std::string_view augment_name(AugmentKind kind) {
  switch (kind) {
    case AugmentKind::kIdentical:
      return "identical";
    case AugmentKind::kAttrMask:
      return "attr_mask";
    case AugmentKind::kEdgeRemove:
      return "edge_remove";
    case AugmentKind::kAttrSimilarity:
      return "attr_similarity";
    case AugmentKind::kKnnGraph:
      return "knn_graph";
  }
  return "?";
}

AugmentKind parse_augment(std::string_view name) {
  for (AugmentKind k : kAllAugmentKinds) {
    if (augment_name(k) == name) return k;
  }
  throw std::invalid_argument(
      "unknown augmentor '" + std::string(name) +
      "' (expected identical, attr_mask, edge_remove, attr_similarity or "
      "knn_graph)");
}

void AugmentorSpec::validate() const {
  check_probability(p, augment_name(kind));
  if (kind == AugmentKind::kKnnGraph && knn_k < 1) {
    throw std::invalid_argument("knn_graph: k must be >= 1, got " +
                                std::to_string(knn_k));
  }
}

Matrix attr_mask(const Matrix& x, double p, Rng& rng) {
  check_probability(p, "attr_mask");
  std::vector<char> keep(x.cols());
  for (auto& k : keep) k = bernoulli(rng, 1.0 - p) ? 1 : 0;
  Matrix out = x;
  for (std::size_t i = 0; i < out.rows(); ++i) {
    auto row = out.row(i);
    for (std::size_t f = 0; f < row.size(); ++f) {
      if (!keep[f]) row[f] = 0.0f;
    }
  }
  return out;
}

Matrix edge_remove(const Matrix& adjacency, double p, Rng& rng) {
  check_probability(p, "edge_remove");
  const std::size_t m = adjacency.rows();
  if (adjacency.cols() != m) {
    throw std::invalid_argument("edge_remove: adjacency must be square");
  }
  Matrix out = adjacency;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (adjacency(i, j) != adjacency(j, i)) {
        throw std::invalid_argument("edge_remove: adjacency is not symmetric");
      }
      if (adjacency(i, j) == 0.0f) continue;
      if (!bernoulli(rng, 1.0 - p)) {
        out(i, j) = 0.0f;
        out(j, i) = 0.0f;
      }
    }
  }
  return out;
}

Matrix attr_similarity(const Matrix& x, double p, Rng& rng) {
  const std::size_t m = x.rows();
  const std::vector<double> s = gram(x);
  Matrix sim(m, m);
  for (std::size_t i = 0; i < m * m; ++i) {
    sim.values()[i] = static_cast<float>(s[i]);
  }
  return attr_mask(sim, p, rng);
}

Matrix knn_select(const Matrix& x, int k) {
  const std::size_t m = x.rows();
  if (k < 1 || static_cast<std::size_t>(k) >= m) {
    throw std::invalid_argument("knn_graph: need 1 <= k < m, got k=" +
                                std::to_string(k) + " m=" + std::to_string(m));
  }
  const std::vector<double> s = gram(x);
  Matrix out(m, m);
  std::vector<std::size_t> cols(m - 1);
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t c = 0;
    for (std::size_t j = 0; j < m; ++j) {
      if (j != i) cols[c++] = j;
    }
    std::partial_sort(cols.begin(), cols.begin() + k, cols.end(),
                      [&](std::size_t a, std::size_t b) {
                        const double sa = s[i * m + a];
                        const double sb = s[i * m + b];
                        if (sa != sb) return sa > sb;
                        return a < b;
                      });
    for (int r = 0; r < k; ++r) out(i, cols[r]) = 1.0f;
  }
  return out;
}

Matrix knn_graph(const Matrix& x, int k) {
  Matrix a = knn_select(x, k);
  const std::size_t m = a.rows();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const float v = (a(i, j) != 0.0f || a(j, i) != 0.0f) ? 1.0f : 0.0f;
      a(i, j) = v;
      a(j, i) = v;
    }
  }
  return a;
}

View apply_augment(const SubgraphSample& sample, const AugmentorSpec& spec,
                   Rng& rng) {
  spec.validate();
  View view{sample.adjacency, sample.features, spec.kind};
  switch (spec.kind) {
    case AugmentKind::kIdentical:
      break;
    case AugmentKind::kAttrMask:
      view.features = attr_mask(sample.features, spec.p, rng);
      break;
    case AugmentKind::kEdgeRemove:
      view.adjacency = edge_remove(sample.adjacency, spec.p, rng);
      break;
    case AugmentKind::kAttrSimilarity:
      view.features = attr_similarity(sample.features, spec.p, rng);
      break;
    case AugmentKind::kKnnGraph: {
      const int m = static_cast<int>(sample.num_nodes());
      view.adjacency = knn_graph(sample.features, std::min(spec.knn_k, m - 1));
      break;
    }
  }
  return view;
}

std::pair<View, View> make_views(const SubgraphSample& sample,
                                 const AugmentorSpec& t1,
                                 const AugmentorSpec& t2, std::uint64_t seed) {
  Rng rng1(derive_seed(seed, {1}));
  Rng rng2(derive_seed(seed, {2}));
  return {apply_augment(sample, t1, rng1), apply_augment(sample, t2, rng2)};
}

}  // namespace sclrl
