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

#ifndef SCLRL_AUGMENT_H_
#define SCLRL_AUGMENT_H_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

#include "sclrl/rng.h"
#include "sclrl/subgraph.h"
#include "sclrl/tensor.h"

namespace sclrl {

enum class AugmentKind : std::uint8_t {
  kIdentical = 0,
  kAttrMask = 1,
  kEdgeRemove = 2,
  kAttrSimilarity = 3,
  kKnnGraph = 4,
};

inline constexpr std::array<AugmentKind, 5> kAllAugmentKinds = {
    AugmentKind::kIdentical, AugmentKind::kAttrMask, AugmentKind::kEdgeRemove,
    AugmentKind::kAttrSimilarity, AugmentKind::kKnnGraph};

std::string_view augment_name(AugmentKind kind);
AugmentKind parse_augment(std::string_view name);

struct AugmentorSpec {
  AugmentKind kind = AugmentKind::kIdentical;
  double p = 0.2;  // AttrMask, EdgeRemove, AttrSimilarity
  int knn_k = 3;   // KnnGraph

  void validate() const;
};

// One augmented copy of a subgraph. Feature width is F, except m for
// AttrSimilarity views.
struct View {
  Matrix adjacency;
  Matrix features;
  AugmentKind source_kind = AugmentKind::kIdentical;
};

// Zeroes the same random subset of feature dimensions in every row; each
// dimension is kept with probability 1 - p.
Matrix attr_mask(const Matrix& x, double p, Rng& rng);

// Drops each undirected edge independently with probability p. Throws on an
// asymmetric input.
Matrix edge_remove(const Matrix& adjacency, double p, Rng& rng);

// attr_mask(X X^T, p): node similarities become the node features.
Matrix attr_similarity(const Matrix& x, double p, Rng& rng);

// Connects each node to the k nodes with the largest dot-product similarity
// (diagonal excluded, ties by ascending index), then symmetrizes by OR.
// Requires 1 <= k < m.
Matrix knn_graph(const Matrix& x, int k);

// Row-wise selection before symmetrization; exposed for tests.
Matrix knn_select(const Matrix& x, int k);

View apply_augment(const SubgraphSample& sample, const AugmentorSpec& spec,
                   Rng& rng);

// Two views from independent substreams of `seed`. KnnGraph's k is clamped
// to m - 1 for subgraphs too small to supply k neighbors.
std::pair<View, View> make_views(const SubgraphSample& sample,
                                 const AugmentorSpec& t1,
                                 const AugmentorSpec& t2, std::uint64_t seed);

}  // namespace sclrl

#endif  // SCLRL_AUGMENT_H_
