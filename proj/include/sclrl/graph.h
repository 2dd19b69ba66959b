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

#ifndef SCLRL_GRAPH_H_
#define SCLRL_GRAPH_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "sclrl/tensor.h"

namespace sclrl {

using NodeId = std::int32_t;

struct Edge {
  NodeId u;
  NodeId v;

  bool operator==(const Edge&) const = default;
};

// Ordered list of distinct node ids. Position in the list is the local index
// used by induced_subgraph.
using NodeSet = std::vector<NodeId>;

struct BuildStats {
  std::size_t input_edges = 0;
  std::size_t self_loops = 0;
  std::size_t duplicates = 0;

  std::size_t dropped() const { return self_loops + duplicates; }
};

// Immutable simple undirected graph with dense node features.
//
// Adjacency is kept in compressed sparse row form with every neighbor list
// strictly ascending, which makes edge lookups a binary search. The graph is
// never mutated after construction, so concurrent readers need no locking.
class Graph {
 public:
  Graph() = default;

  // Builds the canonical graph: both directions inserted, self-loops and
  // repeated edges dropped (and counted in `stats` when non-null). The node
  // count is the number of feature rows.
  static Graph build(std::span<const Edge> edges, Matrix features,
                     BuildStats* stats = nullptr);

  std::size_t num_nodes() const { return degrees_.size(); }
  std::size_t num_features() const { return features_.cols(); }
  // Number of undirected edges.
  std::size_t num_edges() const { return neighbors_.size() / 2; }

  std::int64_t degree(NodeId v) const;
  std::span<const NodeId> neighbors(NodeId v) const;
  std::span<const std::int64_t> degrees() const { return degrees_; }
  const Matrix& features() const { return features_; }
  std::span<const float> feature_row(NodeId v) const;

  bool has_edge(NodeId u, NodeId v) const;

  // All edges with u < v, ascending lexicographically.
  std::vector<Edge> edges() const;

  void check_node(NodeId v) const;

 private:
  std::vector<std::int64_t> offsets_;
  std::vector<NodeId> neighbors_;
  std::vector<std::int64_t> degrees_;
  Matrix features_;
};

struct InducedSubgraph {
  Matrix adjacency;  // |nodes| x |nodes|, 0/1, symmetric, zero diagonal
  Matrix features;   // |nodes| x F
};

// Adjacency and feature rows restricted to `nodes`, indexed by position in
// `nodes`. Throws on an empty set, duplicate ids, or out-of-range ids.
InducedSubgraph induced_subgraph(const Graph& g, std::span<const NodeId> nodes);

}  // namespace sclrl

#endif  // SCLRL_GRAPH_H_
