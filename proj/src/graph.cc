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

#include "sclrl/graph.h"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace sclrl {

Graph Graph::build(std::span<const Edge> edges, Matrix features,
                   BuildStats* stats) {
  const std::size_t n = features.rows();
  BuildStats local;
  local.input_edges = edges.size();

  std::vector<std::pair<NodeId, NodeId>> arcs;
  arcs.reserve(edges.size() * 2);
  for (const Edge& e : edges) {
    if (e.u < 0 || e.v < 0 || static_cast<std::size_t>(e.u) >= n ||
        static_cast<std::size_t>(e.v) >= n) {
      throw std::out_of_range("edge (" + std::to_string(e.u) + "," +
                              std::to_string(e.v) + ") references a node " +
                              "outside [0," + std::to_string(n) + ")");
    }
    if (e.u == e.v) {
      ++local.self_loops;
      continue;
    }
    arcs.emplace_back(e.u, e.v);
    arcs.emplace_back(e.v, e.u);
  }
  std::sort(arcs.begin(), arcs.end());
  const std::size_t before = arcs.size();
  arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
  // Each repeated undirected edge leaves two repeated arcs.
  local.duplicates = (before - arcs.size()) / 2;

  Graph g;
  g.features_ = std::move(features);
  g.degrees_.assign(n, 0);
  g.offsets_.assign(n + 1, 0);
  g.neighbors_.reserve(arcs.size());
  for (const auto& [u, v] : arcs) {
    ++g.degrees_[u];
    g.neighbors_.push_back(v);
  }
  for (std::size_t i = 0; i < n; ++i) {
    g.offsets_[i + 1] = g.offsets_[i] + g.degrees_[i];
  }
  if (stats != nullptr) *stats = local;
  return g;
}

void Graph::check_node(NodeId v) const {
  if (v < 0 || static_cast<std::size_t>(v) >= num_nodes()) {
    throw std::out_of_range("node id " + std::to_string(v) +
                            " outside [0," + std::to_string(num_nodes()) +
                            ")");
  }
}

std::int64_t Graph::degree(NodeId v) const {
  check_node(v);
  return degrees_[v];
}

std::span<const NodeId> Graph::neighbors(NodeId v) const {
  check_node(v);
  return {neighbors_.data() + offsets_[v],
          static_cast<std::size_t>(degrees_[v])};
}

std::span<const float> Graph::feature_row(NodeId v) const {
  check_node(v);
  return features_.row(static_cast<std::size_t>(v));
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  check_node(u);
  check_node(v);
  // Search the shorter list.
  if (degrees_[u] > degrees_[v]) std::swap(u, v);
  const auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (std::size_t u = 0; u < num_nodes(); ++u) {
    for (NodeId v : neighbors(static_cast<NodeId>(u))) {
      if (static_cast<NodeId>(u) < v) out.push_back({static_cast<NodeId>(u), v});
    }
  }
  return out;
}

InducedSubgraph induced_subgraph(const Graph& g,
                                 std::span<const NodeId> nodes) {
  if (nodes.empty()) {
    throw std::invalid_argument("induced_subgraph: empty node set");
  }
  std::unordered_set<NodeId> seen;
  seen.reserve(nodes.size() * 2);
  for (NodeId v : nodes) {
    g.check_node(v);
    if (!seen.insert(v).second) {
      throw std::invalid_argument("induced_subgraph: duplicate node id " +
                                  std::to_string(v));
    }
  }
  const std::size_t k = nodes.size();
  InducedSubgraph out{Matrix(k, k), Matrix(k, g.num_features())};
  for (std::size_t p = 0; p < k; ++p) {
    const auto src = g.feature_row(nodes[p]);
    std::copy(src.begin(), src.end(), out.features.row(p).begin());
    for (std::size_t q = p + 1; q < k; ++q) {
      if (g.has_edge(nodes[p], nodes[q])) {
        out.adjacency(p, q) = 1.0f;
        out.adjacency(q, p) = 1.0f;
      }
    }
  }
  return out;
}

}  // namespace sclrl
