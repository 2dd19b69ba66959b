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

#ifndef SCLRL_TESTS_TESTING_ORACLES_H_
#define SCLRL_TESTS_TESTING_ORACLES_H_

// Independent, deliberately naive reference implementations used to check the
// library. Nothing here shares code with src/ beyond the public data types.

#include <cstdint>
#include <functional>
#include <set>
#include <span>
#include <vector>

#include "sclrl/augment.h"
#include "sclrl/contrast.h"
#include "sclrl/eval.h"
#include "sclrl/graph.h"
#include "sclrl/nn.h"
#include "sclrl/subgraph.h"

namespace sclrl::testing {

// G(n, p) with uniform [-1, 1] features.
Graph random_graph(int n, double p, int features, std::uint64_t seed);

// Graph with features = row index in column 0 (handy for tracing rows).
Graph graph_from_edges(int n, const std::vector<Edge>& edges, int features = 1);

// Neighbor sets rebuilt from the edge list, ignoring the CSR layout.
std::vector<std::set<NodeId>> adjacency_sets(const Graph& g);

// Recursive top-K sampling done with a full sort of every neighbor list.
NodeSet brute_sample(const Graph& g, const Link& link, const SamplerConfig& cfg);

// Shortest-path distances from `src` by BFS.
std::vector<int> bfs_distances(const Graph& g, NodeId src);

double brute_heuristic(const Graph& g, HeuristicKind kind, NodeId u, NodeId v);

// Pair counting, O(n^2).
double brute_auc(std::span<const double> scores, std::span<const int> labels);

// Precision at each positive from the definition, O(n^2).
double brute_ap(std::span<const double> scores, std::span<const int> labels);

// Direct evaluation of the contrastive loss in long double.
double naive_loss(const Matrix& z1, const Matrix& z2, double tau, LossMode mode);

// Row-wise k nearest by full sort.
Matrix brute_knn_select(const Matrix& x, int k);

struct GradCheck {
  std::size_t checked = 0;
  std::size_t failed = 0;
  double worst_rel = 0.0;
};

// Compares `analytic` against central differences of `objective` for every
// scalar of `params`. When the difference estimate is unstable across step
// sizes (a ReLU kink inside the stencil) the step is halved until two
// successive estimates agree, up to 12 times.
GradCheck finite_difference_check(
    const std::function<double(const EncoderParams<double>&)>& objective,
    const EncoderParams<double>& params, const EncoderParams<double>& analytic,
    double step, double rel_tol, double abs_floor);

// Random symmetric 0/1 subgraph sample with m nodes and F features.
SubgraphSample random_sample(int m, int features, double edge_p,
                             std::uint64_t seed);

struct PlantedPartition {
  Graph graph;
  std::vector<int> block;
};

// Two equal blocks, edge probability p_in within and p_out across; feature
// dims [0, F/2) indicate block 0 and [F/2, F) block 1, plus N(0, noise).
PlantedPartition planted_partition(int n, double p_in, double p_out,
                                   int features, double noise,
                                   std::uint64_t seed);

}  // namespace sclrl::testing

#endif  // SCLRL_TESTS_TESTING_ORACLES_H_
