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

#ifndef SCLRL_SUBGRAPH_H_
#define SCLRL_SUBGRAPH_H_

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "sclrl/graph.h"
#include "sclrl/linkset.h"
#include "sclrl/tensor.h"

namespace sclrl {

// Hop count and per-hop sample sizes for link-centric subgraph sampling.
struct SamplerConfig {
  int hops = 1;
  std::vector<int> k = {3};

  void validate() const;
  // Upper bound on subgraph size: 2 * (1 + sum_t prod_{s<=t} k_s).
  std::size_t max_nodes() const;
};

// Anonymized sampled link-centric induced subgraph. Local indices 0 and 1 are
// the link endpoints u and v; adjacency(0,1) is always zero.
struct SubgraphSample {
  Link center;
  Split split = Split::kTrain;
  std::vector<NodeId> node_map;  // local index -> original node id
  Matrix adjacency;
  Matrix features;

  std::size_t num_nodes() const { return node_map.size(); }
  LinkLabel label() const { return center.label; }
};

// Degree-ranked recursive neighborhood sampling around the link endpoints.
//
// Hop set t is the union over the previous hop set of each node's K_t
// neighbors of largest full-graph degree (ties by ascending id; all neighbors
// when fewer than K_t). The returned node list is in anonymization order:
// endpoints first, then newly reached nodes hop by hop, ascending id within
// a hop.
NodeSet sample_neighborhood(const Graph& g, const Link& link,
                            const SamplerConfig& cfg);

// Sampled subgraph around one link, with the center edge removed.
SubgraphSample extract_slci(const Graph& g, const Link& link,
                            const SamplerConfig& cfg,
                            Split split = Split::kTrain);

// extract_slci over a whole dataset. Output order follows the dataset
// regardless of `workers`.
std::vector<SubgraphSample> extract_all(const Graph& g,
                                        const LinkDataset& dataset,
                                        const SamplerConfig& cfg,
                                        int workers = 1);

// Debug dump, one block per subgraph: a header line with the center link,
// then one `local: neighbors...` line per node.
void write_subgraph_dump(std::ostream& out,
                         const std::vector<SubgraphSample>& samples);

}  // namespace sclrl

#endif  // SCLRL_SUBGRAPH_H_
