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

#include "sclrl/subgraph.h"

#include <algorithm>
#include <iterator>
#include <ostream>
#include <stdexcept>
#include <string>

#include "sclrl/parallel.h"

namespace sclrl {
namespace {

// The k neighbors of v with the largest degree, ties by ascending id.
void append_top_k(const Graph& g, NodeId v, int k, std::vector<NodeId>& out) {
  const auto nb = g.neighbors(v);
  const auto degrees = g.degrees();
  const std::size_t take = std::min<std::size_t>(nb.size(), k);
  if (take == nb.size()) {
    out.insert(out.end(), nb.begin(), nb.end());
    return;
  }
  std::vector<NodeId> ranked(nb.begin(), nb.end());
  std::partial_sort(ranked.begin(), ranked.begin() + take, ranked.end(),
                    [&](NodeId a, NodeId b) {
                      if (degrees[a] != degrees[b]) {
                        return degrees[a] > degrees[b];
                      }
                      return a < b;
                    });
  out.insert(out.end(), ranked.begin(), ranked.begin() + take);
}

}  // namespace

void SamplerConfig::validate() const {
  if (hops < 1) {
    throw std::invalid_argument("sampler: hop count must be >= 1, got " +
                                std::to_string(hops));
  }
  if (k.size() != static_cast<std::size_t>(hops)) {
    throw std::invalid_argument("sampler: expected " + std::to_string(hops) +
                                " per-hop sample sizes, got " +
                                std::to_string(k.size()));
  }
  for (int kt : k) {
    if (kt < 1) {
      throw std::invalid_argument("sampler: per-hop sample sizes must be >= 1");
    }
  }
}

std::size_t SamplerConfig::max_nodes() const {
  std::size_t total = 1;
  std::size_t prod = 1;
  for (int kt : k) {
    prod *= static_cast<std::size_t>(kt);
    total += prod;
  }
  return 2 * total;
}

NodeSet sample_neighborhood(const Graph& g, const Link& link,
                            const SamplerConfig& cfg) {
  cfg.validate();
  g.check_node(link.u);
  g.check_node(link.v);

  NodeSet order = {link.u, link.v};
  std::vector<NodeId> frontier = {std::min(link.u, link.v),
                                  std::max(link.u, link.v)};
  frontier.erase(std::unique(frontier.begin(), frontier.end()),
                 frontier.end());
  std::vector<NodeId> seen = frontier;

  for (int t = 0; t < cfg.hops; ++t) {
    std::vector<NodeId> next;
    for (NodeId v : frontier) append_top_k(g, v, cfg.k[t], next);
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());

    std::vector<NodeId> fresh;
    std::set_difference(next.begin(), next.end(), seen.begin(), seen.end(),
                        std::back_inserter(fresh));
    order.insert(order.end(), fresh.begin(), fresh.end());

    std::vector<NodeId> merged;
    merged.reserve(seen.size() + fresh.size());
    std::merge(seen.begin(), seen.end(), fresh.begin(), fresh.end(),
               std::back_inserter(merged));
    seen = std::move(merged);
    frontier = std::move(next);
  }
  return order;
}

SubgraphSample extract_slci(const Graph& g, const Link& link,
                            const SamplerConfig& cfg, Split split) {
  SubgraphSample s;
  s.center = link;
  s.split = split;
  s.node_map = sample_neighborhood(g, link, cfg);
  InducedSubgraph sub = induced_subgraph(g, s.node_map);
  s.adjacency = std::move(sub.adjacency);
  s.features = std::move(sub.features);
  s.adjacency(0, 1) = 0.0f;
  s.adjacency(1, 0) = 0.0f;
  return s;
}

std::vector<SubgraphSample> extract_all(const Graph& g,
                                        const LinkDataset& dataset,
                                        const SamplerConfig& cfg,
                                        int workers) {
  cfg.validate();
  std::vector<SubgraphSample> out(dataset.size());
  parallel_chunks(dataset.size(), workers,
                  [&](std::size_t begin, std::size_t end, int) {
                    for (std::size_t i = begin; i < end; ++i) {
                      out[i] = extract_slci(g, dataset.links[i], cfg,
                                            dataset.splits[i]);
                    }
                  });
  return out;
}

void write_subgraph_dump(std::ostream& out,
                         const std::vector<SubgraphSample>& samples) {
  for (const SubgraphSample& s : samples) {
    out << "subgraph " << s.center.u << ' ' << s.center.v << " label "
        << (s.center.positive() ? 1 : 0) << " split " << split_name(s.split)
        << " nodes " << s.num_nodes() << '\n';
    for (std::size_t p = 0; p < s.num_nodes(); ++p) {
      out << p << " (" << s.node_map[p] << "):";
      for (std::size_t q = 0; q < s.num_nodes(); ++q) {
        if (s.adjacency(p, q) != 0.0f) out << ' ' << q;
      }
      out << '\n';
    }
    out << '\n';
  }
}

}  // namespace sclrl
