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

#include "sclrl/linkset.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "sclrl/errors.h"
#include "sclrl/rng.h"

namespace sclrl {
namespace {

constexpr std::uint64_t kPositiveStream = 1;
constexpr std::uint64_t kNegativeStream = 2;
constexpr std::uint64_t kSplitStream = 3;

std::uint64_t pair_key(NodeId u, NodeId v) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
         static_cast<std::uint32_t>(v);
}

// Moves a uniform random k-subset of `items` to the front, in draw order.
template <typename T>
void partial_shuffle(std::vector<T>& items, std::size_t k, Rng& rng) {
  for (std::size_t i = 0; i < k && i + 1 < items.size(); ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, items.size() - 1);
    std::swap(items[i], items[pick(rng)]);
  }
}

}  // namespace

std::string_view split_name(Split s) {
  switch (s) {
    case Split::kTrain:
      return "train";
    case Split::kVal:
      return "val";
    case Split::kTest:
      return "test";
  }
  return "?";
}

Split parse_split(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "val") return Split::kVal;
  if (name == "test") return Split::kTest;
  throw std::invalid_argument("unknown split '" + std::string(name) + "'");
}

Link make_link(NodeId a, NodeId b, LinkLabel label) {
  if (a == b) {
    throw std::invalid_argument("link endpoints must differ, got " +
                                std::to_string(a) + " twice");
  }
  return a < b ? Link{a, b, label} : Link{b, a, label};
}

std::size_t LinkDataset::count(Split s) const {
  return static_cast<std::size_t>(std::count(splits.begin(), splits.end(), s));
}

std::size_t LinkDataset::count(Split s, LinkLabel label) const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < links.size(); ++i) {
    if (splits[i] == s && links[i].label == label) ++n;
  }
  return n;
}

std::vector<Link> sample_links(const Graph& g, double fraction,
                               std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("link fraction must lie in (0,1], got " +
                                std::to_string(fraction));
  }
  std::vector<Edge> edges = g.edges();
  if (edges.empty()) {
    throw std::invalid_argument("cannot sample links from an edgeless graph");
  }
  // The epsilon keeps exact products such as 0.5 * 10 from rounding up.
  const auto wanted = static_cast<std::size_t>(
      std::ceil(fraction * static_cast<double>(edges.size()) - 1e-9));
  const std::size_t k = std::clamp<std::size_t>(wanted, 1, edges.size());

  const auto n = static_cast<std::uint64_t>(g.num_nodes());
  const std::uint64_t non_edges = n * (n - 1) / 2 - edges.size();
  if (k > non_edges) {
    throw std::invalid_argument(
        "graph too dense: need " + std::to_string(k) +
        " negative links but only " + std::to_string(non_edges) +
        " non-edges exist");
  }

  std::vector<Link> out;
  out.reserve(2 * k);

  Rng pos_rng(derive_seed(seed, {kPositiveStream}));
  partial_shuffle(edges, k, pos_rng);
  for (std::size_t i = 0; i < k; ++i) {
    out.push_back(make_link(edges[i].u, edges[i].v, LinkLabel::kPositive));
  }

  Rng neg_rng(derive_seed(seed, {kNegativeStream}));
  if (2 * k > non_edges) {
    // Too few non-edges for rejection sampling to be cheap; enumerate them.
    std::vector<Edge> candidates;
    candidates.reserve(non_edges);
    for (NodeId u = 0; static_cast<std::uint64_t>(u) < n; ++u) {
      for (NodeId v = u + 1; static_cast<std::uint64_t>(v) < n; ++v) {
        if (!g.has_edge(u, v)) candidates.push_back({u, v});
      }
    }
    partial_shuffle(candidates, k, neg_rng);
    for (std::size_t i = 0; i < k; ++i) {
      out.push_back({candidates[i].u, candidates[i].v, LinkLabel::kNegative});
    }
    return out;
  }

  std::unordered_set<std::uint64_t> taken;
  taken.reserve(2 * k);
  std::uniform_int_distribution<NodeId> node(0, static_cast<NodeId>(n - 1));
  while (taken.size() < k) {
    NodeId a = node(neg_rng);
    NodeId b = node(neg_rng);
    if (a == b || g.has_edge(a, b)) continue;
    const Link link = make_link(a, b, LinkLabel::kNegative);
    if (taken.insert(pair_key(link.u, link.v)).second) out.push_back(link);
  }
  return out;
}

LinkDataset split_links(std::vector<Link> links, std::uint64_t seed) {
  if (links.empty()) {
    throw std::invalid_argument("split_links: empty link list");
  }
  LinkDataset ds;
  ds.seed = seed;
  ds.splits.assign(links.size(), Split::kTrain);

  Rng rng(derive_seed(seed, {kSplitStream}));
  for (LinkLabel label : {LinkLabel::kPositive, LinkLabel::kNegative}) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < links.size(); ++i) {
      if (links[i].label == label) idx.push_back(i);
    }
    if (idx.size() < 10) {
      throw std::invalid_argument(
          std::string("split_links: need at least 10 ") +
          (label == LinkLabel::kPositive ? "positive" : "negative") +
          " links, got " + std::to_string(idx.size()));
    }
    std::shuffle(idx.begin(), idx.end(), rng);
    const std::size_t tenth = (idx.size() + 5) / 10;
    const std::size_t n_train = idx.size() - 2 * tenth;
    for (std::size_t r = 0; r < idx.size(); ++r) {
      ds.splits[idx[r]] = r < n_train           ? Split::kTrain
                          : r < n_train + tenth ? Split::kVal
                                                : Split::kTest;
    }
  }
  ds.links = std::move(links);
  return ds;
}

LinkDataset all_test(std::vector<Link> links, std::uint64_t seed) {
  LinkDataset ds;
  ds.seed = seed;
  ds.splits.assign(links.size(), Split::kTest);
  ds.links = std::move(links);
  return ds;
}

Graph masked_graph(const Graph& g, const LinkDataset& dataset) {
  std::unordered_set<std::uint64_t> removed;
  for (std::size_t i = 0; i < dataset.links.size(); ++i) {
    const Link& l = dataset.links[i];
    if (dataset.splits[i] == Split::kTest && l.positive()) {
      removed.insert(pair_key(l.u, l.v));
    }
  }
  std::vector<Edge> kept;
  for (const Edge& e : g.edges()) {
    if (!removed.contains(pair_key(e.u, e.v))) kept.push_back(e);
  }
  return Graph::build(kept, g.features());
}

void write_links(std::ostream& out, const LinkDataset& dataset) {
  for (std::size_t i = 0; i < dataset.links.size(); ++i) {
    const Link& l = dataset.links[i];
    out << l.u << '\t' << l.v << '\t' << (l.positive() ? 1 : 0) << '\t'
        << split_name(dataset.splits[i]) << '\n';
  }
}

LinkDataset read_links(std::istream& in) {
  LinkDataset ds;
  std::unordered_set<std::uint64_t> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') {
      // The reproducibility header records the seed.
      constexpr std::string_view kSeedKey = "# seed = ";
      if (line.starts_with(kSeedKey)) {
        ds.seed = std::stoull(line.substr(kSeedKey.size()));
      }
      continue;
    }
    std::istringstream fields(line);
    long long u = 0;
    long long v = 0;
    int label = -1;
    std::string split;
    if (!(fields >> u >> v >> label >> split) || (label != 0 && label != 1) ||
        u == v || u < 0 || v < 0) {
      throw DataError("link file line " + std::to_string(line_no) +
                      ": expected `u v label split`, got '" + line + "'");
    }
    Link link = make_link(static_cast<NodeId>(u), static_cast<NodeId>(v),
                          label == 1 ? LinkLabel::kPositive
                                     : LinkLabel::kNegative);
    if (!seen.insert(pair_key(link.u, link.v)).second) {
      throw DataError("link file line " + std::to_string(line_no) +
                      ": duplicate pair (" + std::to_string(link.u) + "," +
                      std::to_string(link.v) + ")");
    }
    try {
      ds.splits.push_back(parse_split(split));
    } catch (const std::invalid_argument& e) {
      throw DataError("link file line " + std::to_string(line_no) + ": " +
                      e.what());
    }
    ds.links.push_back(link);
  }
  return ds;
}

}  // namespace sclrl
