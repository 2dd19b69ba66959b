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

#ifndef SCLRL_LINKSET_H_
#define SCLRL_LINKSET_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sclrl/graph.h"

namespace sclrl {

enum class LinkLabel : std::uint8_t { kNegative = 0, kPositive = 1 };
enum class Split : std::uint8_t { kTrain = 0, kVal = 1, kTest = 2 };

std::string_view split_name(Split s);
Split parse_split(std::string_view name);

// Candidate link, always stored with u < v.
struct Link {
  NodeId u = 0;
  NodeId v = 0;
  LinkLabel label = LinkLabel::kNegative;

  bool positive() const { return label == LinkLabel::kPositive; }
  bool operator==(const Link&) const = default;
};

Link make_link(NodeId a, NodeId b, LinkLabel label);

struct LinkDataset {
  std::vector<Link> links;
  std::vector<Split> splits;  // parallel to links
  std::uint64_t seed = 0;

  std::size_t size() const { return links.size(); }
  std::size_t count(Split s) const;
  std::size_t count(Split s, LinkLabel label) const;
};

// ceil(fraction * |E|) positives drawn uniformly without replacement, then as
// many negatives drawn uniformly from non-edges. Positives come first in the
// result.
std::vector<Link> sample_links(const Graph& g, double fraction,
                               std::uint64_t seed);

// Stratified 8:1:1 train/val/test assignment. Link order is preserved.
LinkDataset split_links(std::vector<Link> links, std::uint64_t seed);

// Tags every link as test. Used by the heuristic protocol in which the whole
// sample is held out.
LinkDataset all_test(std::vector<Link> links, std::uint64_t seed);

// `g` with every positive test-split link removed.
Graph masked_graph(const Graph& g, const LinkDataset& dataset);

// Tab-separated `u v label split`, label in {1,0}. Lines starting with '#'
// are comments.
void write_links(std::ostream& out, const LinkDataset& dataset);
LinkDataset read_links(std::istream& in);

}  // namespace sclrl

#endif  // SCLRL_LINKSET_H_
