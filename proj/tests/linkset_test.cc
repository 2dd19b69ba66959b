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

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "sclrl/errors.h"
#include "testing/oracles.h"

namespace sclrl {
namespace {

using testing::random_graph;

std::set<std::pair<NodeId, NodeId>> pairs_of(const std::vector<Link>& links) {
  std::set<std::pair<NodeId, NodeId>> out;
  for (const Link& l : links) out.emplace(l.u, l.v);
  return out;
}

TEST(SampleLinksTest, CountsLabelsAndDistinctness) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Graph g = random_graph(60, 0.1, 1, seed);
    auto links = sample_links(g, 0.4, seed);
    const std::size_t k = static_cast<std::size_t>(std::ceil(0.4 * g.num_edges() - 1e-9));
    std::size_t pos = 0;
    for (const Link& l : links) {
      ASSERT_LT(l.u, l.v);
      ASSERT_EQ(g.has_edge(l.u, l.v), l.positive());
      pos += l.positive();
    }
    EXPECT_EQ(pos, k);
    EXPECT_EQ(links.size(), 2 * k);
    EXPECT_EQ(pairs_of(links).size(), links.size());
  }
}

TEST(SampleLinksTest, FullFractionTakesEveryEdge) {
  Graph g = random_graph(30, 0.1, 1, 4);
  auto links = sample_links(g, 1.0, 9);
  std::size_t pos = 0;
  for (const Link& l : links) pos += l.positive();
  EXPECT_EQ(pos, g.num_edges());
}

TEST(SampleLinksTest, DenseGraphFallsBackToEnumeration) {
  // 6 nodes, 12 edges, 3 non-edges: a 0.25 draw needs all 3.
  std::vector<Edge> edges;
  for (int u = 0; u < 6; ++u)
    for (int v = u + 1; v < 6; ++v)
      if (!(u == 0 && v == 1) && !(u == 2 && v == 3) && !(u == 4 && v == 5))
        edges.push_back({u, v});
  Graph g = Graph::build(edges, Matrix(6, 1));
  auto links = sample_links(g, 0.25, 1);
  std::set<std::pair<NodeId, NodeId>> neg;
  for (const Link& l : links)
    if (!l.positive()) neg.emplace(l.u, l.v);
  EXPECT_EQ(neg, (std::set<std::pair<NodeId, NodeId>>{{0, 1}, {2, 3}, {4, 5}}));
  EXPECT_THROW(sample_links(g, 0.5, 1), std::invalid_argument);
}

TEST(SampleLinksTest, Errors) {
  Graph empty = Graph::build({}, Matrix(5, 1));
  EXPECT_THROW(sample_links(empty, 0.4, 0), std::invalid_argument);
  Graph g = random_graph(20, 0.2, 1, 0);
  EXPECT_THROW(sample_links(g, 0.0, 0), std::invalid_argument);
  EXPECT_THROW(sample_links(g, 1.5, 0), std::invalid_argument);
}

TEST(SampleLinksTest, Deterministic) {
  Graph g = random_graph(50, 0.1, 1, 2);
  EXPECT_EQ(sample_links(g, 0.4, 11), sample_links(g, 0.4, 11));
  EXPECT_NE(sample_links(g, 0.4, 11), sample_links(g, 0.4, 12));
}

TEST(SplitLinksTest, StratifiedEightyTenTen) {
  Graph g = random_graph(200, 0.05, 1, 5);
  auto links = sample_links(g, 0.4, 5);
  LinkDataset ds = split_links(links, 3);
  EXPECT_EQ(ds.links, links);  // order preserved
  for (LinkLabel lab : {LinkLabel::kPositive, LinkLabel::kNegative}) {
    std::size_t n = ds.count(Split::kTrain, lab) + ds.count(Split::kVal, lab) +
                    ds.count(Split::kTest, lab);
    EXPECT_EQ(n, links.size() / 2);
    EXPECT_NEAR(static_cast<double>(ds.count(Split::kVal, lab)), n / 10.0, 1.0);
    EXPECT_NEAR(static_cast<double>(ds.count(Split::kTest, lab)), n / 10.0, 1.0);
  }
}

TEST(SplitLinksTest, TooFewPerClass) {
  std::vector<Link> links;
  for (int i = 0; i < 5; ++i) {
    links.push_back(make_link(0, i + 1, LinkLabel::kPositive));
    links.push_back(make_link(10, i + 11, LinkLabel::kNegative));
  }
  EXPECT_THROW(split_links(links, 0), std::invalid_argument);
}

TEST(MaskedGraphTest, RemovesOnlyPositiveTestLinks) {
  Graph g = random_graph(120, 0.08, 1, 6);
  LinkDataset ds = split_links(sample_links(g, 0.4, 6), 6);
  Graph m = masked_graph(g, ds);
  std::size_t removed = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const Link& l = ds.links[i];
    if (l.positive() && ds.splits[i] == Split::kTest) {
      EXPECT_FALSE(m.has_edge(l.u, l.v));
      ++removed;
    } else if (l.positive()) {
      EXPECT_TRUE(m.has_edge(l.u, l.v));
    }
  }
  EXPECT_EQ(m.num_edges() + removed, g.num_edges());
}

TEST(LinkFileTest, RoundTripAndErrors) {
  Graph g = random_graph(80, 0.1, 1, 8);
  LinkDataset ds = split_links(sample_links(g, 0.4, 8), 8);
  std::stringstream io;
  io << "# seed = 8\n";
  write_links(io, ds);
  LinkDataset back = read_links(io);
  EXPECT_EQ(back.links, ds.links);
  EXPECT_EQ(back.splits, ds.splits);
  EXPECT_EQ(back.seed, 8u);

  std::istringstream bad_label("0\t1\t2\ttrain\n");
  EXPECT_THROW(read_links(bad_label), DataError);
  std::istringstream bad_split("0\t1\t1\tdev\n");
  EXPECT_THROW(read_links(bad_split), DataError);
  std::istringstream dup("0\t1\t1\ttrain\n1\t0\t1\ttest\n");
  EXPECT_THROW(read_links(dup), DataError);
}

}  // namespace
}  // namespace sclrl
