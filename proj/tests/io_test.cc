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

#include "sclrl/io.h"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "sclrl/errors.h"
#include "testing/oracles.h"

namespace sclrl {
namespace {

namespace fs = std::filesystem;

class IoTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("sclrl_io_" + std::string(::testing::UnitTest::GetInstance()
                                          ->current_test_info()
                                          ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) {
    fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  fs::path dir_;
};

TEST_F(IoTest, CitationToyFiles) {
  auto content = write("toy.content", "p31 1 0 1 Theory\nx7 0 1 1 Neural\n");
  auto cites = write("toy.cites", "x7 p31\n");
  IngestReport rep;
  Graph g = ingest_citation(content, cites, &rep);
  EXPECT_EQ(g.num_nodes(), 2u);
  EXPECT_EQ(g.num_features(), 3u);
  EXPECT_EQ(g.num_edges(), 1u);
  EXPECT_TRUE(g.has_edge(0, 1));
  EXPECT_EQ(rep.node_names, (std::vector<std::string>{"p31", "x7"}));
  EXPECT_EQ(rep.class_labels, (std::vector<std::string>{"Theory", "Neural"}));
  EXPECT_EQ(g.features()(1, 1), 1.0f);
}

TEST_F(IoTest, CitationDropsAndCounts) {
  auto content = write("c.content", "a 1 0 L\nb 0 1 L\nc 1 1 L\n");
  auto cites = write("c.cites", "a b\nb a\na a\nb zzz\nc a\n\n");
  IngestReport rep;
  Graph g = ingest_citation(content, cites, &rep);
  EXPECT_EQ(rep.raw_edge_lines, 5u);
  EXPECT_EQ(rep.missing_endpoint, 1u);
  EXPECT_EQ(rep.build.self_loops, 1u);
  EXPECT_EQ(rep.build.duplicates, 1u);
  EXPECT_EQ(g.num_edges(), 2u);
  // Deterministic re-ingest.
  Graph h = ingest_citation(content, cites);
  EXPECT_EQ(h.edges(), g.edges());
  EXPECT_EQ(h.features(), g.features());
}

TEST_F(IoTest, CitationMalformedLinesNameTheLine) {
  auto content = write("bad.content", "a 1 0 L\nb 0 x L\n");
  auto cites = write("bad.cites", "a b\n");
  try {
    ingest_citation(content, cites);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos) << e.what();
  }
  auto ragged = write("ragged.content", "a 1 0 L\nb 0 L\n");
  EXPECT_THROW(ingest_citation(ragged, cites), DataError);
  auto three = write("three.cites", "a b c\n");
  EXPECT_THROW(ingest_citation(write("ok.content", "a 1 L\nb 1 L\n"), three), DataError);
  EXPECT_THROW(ingest_citation(dir_ / "missing", cites), DataError);
}

TEST_F(IoTest, GenericIsolatedNodes) {
  Graph g = ingest_generic(write("e.txt", ""), write("f.csv", "1,2\n3,4\n5,6\n"));
  EXPECT_EQ(g.num_nodes(), 3u);
  EXPECT_EQ(g.num_edges(), 0u);
  EXPECT_EQ(g.features()(2, 1), 6.0f);
}

TEST_F(IoTest, GenericErrors) {
  auto f = write("f.csv", "1,2\n3,4\n");
  EXPECT_THROW(ingest_generic(write("e1.txt", "0 2\n"), f), DataError);
  EXPECT_THROW(ingest_generic(write("e2.txt", "0 x\n"), f), DataError);
  EXPECT_THROW(ingest_generic(write("e3.txt", "0 1\n"), write("g.csv", "1,2\n3,abc\n")),
               DataError);
  EXPECT_THROW(ingest_generic(write("e4.txt", "0 1\n"), write("h.csv", "1,2\n3\n")),
               DataError);
}

TEST_F(IoTest, ExportIngestRoundTrip) {
  Graph g = testing::random_graph(50, 0.1, 7, 3);
  export_generic(g, dir_ / "e.txt", dir_ / "f.csv");
  Graph h = ingest_generic(dir_ / "e.txt", dir_ / "f.csv");
  EXPECT_EQ(h.num_nodes(), g.num_nodes());
  EXPECT_EQ(h.edges(), g.edges());
  EXPECT_EQ(h.features(), g.features());
}

TEST(FloatTextTest, ShortestRoundTrip) {
  for (float v : {0.1f, -3.25e-8f, 1e30f, 0.0f, 123456.789f}) {
    EXPECT_EQ(parse_float(format_float(v)), v);
  }
  EXPECT_EQ(format_float(0.5f), "0.5");
  EXPECT_THROW(parse_float("1.0x"), DataError);
}

TEST(EmbeddingTsvTest, RoundTrip) {
  std::vector<SubgraphSample> samples(2);
  samples[0].center = {0, 4, LinkLabel::kPositive};
  samples[0].split = Split::kTrain;
  samples[1].center = {2, 3, LinkLabel::kNegative};
  samples[1].split = Split::kTest;
  Matrix z(2, 3, std::vector<float>{0.1f, -2.0f, 3e-7f, 4.0f, 5.5f, -0.0f});
  std::stringstream io;
  io << "# header\n";
  write_embeddings(io, samples, z);
  EXPECT_NE(io.str().find("0\t4\t1\ttrain\t0.1\t-2\t3e-07\n"), std::string::npos) << io.str();
  EmbeddingTable t = read_embeddings(io);
  EXPECT_EQ(t.links[0], samples[0].center);
  EXPECT_EQ(t.splits[1], Split::kTest);
  EXPECT_EQ(t.values, z);

  std::istringstream bad("0\t1\t1\ttrain\t0.5\n0\t2\t0\ttrain\t0.5\t1\n");
  EXPECT_THROW(read_embeddings(bad), DataError);
}

}  // namespace
}  // namespace sclrl
