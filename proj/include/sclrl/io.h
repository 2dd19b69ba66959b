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

#ifndef SCLRL_IO_H_
#define SCLRL_IO_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "sclrl/graph.h"
#include "sclrl/subgraph.h"
#include "sclrl/tensor.h"

namespace sclrl {

struct IngestReport {
  std::size_t nodes = 0;
  std::size_t features = 0;
  std::size_t raw_edge_lines = 0;
  std::size_t missing_endpoint = 0;  // edges naming an unknown node, dropped
  BuildStats build;                  // self-loops and duplicates dropped
  std::size_t edges = 0;             // undirected edges kept
  std::vector<std::string> node_names;   // dense id -> original id
  std::vector<std::string> class_labels; // citation datasets only
};

// Citation dataset: content lines `node_id f_1 ... f_F class_label`, cites
// lines `cited citing`. Ids are densified in first-appearance order of the
// content file.
Graph ingest_citation(const std::filesystem::path& content_path,
                      const std::filesystem::path& cites_path,
                      IngestReport* report = nullptr);

// Integer `u v` edge list plus a CSV feature matrix, row i = node i.
Graph ingest_generic(const std::filesystem::path& edge_list_path,
                     const std::filesystem::path& features_path,
                     IngestReport* report = nullptr);

// Inverse of ingest_generic.
void export_generic(const Graph& g, const std::filesystem::path& edge_list_path,
                    const std::filesystem::path& features_path);

// Shortest decimal text that reads back to the same float.
std::string format_float(float v);
float parse_float(std::string_view text);

// One row per link: `u v label split z_1 ... z_d`, tab-separated.
void write_embeddings(std::ostream& out,
                      const std::vector<SubgraphSample>& samples,
                      const Matrix& embeddings);

struct EmbeddingTable {
  std::vector<Link> links;
  std::vector<Split> splits;
  Matrix values;
};
EmbeddingTable read_embeddings(std::istream& in);

}  // namespace sclrl

#endif  // SCLRL_IO_H_
