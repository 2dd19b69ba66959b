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

#ifndef SCLRL_PIPELINE_H_
#define SCLRL_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sclrl/contrast.h"
#include "sclrl/graph.h"
#include "sclrl/subgraph.h"

namespace sclrl {

enum class Stage { kPrepare, kTrain, kEmbed, kEvaluate, kHeuristics, kAll };

std::string_view stage_name(Stage s);
Stage parse_stage(std::string_view name);

// How heuristic baselines pick their links:
//   sampled     every sampled link is held out and masked; folds over all
//   test_split  the prepared 8:1:1 split; only test links are scored
enum class HeuristicProtocol { kSampled, kTestSplit };

struct RunConfig {
  std::string format = "generic";  // generic | citation
  std::filesystem::path edges_path;
  std::filesystem::path features_path;
  std::filesystem::path content_path;
  std::filesystem::path cites_path;
  std::filesystem::path output_dir = "sclrl_out";

  double link_fraction = 0.4;
  SamplerConfig sampler;
  EncoderConfig encoder;  // feature_dim and similarity_dim are derived
  TrainConfig train;
  bool pooled_embedding = false;  // embed h instead of z
  int folds = 10;
  int repeats = 5;
  HeuristicProtocol heuristic_protocol = HeuristicProtocol::kSampled;
  bool binary_sidecar = false;
  std::uint64_t seed = 0;
  int workers = 1;

  // Sets one key from its text form; throws ConfigError on an unknown key or
  // bad value.
  void set(std::string_view key, std::string_view value);

  // Every key with its resolved value, in a fixed order.
  std::vector<std::pair<std::string, std::string>> entries() const;

  // Range checks plus existence of the dataset files.
  void validate() const;

  // Flat `key = value` lines, `#` comments. Relative paths resolve against
  // the directory of the file.
  static RunConfig load(const std::filesystem::path& path);
  static RunConfig parse(std::istream& in,
                         const std::filesystem::path& base_dir = {});

  // TrainConfig as used by the train stage: shared fields copied in.
  TrainConfig resolved_train() const;
};

// Artifact file names inside output_dir.
inline constexpr const char* kLinksFile = "links.tsv";
inline constexpr const char* kSubgraphStatsFile = "subgraphs.tsv";
inline constexpr const char* kCheckpointFile = "checkpoint.bin";
inline constexpr const char* kCheckpointHeaderFile = "checkpoint.config";
inline constexpr const char* kLossFile = "loss.csv";
inline constexpr const char* kTrainReportFile = "train_report.txt";
inline constexpr const char* kEmbeddingsFile = "embeddings.tsv";
inline constexpr const char* kEmbeddingsBinFile = "embeddings.bin";
inline constexpr const char* kMetricsFile = "metrics.csv";
inline constexpr const char* kHeuristicsFile = "heuristics.csv";

Graph load_graph(const RunConfig& cfg, std::ostream* log = nullptr);

// `# key = value` lines for the resolved config, preceded by the stage name.
void write_config_header(std::ostream& out, const RunConfig& cfg,
                         Stage stage);

// Runs one stage (or the chain for kAll). Progress and the metric table go to
// `out`. Errors propagate as exceptions.
void run_pipeline(Stage stage, const RunConfig& cfg, std::ostream& out);

// run_pipeline with exceptions mapped to exit codes: 0 ok, 1 config error,
// 2 data error, 3 numerical divergence. The message goes to `err`.
int run_command(Stage stage, const RunConfig& cfg, std::ostream& out,
                std::ostream& err);

}  // namespace sclrl

#endif  // SCLRL_PIPELINE_H_
