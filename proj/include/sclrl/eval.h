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

#ifndef SCLRL_EVAL_H_
#define SCLRL_EVAL_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sclrl/graph.h"
#include "sclrl/linkset.h"
#include "sclrl/tensor.h"

namespace sclrl {

enum class HeuristicKind { kCommonNeighbors, kSalton, kAdamicAdar,
                           kResourceAllocation };

inline constexpr HeuristicKind kAllHeuristics[] = {
    HeuristicKind::kCommonNeighbors, HeuristicKind::kSalton,
    HeuristicKind::kAdamicAdar, HeuristicKind::kResourceAllocation};

std::string_view heuristic_name(HeuristicKind kind);

// Neighborhood-overlap link scores:
//   CN     |G(u) & G(v)|
//   Salton CN / sqrt(k_u k_v), 0 if either endpoint is isolated
//   AA     sum over common z of 1 / log k_z, skipping k_z <= 1
//   RA     sum over common z of 1 / k_z
double heuristic_score(const Graph& g, HeuristicKind kind, NodeId u, NodeId v);

// Mann-Whitney AUC with ties counted 1/2, via average ranks.
double auc(std::span<const double> scores, std::span<const int> labels);

// Mean precision at the rank of each positive, after a stable descending
// sort of the scores.
double average_precision(std::span<const double> scores,
                         std::span<const int> labels);

struct ProbeOptions {
  double l2 = 1e-4;
  int max_iterations = 500;
  double tolerance = 1e-6;  // stop once the gradient norm falls below this
};

// Logistic regression on raw embedding coordinates.
struct ProbeModel {
  std::vector<double> weights;
  double bias = 0.0;

  double decision(std::span<const float> x) const;
  double probability(std::span<const float> x) const;
};

// Full-batch accelerated gradient descent on the L2-regularized logistic
// loss, run on standardized features; the returned model maps raw
// embeddings. Deterministic.
ProbeModel train_probe(const Matrix& x, std::span<const int> labels,
                       std::uint64_t seed, const ProbeOptions& options = {});

struct MetricReport {
  double auc_mean = 0.0;
  double auc_std = 0.0;
  double ap_mean = 0.0;
  double ap_std = 0.0;
  int folds = 0;
  int repeats = 0;
};

// Stratified k-fold assignment for one repeat: fold index per sample.
std::vector<int> stratified_folds(std::span<const int> labels, int folds,
                                  std::uint64_t seed);

// Repeated stratified k-fold CV of the probe; AUC/AP mean and population
// standard deviation over all fold x repeat cells.
MetricReport cross_validate(const Matrix& x, std::span<const int> labels,
                            int folds, int repeats, std::uint64_t seed,
                            const ProbeOptions& options = {});

// Probe fit on the train rows and scored on the test rows; std is zero.
MetricReport holdout_metrics(const Matrix& x_train,
                             std::span<const int> y_train,
                             const Matrix& x_test,
                             std::span<const int> y_test, std::uint64_t seed,
                             const ProbeOptions& options = {});

// Heuristic scored directly on `observed` for every link, with AUC/AP
// aggregated over the same repeated stratified folds used for the probe.
MetricReport evaluate_heuristic(const Graph& observed, HeuristicKind kind,
                                std::span<const Link> links, int folds,
                                int repeats, std::uint64_t seed);

void write_metric_header(std::ostream& out);
void write_metric_row(std::ostream& out, std::string_view method,
                      const MetricReport& r);

}  // namespace sclrl

#endif  // SCLRL_EVAL_H_
