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

// Acceptance suite: one PASS/FAIL line per criterion. Exit status is nonzero
// if any criterion fails. Criteria that need the Cora files live in
// acceptance_cora.cc.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <unordered_set>

#include "report.h"
#include "sclrl/augment.h"
#include "sclrl/contrast.h"
#include "sclrl/eval.h"
#include "sclrl/io.h"
#include "sclrl/nn.h"
#include "sclrl/pipeline.h"
#include "sclrl/subgraph.h"
#include "testing/oracles.h"

namespace sclrl::acceptance {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

Outcome sampling_oracle() {
  const auto start = Clock::now();
  std::mt19937_64 rng(101);
  std::size_t links = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 49);
    Graph g = testing::random_graph(n, 0.03 + 0.3 * (rng() % 100) / 100.0, 1, rng());
    SamplerConfig cfg;
    cfg.hops = 1 + static_cast<int>(rng() % 2);
    cfg.k.clear();
    for (int t = 0; t < cfg.hops; ++t) cfg.k.push_back(1 + static_cast<int>(rng() % 4));
    for (int q = 0; q < 40; ++q) {
      NodeId a = static_cast<NodeId>(rng() % n);
      NodeId b = static_cast<NodeId>(rng() % n);
      if (a == b) continue;
      Link link = make_link(a, b, LinkLabel::kNegative);
      ++links;
      if (sample_neighborhood(g, link, cfg) != testing::brute_sample(g, link, cfg)) {
        return {false, "mismatch on graph " + std::to_string(trial)};
      }
    }
  }
  const double secs = seconds_since(start);
  return {secs < 10.0, std::to_string(links) + " links on 200 graphs match exactly" +
                           fmt(", %.2f s (limit 10 s)", secs)};
}

Outcome heuristic_metric_oracle() {
  const auto start = Clock::now();
  std::mt19937_64 rng(102);
  std::size_t scores = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 5 + static_cast<int>(rng() % 96);
    Graph g = testing::random_graph(n, 2.0 / n + 0.3 * (rng() % 10) / 10.0, 1, rng());
    for (int q = 0; q < 20; ++q) {
      NodeId u = static_cast<NodeId>(rng() % n);
      NodeId v = static_cast<NodeId>(rng() % n);
      if (u == v) continue;
      for (HeuristicKind k : kAllHeuristics) {
        ++scores;
        if (heuristic_score(g, k, u, v) != testing::brute_heuristic(g, k, u, v))
          return {false, std::string(heuristic_name(k)) + " differs on instance " +
                             std::to_string(trial)};
      }
    }
  }
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 199);
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (int i = 0; i < n; ++i) {
      s[i] = static_cast<double>(rng() % 25) / 3.0;
      y[i] = static_cast<int>(rng() % 2);
    }
    y[0] = 1;
    y[n - 1] = 0;
    worst = std::max(worst, std::abs(auc(s, y) - testing::brute_auc(s, y)));
    worst = std::max(worst, std::abs(average_precision(s, y) - testing::brute_ap(s, y)));
  }
  const double secs = seconds_since(start);
  return {worst <= 1e-9 && secs < 10.0,
          std::to_string(scores) + " heuristic scores exact; AUC/AP max error " +
              fmt("%.2e over 100 instances, %.2f s", worst, secs)};
}

Outcome gradient_check() {
  const auto start = Clock::now();
  EncoderConfig c;
  c.feature_dim = 5;
  c.similarity_dim = 8;
  c.hidden_dim = 6;
  c.num_layers = 2;
  c.proj_hidden_dim = 6;
  c.embed_dim = 5;
  std::mt19937_64 rng(103);
  std::size_t checked = 0, failed = 0;
  double worst = 0.0;
  for (int batch = 0; batch < 100; ++batch) {
    const std::size_t n = 2 + rng() % 4;
    std::vector<View> v1, v2;
    for (std::size_t i = 0; i < n; ++i) {
      auto s = testing::random_sample(2 + static_cast<int>(rng() % 7), 5, 0.5, rng());
      auto [a, b] = make_views(s, {kAllAugmentKinds[rng() % 5], 0.2, 3},
                               {kAllAugmentKinds[rng() % 5], 0.2, 3}, rng());
      v1.push_back(std::move(a));
      v2.push_back(std::move(b));
    }
    auto params = init_encoder(c, rng()).cast<double>();
    std::uniform_real_distribution<double> u(-0.2, 0.2);
    params.visit([&](const std::string& name, BasicMatrix<double>& t) {
      if (name.ends_with(".bias") || name.ends_with(".eps"))
        for (double& x : t.values()) x = u(rng);
    });
    const LossMode mode = batch % 2 ? LossMode::kNtXent : LossMode::kExclusive;
    auto analytic = batch_gradients<double>(v1, v2, params, 0.5, mode, 1);
    auto r = testing::finite_difference_check(
        [&](const EncoderParams<double>& p) {
          return batch_objective<double>(v1, v2, p, 0.5, mode);
        },
        params, analytic.grads, 1e-5, 1e-3, 1e-5);
    checked += r.checked;
    failed += r.failed;
    worst = std::max(worst, r.worst_rel);
  }
  const double secs = seconds_since(start);
  return {failed == 0 && secs < 60.0,
          std::to_string(checked) + " partials over 100 batches, " +
              std::to_string(failed) + " outside rel 1e-3 / abs 1e-5" +
              fmt(" (worst failing rel %.2e), %.1f s", worst, secs)};
}

Outcome loss_closed_forms() {
  double worst = 0.0;
  for (std::size_t n : {2u, 8u, 128u}) {
    Matrix z(n, 128, 0.3f);
    worst = std::max(worst, std::abs(batch_loss(z, z, 0.5, LossMode::kExclusive) -
                                     std::log(n - 1.0)));
  }
  double worst2 = 0.0;
  std::mt19937_64 rng(104);
  std::normal_distribution<float> g(0.0f, 1.0f);
  for (int trial = 0; trial < 100; ++trial) {
    Matrix z1(2, 16), z2(2, 16);
    for (float& v : z1.values()) v = g(rng);
    for (float& v : z2.values()) v = g(rng);
    double want = 0.0;
    for (int i = 0; i < 2; ++i)
      want += (cosine_sim<float>(z1.row(i), z2.row(1 - i)) -
               cosine_sim<float>(z1.row(i), z2.row(i))) / 0.5;
    worst2 = std::max(worst2, std::abs(batch_loss(z1, z2, 0.5, LossMode::kExclusive) - want / 2));
  }
  return {worst <= 1e-5 && worst2 <= 1e-6,
          fmt("|L - ln(n-1)| max %.2e for n in {2,8,128}; n=2 identity max error %.2e",
              worst, worst2)};
}

Outcome permutation_invariance() {
  EncoderConfig c;
  c.feature_dim = 32;
  auto params = init_encoder(c, 105);
  std::mt19937_64 rng(105);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    auto s = testing::random_sample(2 + static_cast<int>(rng() % 7), 32, 0.4, rng());
    const std::size_t m = s.num_nodes();
    std::vector<std::size_t> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    View v{s.adjacency, s.features, AugmentKind::kIdentical};
    View p{Matrix(m, m), Matrix(m, 32), AugmentKind::kIdentical};
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) p.adjacency(i, j) = v.adjacency(perm[i], perm[j]);
      for (std::size_t f = 0; f < 32; ++f) p.features(i, f) = v.features(perm[i], f);
    }
    auto a = encode(v, params).z;
    auto b = encode(p, params).z;
    for (std::size_t d = 0; d < a.size(); ++d)
      worst = std::max(worst, static_cast<double>(std::abs(a[d] - b[d])));
  }
  return {worst <= 1e-5, fmt("max |z - z_perm| = %.2e over 100 subgraphs", worst)};
}

Outcome augmentation_statistics() {
  const int trials = 10000;
  const double p = 0.2;
  Rng rng(106);
  Matrix x(4, 16, 1.0f);
  std::size_t masked = 0, dims = 0;
  for (int t = 0; t < trials; ++t) {
    Matrix y = attr_mask(x, p, rng);
    for (std::size_t f = 0; f < 16; ++f) {
      masked += y(0, f) == 0.0f;
      ++dims;
    }
  }
  auto s = testing::random_sample(8, 4, 0.6, 106);
  std::size_t edges = 0;
  for (float a : s.adjacency.values()) edges += a != 0.0f;
  edges /= 2;
  std::size_t removed = 0;
  for (int t = 0; t < trials; ++t) {
    Matrix a = edge_remove(s.adjacency, p, rng);
    for (std::size_t i = 0; i < 8; ++i)
      for (std::size_t j = i + 1; j < 8; ++j)
        removed += s.adjacency(i, j) != 0.0f && a(i, j) == 0.0f;
  }
  const double mask_rate = static_cast<double>(masked) / dims;
  const double mask_sigma = std::sqrt(p * (1 - p) / dims);
  const double drop_n = static_cast<double>(edges) * trials;
  const double drop_rate = removed / drop_n;
  const double drop_sigma = std::sqrt(p * (1 - p) / drop_n);

  bool knn_ok = true;
  std::mt19937_64 seeds(106);
  for (int t = 0; t < 1000 && knn_ok; ++t) {
    const int m = 2 + static_cast<int>(seeds() % 7);
    auto smp = testing::random_sample(m, 3, 0.3, seeds());
    const int k = 1 + static_cast<int>(seeds() % (m - 1));
    Matrix sel = knn_select(smp.features, k);
    for (int i = 0; i < m; ++i) {
      float row = 0.0f;
      for (int j = 0; j < m; ++j) row += sel(i, j);
      knn_ok = knn_ok && row == static_cast<float>(k) && sel(i, i) == 0.0f;
    }
  }
  const bool ok = std::abs(mask_rate - p) <= 3 * mask_sigma &&
                  std::abs(drop_rate - p) <= 3 * drop_sigma && knn_ok;
  return {ok, fmt("mask rate %.4f (3 sigma %.4f), removal rate %.4f (3 sigma %.4f)",
                  mask_rate, 3 * mask_sigma, drop_rate, 3 * drop_sigma) +
                  (knn_ok ? "; knn rows have exactly k ones" : "; knn row count wrong")};
}

Outcome synthetic_learning() {
  const auto start = Clock::now();
  fs::path dir = fs::temp_directory_path() / "sclrl_acceptance_planted";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto pp = testing::planted_partition(400, 0.05, 0.005, 10, 0.1, 107);
  export_generic(pp.graph, dir / "edges.txt", dir / "features.csv");
  RunConfig cfg;  // library defaults: h=1, K=3, p=0.2, batch 128, dim 128
  cfg.edges_path = dir / "edges.txt";
  cfg.features_path = dir / "features.csv";
  cfg.output_dir = dir / "out";
  cfg.seed = 107;
  std::ostringstream log;
  run_pipeline(Stage::kPrepare, cfg, log);
  run_pipeline(Stage::kTrain, cfg, log);
  run_pipeline(Stage::kEmbed, cfg, log);
  run_pipeline(Stage::kEvaluate, cfg, log);
  const double secs = seconds_since(start);
  const double a = metric_mean(cfg.output_dir / kMetricsFile, "sclrl_cv", "auc");
  const double t = metric_mean(cfg.output_dir / kMetricsFile, "sclrl_test", "auc");
  fs::remove_all(dir);
  return {a >= 0.80 && secs <= 300.0,
          fmt("CV probe AUC %.4f (need >= 0.80), test-split AUC %.4f, %.0f s (limit 300 s), "
              "%.0f edges",
              a, t, secs, static_cast<double>(pp.graph.num_edges()))};
}

// Random graph with exactly `edges` edges on n nodes.
Graph random_graph_with_edges(int n, std::size_t edges, int features, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> node(0, n - 1);
  std::unordered_set<std::uint64_t> seen;
  std::vector<Edge> list;
  while (list.size() < edges) {
    int a = node(rng), b = node(rng);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (seen.insert(static_cast<std::uint64_t>(a) * n + b).second) list.push_back({a, b});
  }
  std::normal_distribution<float> g(0.0f, 1.0f);
  Matrix x(n, features);
  for (float& v : x.values()) v = g(rng);
  return Graph::build(list, std::move(x));
}

Outcome epoch_time_scaling() {
  const int n = 4000;
  const std::vector<std::size_t> sizes = {4000, 16000, 64000, 256000};
  std::vector<double> xs, ys;
  std::string detail;
  for (std::size_t e : sizes) {
    Graph g = random_graph_with_edges(n, e, 64, 108 + e);
    // A fixed 512 links regardless of graph size.
    auto links = sample_links(g, 256.0 / static_cast<double>(e), 108);
    LinkDataset ds;
    ds.links = links;
    ds.splits.assign(links.size(), Split::kTrain);
    auto samples = extract_all(g, ds, SamplerConfig{});
    EncoderConfig c;
    c.feature_dim = 64;
    TrainConfig tc;
    tc.epochs = 3;
    tc.seed = 108;
    auto r = train(samples, init_encoder(c, 108), tc);
    std::vector<double> t = r.report.epoch_seconds;
    std::sort(t.begin(), t.end());
    const double median = t[t.size() / 2];
    xs.push_back(std::log(static_cast<double>(e)));
    ys.push_back(std::log(median));
    detail += fmt("%.0fk:%.3fs ", e / 1000.0, median);
  }
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  const double slope = sxy / sxx;
  return {slope < 1.0, "per-epoch time at 512 links vs edges " + detail +
                           fmt("-> log-log slope %.3f (need < 1)", slope)};
}

}  // namespace
}  // namespace sclrl::acceptance

int main() {
  using namespace sclrl::acceptance;
  int failures = 0;
  failures += !run_criterion("1", "sampling matches brute-force oracle", sampling_oracle);
  failures += !run_criterion("2", "heuristics and AUC/AP match brute-force oracles",
                             heuristic_metric_oracle);
  failures += !run_criterion("3", "encoder+loss gradients match finite differences",
                             gradient_check);
  failures += !run_criterion("4", "loss closed forms", loss_closed_forms);
  failures += !run_criterion("5", "permutation invariance", permutation_invariance);
  failures += !run_criterion("6", "augmentation statistics", augmentation_statistics);
  failures += !run_criterion("7", "end-to-end synthetic learning", synthetic_learning);
  failures += !run_criterion("10b", "epoch time sub-linear in edge count",
                             epoch_time_scaling);
  std::printf("%d criterion(s) failed; criteria 8, 9 and 10a run in acceptance_cora\n",
              failures);
  return failures == 0 ? 0 : 1;
}
