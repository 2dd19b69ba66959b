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

#include "sclrl/pipeline.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <sstream>

#include "sclrl/errors.h"
#include "sclrl/eval.h"
#include "sclrl/io.h"
#include "sclrl/linkset.h"
#include "sclrl/nn.h"
#include "sclrl/rng.h"

namespace sclrl {
namespace {

namespace fs = std::filesystem;

// Substreams of the run seed, one per consumer.
enum : std::uint64_t {
  kLinkStream = 1,
  kSplitStream = 2,
  kInitStream = 3,
  kTrainStream = 4,
  kEvalStream = 5,
  kHeuristicStream = 6,
};

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value,
                            std::string_view want) {
  throw ConfigError("config key '" + std::string(key) + "': expected " +
                    std::string(want) + ", got '" + std::string(value) + "'");
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size())
    bad_value(key, value, "a number");
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  bad_value(key, value, "true or false");
}

std::string fmt_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string fmt_bool(bool b) { return b ? "true" : "false"; }

template <typename Parse>
auto enum_value(std::string_view key, std::string_view value, Parse parse) {
  try {
    return parse(value);
  } catch (const std::invalid_argument&) {
    bad_value(key, value, "a known name");
  }
}

std::string_view protocol_name(HeuristicProtocol p) {
  return p == HeuristicProtocol::kSampled ? "sampled" : "test_split";
}

struct Key {
  const char* name;
  std::function<void(RunConfig&, std::string_view, const fs::path&)> set;
  std::function<std::string(const RunConfig&)> get;
};

fs::path resolve(const fs::path& base, std::string_view v) {
  fs::path p{std::string(v)};
  if (p.is_relative() && !base.empty()) p = base / p;
  return p;
}

const std::vector<Key>& keys() {
  using C = RunConfig;
  using P = const fs::path&;
  using V = std::string_view;
  static const std::vector<Key> table = {
      {"format",
       [](C& c, V v, P) {
         if (v != "generic" && v != "citation")
           bad_value("format", v, "generic or citation");
         c.format = std::string(v);
       },
       [](const C& c) { return c.format; }},
      {"edges_path", [](C& c, V v, P b) { c.edges_path = resolve(b, v); },
       [](const C& c) { return c.edges_path.string(); }},
      {"features_path", [](C& c, V v, P b) { c.features_path = resolve(b, v); },
       [](const C& c) { return c.features_path.string(); }},
      {"content_path", [](C& c, V v, P b) { c.content_path = resolve(b, v); },
       [](const C& c) { return c.content_path.string(); }},
      {"cites_path", [](C& c, V v, P b) { c.cites_path = resolve(b, v); },
       [](const C& c) { return c.cites_path.string(); }},
      {"output_dir", [](C& c, V v, P b) { c.output_dir = resolve(b, v); },
       [](const C& c) { return c.output_dir.string(); }},
      {"link_fraction",
       [](C& c, V v, P) { c.link_fraction = parse_number<double>("link_fraction", v); },
       [](const C& c) { return fmt_double(c.link_fraction); }},
      {"hops", [](C& c, V v, P) { c.sampler.hops = parse_number<int>("hops", v); },
       [](const C& c) { return std::to_string(c.sampler.hops); }},
      {"k",
       [](C& c, V v, P) {
         c.sampler.k.clear();
         std::size_t i = 0;
         while (i <= v.size()) {
           std::size_t j = std::min(v.find(',', i), v.size());
           c.sampler.k.push_back(parse_number<int>("k", trim(v.substr(i, j - i))));
           i = j + 1;
         }
       },
       [](const C& c) {
         std::string s;
         for (std::size_t i = 0; i < c.sampler.k.size(); ++i)
           s += (i ? "," : "") + std::to_string(c.sampler.k[i]);
         return s;
       }},
      {"aug1",
       [](C& c, V v, P) { c.train.aug1.kind = enum_value("aug1", v, parse_augment); },
       [](const C& c) { return std::string(augment_name(c.train.aug1.kind)); }},
      {"aug2",
       [](C& c, V v, P) { c.train.aug2.kind = enum_value("aug2", v, parse_augment); },
       [](const C& c) { return std::string(augment_name(c.train.aug2.kind)); }},
      {"aug_p",
       [](C& c, V v, P) {
         c.train.aug1.p = c.train.aug2.p = parse_number<double>("aug_p", v);
       },
       [](const C& c) { return fmt_double(c.train.aug1.p); }},
      {"knn_k",
       [](C& c, V v, P) {
         c.train.aug1.knn_k = c.train.aug2.knn_k = parse_number<int>("knn_k", v);
       },
       [](const C& c) { return std::to_string(c.train.aug1.knn_k); }},
      {"resample_aug",
       [](C& c, V v, P) { c.train.resample_aug = parse_bool("resample_aug", v); },
       [](const C& c) { return fmt_bool(c.train.resample_aug); }},
      {"freeze_views",
       [](C& c, V v, P) { c.train.freeze_views = parse_bool("freeze_views", v); },
       [](const C& c) { return fmt_bool(c.train.freeze_views); }},
      {"hidden_dim",
       [](C& c, V v, P) { c.encoder.hidden_dim = parse_number<std::size_t>("hidden_dim", v); },
       [](const C& c) { return std::to_string(c.encoder.hidden_dim); }},
      {"num_layers",
       [](C& c, V v, P) { c.encoder.num_layers = parse_number<std::size_t>("num_layers", v); },
       [](const C& c) { return std::to_string(c.encoder.num_layers); }},
      {"proj_hidden_dim",
       [](C& c, V v, P) {
         c.encoder.proj_hidden_dim = parse_number<std::size_t>("proj_hidden_dim", v);
       },
       [](const C& c) { return std::to_string(c.encoder.proj_hidden_dim); }},
      {"embed_dim",
       [](C& c, V v, P) { c.encoder.embed_dim = parse_number<std::size_t>("embed_dim", v); },
       [](const C& c) { return std::to_string(c.encoder.embed_dim); }},
      {"batch_size",
       [](C& c, V v, P) { c.train.batch_size = parse_number<std::size_t>("batch_size", v); },
       [](const C& c) { return std::to_string(c.train.batch_size); }},
      {"temperature",
       [](C& c, V v, P) { c.train.temperature = parse_number<double>("temperature", v); },
       [](const C& c) { return fmt_double(c.train.temperature); }},
      {"epochs", [](C& c, V v, P) { c.train.epochs = parse_number<int>("epochs", v); },
       [](const C& c) { return std::to_string(c.train.epochs); }},
      {"learning_rate",
       [](C& c, V v, P) { c.train.learning_rate = parse_number<double>("learning_rate", v); },
       [](const C& c) { return fmt_double(c.train.learning_rate); }},
      {"optimizer",
       [](C& c, V v, P) { c.train.optimizer = enum_value("optimizer", v, parse_optimizer); },
       [](const C& c) { return std::string(optimizer_name(c.train.optimizer)); }},
      {"beta1", [](C& c, V v, P) { c.train.beta1 = parse_number<double>("beta1", v); },
       [](const C& c) { return fmt_double(c.train.beta1); }},
      {"beta2", [](C& c, V v, P) { c.train.beta2 = parse_number<double>("beta2", v); },
       [](const C& c) { return fmt_double(c.train.beta2); }},
      {"adam_eps",
       [](C& c, V v, P) { c.train.adam_eps = parse_number<double>("adam_eps", v); },
       [](const C& c) { return fmt_double(c.train.adam_eps); }},
      {"loss_mode",
       [](C& c, V v, P) { c.train.loss_mode = enum_value("loss_mode", v, parse_loss_mode); },
       [](const C& c) { return std::string(loss_mode_name(c.train.loss_mode)); }},
      {"embedding",
       [](C& c, V v, P) {
         if (v != "z" && v != "h") bad_value("embedding", v, "z or h");
         c.pooled_embedding = v == "h";
       },
       [](const C& c) { return std::string(c.pooled_embedding ? "h" : "z"); }},
      {"folds", [](C& c, V v, P) { c.folds = parse_number<int>("folds", v); },
       [](const C& c) { return std::to_string(c.folds); }},
      {"repeats", [](C& c, V v, P) { c.repeats = parse_number<int>("repeats", v); },
       [](const C& c) { return std::to_string(c.repeats); }},
      {"heuristic_protocol",
       [](C& c, V v, P) {
         if (v == "sampled") {
           c.heuristic_protocol = HeuristicProtocol::kSampled;
         } else if (v == "test_split") {
           c.heuristic_protocol = HeuristicProtocol::kTestSplit;
         } else {
           bad_value("heuristic_protocol", v, "sampled or test_split");
         }
       },
       [](const C& c) { return std::string(protocol_name(c.heuristic_protocol)); }},
      {"binary_sidecar",
       [](C& c, V v, P) { c.binary_sidecar = parse_bool("binary_sidecar", v); },
       [](const C& c) { return fmt_bool(c.binary_sidecar); }},
      {"seed", [](C& c, V v, P) { c.seed = parse_number<std::uint64_t>("seed", v); },
       [](const C& c) { return std::to_string(c.seed); }},
      {"workers", [](C& c, V v, P) { c.workers = parse_number<int>("workers", v); },
       [](const C& c) { return std::to_string(c.workers); }},
  };
  return table;
}

void set_key(RunConfig& cfg, std::string_view key, std::string_view value,
             const fs::path& base) {
  key = trim(key);
  value = trim(value);
  for (const Key& k : keys()) {
    if (key == k.name) {
      k.set(cfg, value, base);
      return;
    }
  }
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

void require_file(const fs::path& p, std::string_view key) {
  if (p.empty()) throw ConfigError(std::string(key) + " is not set");
  if (!fs::is_regular_file(p))
    throw ConfigError(std::string(key) + ": no such file " + p.string());
}

fs::path artifact(const RunConfig& cfg, const char* name) {
  return cfg.output_dir / name;
}

std::ifstream open_artifact(const RunConfig& cfg, const char* name,
                            Stage producer, std::ios::openmode mode = {}) {
  fs::path p = artifact(cfg, name);
  std::ifstream in(p, std::ios::in | mode);
  if (!in)
    throw DataError("missing " + p.string() + "; run `sclrl " +
                    std::string(stage_name(producer)) + "` first");
  return in;
}

std::ofstream create_artifact(const RunConfig& cfg, const char* name,
                              std::ios::openmode mode = {}) {
  fs::create_directories(cfg.output_dir);
  fs::path p = artifact(cfg, name);
  std::ofstream out(p, std::ios::out | std::ios::trunc | mode);
  if (!out) throw DataError("cannot write " + p.string());
  return out;
}

LinkDataset load_links(const RunConfig& cfg) {
  std::ifstream in = open_artifact(cfg, kLinksFile, Stage::kPrepare);
  return read_links(in);
}

LinkDataset subset(const LinkDataset& ds, std::initializer_list<Split> keep) {
  LinkDataset out;
  out.seed = ds.seed;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (std::find(keep.begin(), keep.end(), ds.splits[i]) != keep.end()) {
      out.links.push_back(ds.links[i]);
      out.splits.push_back(ds.splits[i]);
    }
  }
  return out;
}

void check_links_fit(const LinkDataset& ds, const Graph& g) {
  for (const Link& l : ds.links) {
    if (static_cast<std::size_t>(l.v) >= g.num_nodes())
      throw DataError("link (" + std::to_string(l.u) + "," +
                      std::to_string(l.v) + ") refers to a node outside the graph");
  }
}

void print_table_row(std::ostream& out, std::string_view method,
                     const MetricReport& r) {
  out << std::left << std::setw(16) << method << std::right << std::fixed
      << std::setprecision(4) << "  AUC " << r.auc_mean << " +- " << r.auc_std
      << "   AP " << r.ap_mean << " +- " << r.ap_std << '\n';
  out.unsetf(std::ios::floatfield);
  out << std::setprecision(6);
}

void stage_prepare(const RunConfig& cfg, std::ostream& log) {
  Graph g = load_graph(cfg, &log);
  auto links = sample_links(g, cfg.link_fraction, derive_seed(cfg.seed, {kLinkStream}));
  LinkDataset ds = split_links(std::move(links), derive_seed(cfg.seed, {kSplitStream}));
  {
    std::ofstream out = create_artifact(cfg, kLinksFile);
    write_config_header(out, cfg, Stage::kPrepare);
    out << "# u\tv\tlabel\tsplit\n";
    write_links(out, ds);
  }

  Graph observed = masked_graph(g, ds);
  auto samples = extract_all(observed, ds, cfg.sampler, cfg.workers);
  std::ofstream out = create_artifact(cfg, kSubgraphStatsFile);
  write_config_header(out, cfg, Stage::kPrepare);
  out << "split\tlabel\tcount\tmean_nodes\tmax_nodes\tmean_edges\n";
  for (Split s : {Split::kTrain, Split::kVal, Split::kTest}) {
    for (LinkLabel lab : {LinkLabel::kPositive, LinkLabel::kNegative}) {
      std::size_t count = 0, nodes = 0, max_nodes = 0;
      double edges = 0.0;
      for (const auto& smp : samples) {
        if (smp.split != s || smp.label() != lab) continue;
        ++count;
        nodes += smp.num_nodes();
        max_nodes = std::max(max_nodes, smp.num_nodes());
        double sum = 0.0;
        for (float a : smp.adjacency.values()) sum += a;
        edges += sum / 2.0;
      }
      double denom = count ? static_cast<double>(count) : 1.0;
      out << split_name(s) << '\t' << (lab == LinkLabel::kPositive ? 1 : 0)
          << '\t' << count << '\t' << fmt_double(nodes / denom) << '\t'
          << max_nodes << '\t' << fmt_double(edges / denom) << '\n';
    }
  }
  log << "prepare: " << ds.size() << " links (train " << ds.count(Split::kTrain)
      << ", val " << ds.count(Split::kVal) << ", test " << ds.count(Split::kTest)
      << ") -> " << artifact(cfg, kLinksFile).string() << '\n';
}

void stage_train(const RunConfig& cfg, std::ostream& log) {
  LinkDataset ds = load_links(cfg);
  Graph g = load_graph(cfg);
  check_links_fit(ds, g);
  Graph observed = masked_graph(g, ds);
  auto samples = extract_all(observed, subset(ds, {Split::kTrain}), cfg.sampler,
                             cfg.workers);

  EncoderConfig enc = cfg.encoder;
  enc.feature_dim = g.num_features();
  enc.similarity_dim = cfg.sampler.max_nodes();
  auto params = init_encoder(enc, derive_seed(cfg.seed, {kInitStream}));

  TrainConfig tc = cfg.resolved_train();
  std::ofstream loss = create_artifact(cfg, kLossFile);
  write_config_header(loss, cfg, Stage::kTrain);
  loss << "epoch,mean_loss,seconds\n";
  TrainResult result = train(samples, std::move(params), tc,
                             [&](int epoch, double mean_loss, double seconds) {
                               loss << epoch << ',' << fmt_double(mean_loss)
                                    << ',' << fmt_double(seconds) << '\n';
                               log << "epoch " << epoch << "  loss "
                                   << mean_loss << "  " << seconds << " s\n";
                             });
  loss.close();

  {
    std::ofstream out = create_artifact(cfg, kCheckpointFile, std::ios::binary);
    save_checkpoint(out, result.params);
    if (!out) throw DataError("failed writing checkpoint");
  }
  {
    std::ofstream out = create_artifact(cfg, kCheckpointHeaderFile);
    write_config_header(out, cfg, Stage::kTrain);
    out << "feature_dim = " << enc.feature_dim << '\n'
        << "similarity_dim = " << enc.similarity_dim << '\n'
        << "parameters = " << result.params.num_scalars() << '\n';
  }

  const TrainReport& r = result.report;
  std::ofstream out = create_artifact(cfg, kTrainReportFile);
  write_config_header(out, cfg, Stage::kTrain);
  double total = std::accumulate(r.epoch_seconds.begin(), r.epoch_seconds.end(), 0.0);
  out << "train_samples = " << samples.size() << '\n'
      << "batches_per_epoch = " << r.batches_per_epoch << '\n'
      << "temperature = " << fmt_double(r.temperature) << '\n'
      << "parameter_bytes = " << r.parameter_bytes << '\n'
      << "peak_activation_bytes = " << r.peak_activation_bytes << '\n'
      << "memory_bytes = " << r.memory_bytes() << '\n'
      << "mean_epoch_seconds = "
      << fmt_double(r.epoch_seconds.empty() ? 0.0 : total / r.epoch_seconds.size())
      << '\n'
      << "final_loss = "
      << fmt_double(r.epoch_loss.empty() ? 0.0 : r.epoch_loss.back()) << '\n';
  log << "train: " << r.epoch_loss.size() << " epochs, memory "
      << r.memory_bytes() << " bytes -> " << artifact(cfg, kCheckpointFile).string()
      << '\n';
}

void stage_embed(const RunConfig& cfg, std::ostream& log) {
  LinkDataset ds = load_links(cfg);
  EncoderParams<float> params = [&] {
    std::ifstream in = open_artifact(cfg, kCheckpointFile, Stage::kTrain,
                                     std::ios::binary);
    return load_checkpoint(in);
  }();
  Graph g = load_graph(cfg);
  check_links_fit(ds, g);
  if (params.config.feature_dim != g.num_features())
    throw DataError("checkpoint feature width does not match the dataset");
  Graph observed = masked_graph(g, ds);
  auto samples = extract_all(observed, ds, cfg.sampler, cfg.workers);
  Matrix z = embed_links(samples, params, cfg.pooled_embedding, cfg.workers);

  {
    std::ofstream out = create_artifact(cfg, kEmbeddingsFile);
    write_config_header(out, cfg, Stage::kEmbed);
    out << "# u\tv\tlabel\tsplit\t" << (cfg.pooled_embedding ? "h" : "z")
        << "_1.." << z.cols() << '\n';
    write_embeddings(out, samples, z);
  }
  if (cfg.binary_sidecar) {
    std::ofstream out = create_artifact(cfg, kEmbeddingsBinFile, std::ios::binary);
    write_tensors(out, {{"embeddings", z}});
  }
  log << "embed: " << z.rows() << " x " << z.cols() << " -> "
      << artifact(cfg, kEmbeddingsFile).string() << '\n';
}

std::pair<Matrix, std::vector<int>> rows_for(const EmbeddingTable& t,
                                             std::initializer_list<Split> keep) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < t.links.size(); ++i) {
    if (std::find(keep.begin(), keep.end(), t.splits[i]) != keep.end())
      idx.push_back(i);
  }
  Matrix x(idx.size(), t.values.cols());
  std::vector<int> y(idx.size());
  for (std::size_t r = 0; r < idx.size(); ++r) {
    std::ranges::copy(t.values.row(idx[r]), x.row(r).begin());
    y[r] = t.links[idx[r]].positive() ? 1 : 0;
  }
  return {std::move(x), std::move(y)};
}

void stage_evaluate(const RunConfig& cfg, std::ostream& log) {
  EmbeddingTable table = [&] {
    std::ifstream in = open_artifact(cfg, kEmbeddingsFile, Stage::kEmbed);
    return read_embeddings(in);
  }();
  auto [x_fit, y_fit] = rows_for(table, {Split::kTrain, Split::kVal});
  auto [x_test, y_test] = rows_for(table, {Split::kTest});
  const std::uint64_t seed = derive_seed(cfg.seed, {kEvalStream});

  MetricReport cv = cross_validate(x_fit, y_fit, cfg.folds, cfg.repeats, seed);
  MetricReport test = holdout_metrics(x_fit, y_fit, x_test, y_test, seed);

  std::ofstream out = create_artifact(cfg, kMetricsFile);
  write_config_header(out, cfg, Stage::kEvaluate);
  write_metric_header(out);
  write_metric_row(out, "sclrl_cv", cv);
  write_metric_row(out, "sclrl_test", test);

  log << "evaluate: " << cfg.folds << "-fold x " << cfg.repeats
      << " CV on train+val (" << x_fit.rows() << " links); test split ("
      << x_test.rows() << " links)\n";
  print_table_row(log, "sclrl_cv", cv);
  print_table_row(log, "sclrl_test", test);
}

void stage_heuristics(const RunConfig& cfg, std::ostream& log) {
  Graph g = load_graph(cfg);
  LinkDataset ds;
  if (cfg.heuristic_protocol == HeuristicProtocol::kSampled) {
    // Same draw as prepare, but every link is held out and masked.
    auto links = sample_links(g, cfg.link_fraction, derive_seed(cfg.seed, {kLinkStream}));
    ds = all_test(std::move(links), cfg.seed);
  } else {
    ds = subset(load_links(cfg), {Split::kTest});
    check_links_fit(ds, g);
  }
  Graph observed = masked_graph(g, ds);
  const std::uint64_t seed = derive_seed(cfg.seed, {kHeuristicStream});

  std::ofstream out = create_artifact(cfg, kHeuristicsFile);
  write_config_header(out, cfg, Stage::kHeuristics);
  write_metric_header(out);
  log << "heuristics: protocol " << protocol_name(cfg.heuristic_protocol) << ", "
      << ds.size() << " links, " << observed.num_edges()
      << " observed edges\n";
  for (HeuristicKind kind : kAllHeuristics) {
    MetricReport r = evaluate_heuristic(observed, kind, ds.links, cfg.folds,
                                        cfg.repeats, seed);
    write_metric_row(out, heuristic_name(kind), r);
    print_table_row(log, heuristic_name(kind), r);
  }
}

}  // namespace

std::string_view stage_name(Stage s) {
  switch (s) {
    case Stage::kPrepare: return "prepare";
    case Stage::kTrain: return "train";
    case Stage::kEmbed: return "embed";
    case Stage::kEvaluate: return "evaluate";
    case Stage::kHeuristics: return "heuristics";
    case Stage::kAll: return "all";
  }
  return "?";
}

Stage parse_stage(std::string_view name) {
  for (Stage s : {Stage::kPrepare, Stage::kTrain, Stage::kEmbed,
                  Stage::kEvaluate, Stage::kHeuristics, Stage::kAll}) {
    if (stage_name(s) == name) return s;
  }
  throw ConfigError("unknown command '" + std::string(name) + "'");
}

void RunConfig::set(std::string_view key, std::string_view value) {
  set_key(*this, key, value, {});
}

std::vector<std::pair<std::string, std::string>> RunConfig::entries() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const Key& k : keys()) out.emplace_back(k.name, k.get(*this));
  return out;
}

TrainConfig RunConfig::resolved_train() const {
  TrainConfig tc = train;
  tc.seed = derive_seed(seed, {kTrainStream});
  tc.workers = workers;
  return tc;
}

void RunConfig::validate() const {
  if (format == "generic") {
    require_file(edges_path, "edges_path");
    require_file(features_path, "features_path");
  } else {
    require_file(content_path, "content_path");
    require_file(cites_path, "cites_path");
  }
  if (!(link_fraction > 0.0 && link_fraction <= 1.0))
    throw ConfigError("link_fraction must lie in (0, 1]");
  if (folds < 2) throw ConfigError("folds must be >= 2");
  if (repeats < 1) throw ConfigError("repeats must be >= 1");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (encoder.hidden_dim == 0 || encoder.num_layers == 0 ||
      encoder.proj_hidden_dim == 0 || encoder.embed_dim == 0)
    throw ConfigError("encoder dimensions must be positive");
  if (output_dir.empty()) throw ConfigError("output_dir is not set");
  try {
    sampler.validate();
    resolved_train().validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

RunConfig RunConfig::parse(std::istream& in, const fs::path& base_dir) {
  RunConfig cfg;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected `key = value`");
    set_key(cfg, line.substr(0, eq), line.substr(eq + 1), base_dir);
  }
  return cfg;
}

RunConfig RunConfig::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  return parse(in, path.parent_path());
}

Graph load_graph(const RunConfig& cfg, std::ostream* log) {
  IngestReport rep;
  Graph g = cfg.format == "citation"
                ? ingest_citation(cfg.content_path, cfg.cites_path, &rep)
                : ingest_generic(cfg.edges_path, cfg.features_path, &rep);
  if (log != nullptr) {
    *log << "graph: " << rep.nodes << " nodes, " << rep.features
         << " features, " << rep.edges << " edges";
    if (rep.missing_endpoint || rep.build.dropped())
      *log << " (dropped " << rep.missing_endpoint << " with unknown endpoint, "
           << rep.build.self_loops << " self-loops, " << rep.build.duplicates
           << " duplicates)";
    *log << '\n';
  }
  return g;
}

void write_config_header(std::ostream& out, const RunConfig& cfg, Stage stage) {
  out << "# sclrl " << stage_name(stage) << '\n';
  for (const auto& [k, v] : cfg.entries()) out << "# " << k << " = " << v << '\n';
}

void run_pipeline(Stage stage, const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  switch (stage) {
    case Stage::kPrepare: stage_prepare(cfg, out); break;
    case Stage::kTrain: stage_train(cfg, out); break;
    case Stage::kEmbed: stage_embed(cfg, out); break;
    case Stage::kEvaluate: stage_evaluate(cfg, out); break;
    case Stage::kHeuristics: stage_heuristics(cfg, out); break;
    case Stage::kAll:
      stage_prepare(cfg, out);
      stage_train(cfg, out);
      stage_embed(cfg, out);
      stage_evaluate(cfg, out);
      stage_heuristics(cfg, out);
      break;
  }
}

int run_command(Stage stage, const RunConfig& cfg, std::ostream& out,
                std::ostream& err) {
  try {
    run_pipeline(stage, cfg, out);
    return 0;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 1;
  } catch (const DivergenceError& e) {
    err << "divergence: " << e.what() << '\n';
    return 3;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "data error: " << e.what() << '\n';
    return 2;
  } catch (const std::out_of_range& e) {
    err << "data error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace sclrl
