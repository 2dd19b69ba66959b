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

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>

#include "sclrl/errors.h"

namespace sclrl {
namespace {

std::vector<std::string_view> split_fields(std::string_view line,
                                           std::string_view seps) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    std::size_t j = line.find_first_of(seps, i);
    if (j == std::string_view::npos) j = line.size();
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r' || s.back() == '\n'))
    s.remove_suffix(1);
  return s;
}

bool skip_line(std::string_view s) { return s.empty() || s.front() == '#'; }

std::ifstream open_in(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw DataError("cannot open " + p.string());
  return in;
}

[[noreturn]] void fail(const std::filesystem::path& p, std::size_t line,
                       const std::string& what) {
  throw DataError(p.string() + ":" + std::to_string(line) + ": " + what);
}

bool parse_int(std::string_view s, std::int64_t& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool try_parse_float(std::string_view s, float& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

void fill_report(IngestReport* report, const Graph& g, const BuildStats& bs) {
  if (report == nullptr) return;
  report->nodes = g.num_nodes();
  report->features = g.num_features();
  report->build = bs;
  report->edges = g.num_edges();
}

}  // namespace

std::string format_float(float v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

float parse_float(std::string_view text) {
  float v = 0.0f;
  if (!try_parse_float(trim(text), v))
    throw DataError("not a number: '" + std::string(text) + "'");
  return v;
}

Graph ingest_citation(const std::filesystem::path& content_path,
                      const std::filesystem::path& cites_path,
                      IngestReport* report) {
  std::unordered_map<std::string, NodeId> ids;
  std::vector<std::string> names;
  std::vector<std::string> labels;
  std::vector<float> values;
  std::size_t width = 0;

  {
    std::ifstream in = open_in(content_path);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
      ++lineno;
      std::string_view line = trim(raw);
      if (skip_line(line)) continue;
      auto f = split_fields(line, " \t");
      if (f.size() < 3) fail(content_path, lineno, "expected id, features, label");
      std::size_t dims = f.size() - 2;
      if (width == 0) width = dims;
      if (dims != width)
        fail(content_path, lineno,
             "expected " + std::to_string(width) + " features, got " +
                 std::to_string(dims));
      std::string name(f.front());
      if (!ids.emplace(name, static_cast<NodeId>(names.size())).second)
        fail(content_path, lineno, "duplicate node id '" + name + "'");
      names.push_back(std::move(name));
      for (std::size_t c = 1; c + 1 < f.size(); ++c) {
        float x = 0.0f;
        if (!try_parse_float(f[c], x))
          fail(content_path, lineno, "non-numeric feature '" +
                                         std::string(f[c]) + "'");
        values.push_back(x);
      }
      labels.emplace_back(f.back());
    }
  }
  if (names.empty()) throw DataError(content_path.string() + ": no nodes");

  std::vector<Edge> edges;
  std::size_t raw_lines = 0;
  std::size_t missing = 0;
  {
    std::ifstream in = open_in(cites_path);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
      ++lineno;
      std::string_view line = trim(raw);
      if (skip_line(line)) continue;
      auto f = split_fields(line, " \t");
      if (f.size() != 2) fail(cites_path, lineno, "expected two node ids");
      ++raw_lines;
      auto a = ids.find(std::string(f[0]));
      auto b = ids.find(std::string(f[1]));
      if (a == ids.end() || b == ids.end()) {
        ++missing;
        continue;
      }
      edges.push_back({a->second, b->second});
    }
  }

  Matrix features(names.size(), width, std::move(values));
  BuildStats bs;
  Graph g = Graph::build(edges, std::move(features), &bs);
  if (report != nullptr) {
    fill_report(report, g, bs);
    report->raw_edge_lines = raw_lines;
    report->missing_endpoint = missing;
    report->node_names = std::move(names);
    report->class_labels = std::move(labels);
  }
  return g;
}

Graph ingest_generic(const std::filesystem::path& edge_list_path,
                     const std::filesystem::path& features_path,
                     IngestReport* report) {
  std::vector<float> values;
  std::size_t rows = 0;
  std::size_t width = 0;
  {
    std::ifstream in = open_in(features_path);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
      ++lineno;
      std::string_view line = trim(raw);
      if (skip_line(line)) continue;
      auto f = split_fields(line, ",");
      if (width == 0) width = f.size();
      if (f.size() != width)
        fail(features_path, lineno,
             "expected " + std::to_string(width) + " columns, got " +
                 std::to_string(f.size()));
      for (auto cell : f) {
        float x = 0.0f;
        if (!try_parse_float(trim(cell), x))
          fail(features_path, lineno,
               "non-numeric value '" + std::string(cell) + "'");
        values.push_back(x);
      }
      ++rows;
    }
  }
  if (rows == 0) throw DataError(features_path.string() + ": no feature rows");

  std::vector<Edge> edges;
  {
    std::ifstream in = open_in(edge_list_path);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
      ++lineno;
      std::string_view line = trim(raw);
      if (skip_line(line)) continue;
      auto f = split_fields(line, " \t,");
      if (f.size() != 2) fail(edge_list_path, lineno, "expected `u v`");
      std::int64_t u = 0;
      std::int64_t v = 0;
      if (!parse_int(f[0], u) || !parse_int(f[1], v))
        fail(edge_list_path, lineno, "non-integer node id");
      if (u < 0 || v < 0 || u >= static_cast<std::int64_t>(rows) ||
          v >= static_cast<std::int64_t>(rows))
        fail(edge_list_path, lineno,
             "node id out of range; feature file has " + std::to_string(rows) +
                 " rows");
      edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v)});
    }
  }

  BuildStats bs;
  Graph g = Graph::build(edges, Matrix(rows, width, std::move(values)), &bs);
  if (report != nullptr) {
    fill_report(report, g, bs);
    report->raw_edge_lines = edges.size();
  }
  return g;
}

void export_generic(const Graph& g, const std::filesystem::path& edge_list_path,
                    const std::filesystem::path& features_path) {
  std::ofstream e(edge_list_path);
  if (!e) throw DataError("cannot write " + edge_list_path.string());
  for (const Edge& edge : g.edges()) e << edge.u << ' ' << edge.v << '\n';
  std::ofstream f(features_path);
  if (!f) throw DataError("cannot write " + features_path.string());
  for (std::size_t r = 0; r < g.num_nodes(); ++r) {
    auto row = g.feature_row(static_cast<NodeId>(r));
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) f << ',';
      f << format_float(row[c]);
    }
    f << '\n';
  }
}

void write_embeddings(std::ostream& out,
                      const std::vector<SubgraphSample>& samples,
                      const Matrix& embeddings) {
  if (embeddings.rows() != samples.size())
    throw std::invalid_argument("embedding rows do not match samples");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    out << s.center.u << '\t' << s.center.v << '\t'
        << (s.center.positive() ? 1 : 0) << '\t' << split_name(s.split);
    for (float x : embeddings.row(i)) out << '\t' << format_float(x);
    out << '\n';
  }
}

EmbeddingTable read_embeddings(std::istream& in) {
  EmbeddingTable t;
  std::vector<float> values;
  std::size_t width = 0;
  bool first = true;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = trim(raw);
    if (skip_line(line)) continue;
    auto f = split_fields(line, "\t");
    auto bad = [&](const std::string& what) -> DataError {
      return DataError("embeddings:" + std::to_string(lineno) + ": " + what);
    };
    if (f.size() < 5) throw bad("too few columns");
    if (first) {
      width = f.size() - 4;
      first = false;
    }
    if (f.size() - 4 != width) throw bad("inconsistent embedding width");
    std::int64_t u = 0, v = 0, label = 0;
    if (!parse_int(f[0], u) || !parse_int(f[1], v) || !parse_int(f[2], label) ||
        (label != 0 && label != 1) || u < 0 || v < 0)
      throw bad("malformed link columns");
    Split split;
    try {
      split = parse_split(f[3]);
    } catch (const std::exception&) {
      throw bad("unknown split '" + std::string(f[3]) + "'");
    }
    t.links.push_back(make_link(static_cast<NodeId>(u), static_cast<NodeId>(v),
                                label ? LinkLabel::kPositive
                                      : LinkLabel::kNegative));
    t.splits.push_back(split);
    for (std::size_t c = 4; c < f.size(); ++c) {
      float x = 0.0f;
      if (!try_parse_float(f[c], x)) throw bad("non-numeric value");
      values.push_back(x);
    }
  }
  t.values = Matrix(t.links.size(), width, std::move(values));
  return t;
}

}  // namespace sclrl
