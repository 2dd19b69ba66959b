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

#include "sclrl/eval.h"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

#include "sclrl/rng.h"

namespace sclrl {
namespace {

struct ClassCounts {
  std::size_t pos = 0;
  std::size_t neg = 0;
};

ClassCounts count_classes(std::span<const int> labels) {
  ClassCounts c;
  for (int y : labels) {
    if (y == 1) {
      ++c.pos;
    } else if (y == 0) {
      ++c.neg;
    } else {
      throw std::invalid_argument("labels must be 0 or 1, got " +
                                  std::to_string(y));
    }
  }
  return c;
}

void check_lengths(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": " + std::to_string(a) +
                                " scores but " + std::to_string(b) +
                                " labels");
  }
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double pop_std(const std::vector<double>& v, double mean) {
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return std::sqrt(s / static_cast<double>(v.size()));
}

MetricReport summarize(const std::vector<double>& aucs,
                       const std::vector<double>& aps, int folds,
                       int repeats) {
  MetricReport r;
  r.auc_mean = mean_of(aucs);
  r.auc_std = pop_std(aucs, r.auc_mean);
  r.ap_mean = mean_of(aps);
  r.ap_std = pop_std(aps, r.ap_mean);
  r.folds = folds;
  r.repeats = repeats;
  return r;
}

double sigmoid(double t) {
  return t >= 0 ? 1.0 / (1.0 + std::exp(-t))
                : std::exp(t) / (1.0 + std::exp(t));
}

Matrix select_rows(const Matrix& x, const std::vector<std::size_t>& rows) {
  Matrix out(rows.size(), x.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto src = x.row(rows[r]);
    std::copy(src.begin(), src.end(), out.row(r).begin());
  }
  return out;
}

// Held-out rows in random order, so that AP's stable tie-breaking does not
// inherit the positives-first order of the link list.
void shuffle_rows(std::vector<std::size_t>& rows, std::uint64_t seed, int repeat,
                  int fold) {
  Rng rng(derive_seed(seed, {0xf01d, static_cast<std::uint64_t>(repeat),
                             static_cast<std::uint64_t>(fold)}));
  std::shuffle(rows.begin(), rows.end(), rng);
}

}  // namespace

std::string_view heuristic_name(HeuristicKind kind) {
  switch (kind) {
    case HeuristicKind::kCommonNeighbors:
      return "CN";
    case HeuristicKind::kSalton:
      return "Salton";
    case HeuristicKind::kAdamicAdar:
      return "AA";
    case HeuristicKind::kResourceAllocation:
      return "RA";
  }
  return "?";
}

double heuristic_score(const Graph& g, HeuristicKind kind, NodeId u,
                       NodeId v) {
  const auto nu = g.neighbors(u);
  const auto nv = g.neighbors(v);
  if (u == v) {
    throw std::invalid_argument("heuristic_score: endpoints must differ");
  }
  std::size_t cn = 0;
  double weighted = 0.0;
  auto a = nu.begin();
  auto b = nv.begin();
  while (a != nu.end() && b != nv.end()) {
    if (*a < *b) {
      ++a;
    } else if (*b < *a) {
      ++b;
    } else {
      const auto kz = static_cast<double>(g.degrees()[*a]);
      ++cn;
      if (kind == HeuristicKind::kAdamicAdar && kz > 1.0) {
        weighted += 1.0 / std::log(kz);
      } else if (kind == HeuristicKind::kResourceAllocation) {
        weighted += 1.0 / kz;
      }
      ++a;
      ++b;
    }
  }
  switch (kind) {
    case HeuristicKind::kCommonNeighbors:
      return static_cast<double>(cn);
    case HeuristicKind::kSalton: {
      if (nu.empty() || nv.empty()) return 0.0;
      return static_cast<double>(cn) /
             std::sqrt(static_cast<double>(nu.size()) *
                       static_cast<double>(nv.size()));
    }
    case HeuristicKind::kAdamicAdar:
    case HeuristicKind::kResourceAllocation:
      return weighted;
  }
  return 0.0;
}

double auc(std::span<const double> scores, std::span<const int> labels) {
  check_lengths(scores.size(), labels.size(), "auc");
  const ClassCounts c = count_classes(labels);
  if (c.pos == 0 || c.neg == 0) {
    throw std::invalid_argument("auc: both classes must be present");
  }
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double pos_rank_sum = 0.0;
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j < idx.size() && scores[idx[j]] == scores[idx[i]]) ++j;
    // 1-based ranks i+1..j share their average.
    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) {
      if (labels[idx[k]] == 1) pos_rank_sum += avg;
    }
    i = j;
  }
  const double np = static_cast<double>(c.pos);
  const double nn = static_cast<double>(c.neg);
  return (pos_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

double average_precision(std::span<const double> scores,
                         std::span<const int> labels) {
  check_lengths(scores.size(), labels.size(), "average_precision");
  const ClassCounts c = count_classes(labels);
  if (c.pos == 0) {
    throw std::invalid_argument("average_precision: no positive labels");
  }
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t r = 0; r < idx.size(); ++r) {
    if (labels[idx[r]] == 1) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(r + 1);
    }
  }
  return sum / static_cast<double>(c.pos);
}

double ProbeModel::decision(std::span<const float> x) const {
  if (x.size() != weights.size()) {
    throw std::invalid_argument("probe: embedding width " +
                                std::to_string(x.size()) + ", model expects " +
                                std::to_string(weights.size()));
  }
  double t = bias;
  for (std::size_t f = 0; f < x.size(); ++f) t += weights[f] * x[f];
  return t;
}

double ProbeModel::probability(std::span<const float> x) const {
  return sigmoid(decision(x));
}

ProbeModel train_probe(const Matrix& x, std::span<const int> labels,
                       std::uint64_t seed, const ProbeOptions& options) {
  check_lengths(x.rows(), labels.size(), "train_probe");
  const ClassCounts c = count_classes(labels);
  if (c.pos == 0 || c.neg == 0) {
    throw std::invalid_argument("train_probe: both classes must be present");
  }
  const auto n = static_cast<Eigen::Index>(x.rows());
  const auto f = static_cast<Eigen::Index>(x.cols());

  // Standardize columns; constant columns are only centered.
  std::vector<double> mu(f, 0.0);
  std::vector<double> sd(f, 0.0);
  for (Eigen::Index j = 0; j < f; ++j) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) s += x(i, j);
    mu[j] = s / static_cast<double>(n);
    double v = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d = x(i, j) - mu[j];
      v += d * d;
    }
    sd[j] = std::sqrt(v / static_cast<double>(n));
    if (!(sd[j] > 1e-12)) sd[j] = 1.0;
  }
  // Design matrix with a trailing intercept column.
  Eigen::MatrixXd a(n, f + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < f; ++j) a(i, j) = (x(i, j) - mu[j]) / sd[j];
    a(i, f) = 1.0;
  }
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) y(i) = labels[i] == 1 ? 1.0 : -1.0;

  // Largest eigenvalue of A^T A / n by power iteration bounds the curvature.
  Eigen::VectorXd q(f + 1);
  Rng rng(derive_seed(seed, {0x9e37}));
  std::uniform_real_distribution<double> unit(0.5, 1.5);
  for (Eigen::Index j = 0; j <= f; ++j) q(j) = unit(rng);
  double lambda_max = 0.0;
  for (int it = 0; it < 100; ++it) {
    Eigen::VectorXd next = a.transpose() * (a * q) / static_cast<double>(n);
    const double nrm = next.norm();
    if (nrm == 0.0) break;
    lambda_max = nrm / q.norm();
    q = next / nrm;
  }
  const double lipschitz = 0.25 * lambda_max * 1.01 + options.l2;
  const double step = 1.0 / lipschitz;

  auto gradient = [&](const Eigen::VectorXd& w) {
    const Eigen::VectorXd margin = (a * w).cwiseProduct(y);
    Eigen::VectorXd coef(n);
    for (Eigen::Index i = 0; i < n; ++i) coef(i) = -y(i) * sigmoid(-margin(i));
    Eigen::VectorXd g = a.transpose() * coef / static_cast<double>(n);
    g.head(f) += options.l2 * w.head(f);
    return g;
  };

  Eigen::VectorXd w = Eigen::VectorXd::Zero(f + 1);
  Eigen::VectorXd prev = w;
  for (int k = 1; k <= options.max_iterations; ++k) {
    const double momentum = static_cast<double>(k - 1) / static_cast<double>(k + 2);
    const Eigen::VectorXd look = w + momentum * (w - prev);
    const Eigen::VectorXd g = gradient(look);
    if (g.norm() < options.tolerance) {
      prev = w;
      w = look;
      break;
    }
    prev = w;
    w = look - step * g;
  }

  ProbeModel model;
  model.weights.resize(f);
  model.bias = w(f);
  for (Eigen::Index j = 0; j < f; ++j) {
    model.weights[j] = w(j) / sd[j];
    model.bias -= w(j) * mu[j] / sd[j];
  }
  return model;
}

std::vector<int> stratified_folds(std::span<const int> labels, int folds,
                                  std::uint64_t seed) {
  if (folds < 2) throw std::invalid_argument("need at least 2 folds");
  const ClassCounts c = count_classes(labels);
  if (c.pos < static_cast<std::size_t>(folds) ||
      c.neg < static_cast<std::size_t>(folds)) {
    throw std::invalid_argument(
        "cross-validation needs >= " + std::to_string(folds) +
        " samples per class, got " + std::to_string(c.pos) + " positive and " +
        std::to_string(c.neg) + " negative");
  }
  std::vector<int> fold(labels.size(), 0);
  Rng rng(seed);
  for (int cls : {1, 0}) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == cls) idx.push_back(i);
    }
    std::shuffle(idx.begin(), idx.end(), rng);
    for (std::size_t r = 0; r < idx.size(); ++r) {
      fold[idx[r]] = static_cast<int>(r % static_cast<std::size_t>(folds));
    }
  }
  return fold;
}

MetricReport cross_validate(const Matrix& x, std::span<const int> labels,
                            int folds, int repeats, std::uint64_t seed,
                            const ProbeOptions& options) {
  check_lengths(x.rows(), labels.size(), "cross_validate");
  if (repeats < 1) throw std::invalid_argument("need at least 1 repeat");
  std::vector<double> aucs;
  std::vector<double> aps;
  for (int r = 0; r < repeats; ++r) {
    const std::vector<int> fold =
        stratified_folds(labels, folds, derive_seed(seed, {static_cast<std::uint64_t>(r)}));
    for (int k = 0; k < folds; ++k) {
      std::vector<std::size_t> train_rows;
      std::vector<std::size_t> test_rows;
      for (std::size_t i = 0; i < fold.size(); ++i) {
        (fold[i] == k ? test_rows : train_rows).push_back(i);
      }
      shuffle_rows(test_rows, seed, r, k);
      std::vector<int> y_train;
      std::vector<int> y_test;
      for (std::size_t i : train_rows) y_train.push_back(labels[i]);
      for (std::size_t i : test_rows) y_test.push_back(labels[i]);
      const ProbeModel model =
          train_probe(select_rows(x, train_rows), y_train, seed, options);
      std::vector<double> scores;
      for (std::size_t i : test_rows) scores.push_back(model.decision(x.row(i)));
      aucs.push_back(auc(scores, y_test));
      aps.push_back(average_precision(scores, y_test));
    }
  }
  return summarize(aucs, aps, folds, repeats);
}

MetricReport holdout_metrics(const Matrix& x_train,
                             std::span<const int> y_train,
                             const Matrix& x_test,
                             std::span<const int> y_test, std::uint64_t seed,
                             const ProbeOptions& options) {
  check_lengths(x_test.rows(), y_test.size(), "holdout_metrics");
  const ProbeModel model = train_probe(x_train, y_train, seed, options);
  std::vector<double> scores;
  for (std::size_t i = 0; i < x_test.rows(); ++i) {
    scores.push_back(model.decision(x_test.row(i)));
  }
  return summarize({auc(scores, y_test)}, {average_precision(scores, y_test)},
                   1, 1);
}

MetricReport evaluate_heuristic(const Graph& observed, HeuristicKind kind,
                                std::span<const Link> links, int folds,
                                int repeats, std::uint64_t seed) {
  std::vector<double> scores;
  std::vector<int> labels;
  for (const Link& l : links) {
    scores.push_back(heuristic_score(observed, kind, l.u, l.v));
    labels.push_back(l.positive() ? 1 : 0);
  }
  std::vector<double> aucs;
  std::vector<double> aps;
  for (int r = 0; r < repeats; ++r) {
    const std::vector<int> fold =
        stratified_folds(labels, folds, derive_seed(seed, {static_cast<std::uint64_t>(r)}));
    for (int k = 0; k < folds; ++k) {
      std::vector<std::size_t> rows;
      for (std::size_t i = 0; i < fold.size(); ++i) {
        if (fold[i] == k) rows.push_back(i);
      }
      shuffle_rows(rows, seed, r, k);
      std::vector<double> s;
      std::vector<int> y;
      for (std::size_t i : rows) {
        s.push_back(scores[i]);
        y.push_back(labels[i]);
      }
      aucs.push_back(auc(s, y));
      aps.push_back(average_precision(s, y));
    }
  }
  return summarize(aucs, aps, folds, repeats);
}

void write_metric_header(std::ostream& out) {
  out << "method,metric,mean,std,folds,repeats\n";
}

void write_metric_row(std::ostream& out, std::string_view method,
                      const MetricReport& r) {
  out << std::setprecision(10);
  out << method << ",auc," << r.auc_mean << ',' << r.auc_std << ','
      << r.folds << ',' << r.repeats << '\n';
  out << method << ",ap," << r.ap_mean << ',' << r.ap_std << ',' << r.folds
      << ',' << r.repeats << '\n';
}

}  // namespace sclrl
