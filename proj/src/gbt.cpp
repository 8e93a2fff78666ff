// Copyright 2026 The Chitin Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "chitin/gbt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "chitin/error.hpp"
#include "chitin/parallel.hpp"

namespace chitin {

double RegressionTree::predict(std::span<const double> x) const {
  if (nodes.empty()) return 0.0;
  std::size_t i = 0;
  while (!nodes[i].is_leaf()) {
    const auto& n = nodes[i];
    i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
  }
  return nodes[i].value;
}

std::vector<double> softmax(std::span<const double> scores) {
  std::vector<double> p(scores.begin(), scores.end());
  if (p.empty()) return p;
  const double m = *std::max_element(p.begin(), p.end());
  double sum = 0.0;
  for (auto& v : p) {
    v = std::exp(v - m);
    sum += v;
  }
  for (auto& v : p) v /= sum;
  return p;
}

std::vector<double> GbtModel::scores(std::span<const double> x) const {
  if (n_classes < 1) throw Error(ErrorCode::UntrainedModel, "gbt model has no classes");
  if (x.size() != n_features) {
    throw Error(ErrorCode::ShapeMismatch, "gbt expects " + std::to_string(n_features) + " features, got " +
                                              std::to_string(x.size()));
  }
  std::vector<double> s(static_cast<std::size_t>(n_classes), 0.0);
  for (const auto& round : rounds) {
    for (std::size_t c = 0; c < round.size(); ++c) s[c] += round[c].predict(x);
  }
  return s;
}

std::vector<double> GbtModel::predict_proba(std::span<const double> x) const { return softmax(scores(x)); }

int GbtModel::predict(std::span<const double> x) const {
  const auto p = predict_proba(x);
  return static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
}

namespace {

constexpr double kMinHessian = 1e-16;

class RegressionGrower {
 public:
  RegressionGrower(const Matrix& x, std::span<const double> g, std::span<const double> h, const GbtParams& params)
      : x_(x), g_(g), h_(h), params_(params) {}

  RegressionTree run() {
    std::vector<std::size_t> rows(x_.rows);
    std::iota(rows.begin(), rows.end(), 0);
    grow(rows, 0);
    return std::move(tree_);
  }

 private:
  double score(double g, double h) const { return g * g / (h + params_.l2_lambda); }

  int grow(const std::vector<std::size_t>& rows, int depth) {
    double g = 0.0, h = 0.0;
    for (std::size_t r : rows) {
      g += g_[r];
      h += h_[r];
    }
    const int index = static_cast<int>(tree_.nodes.size());
    RegressionNode node;
    node.value = -g / (h + params_.l2_lambda) * params_.learning_rate;
    tree_.nodes.push_back(node);
    if (depth >= params_.max_depth || rows.size() < 2) return index;

    int best_feature = -1;
    double best_threshold = 0.0;
    double best_gain = 1e-12;
    const double parent = score(g, h);
    for (std::size_t f = 0; f < x_.cols; ++f) {
      sorted_.assign(rows.begin(), rows.end());
      std::sort(sorted_.begin(), sorted_.end(), [&](std::size_t a, std::size_t b) { return x_(a, f) < x_(b, f); });
      double gl = 0.0, hl = 0.0;
      for (std::size_t i = 0; i + 1 < sorted_.size(); ++i) {
        gl += g_[sorted_[i]];
        hl += h_[sorted_[i]];
        const double lo = x_(sorted_[i], f);
        const double hi = x_(sorted_[i + 1], f);
        if (lo == hi) continue;
        const double gain = 0.5 * (score(gl, hl) + score(g - gl, h - hl) - parent);
        if (gain > best_gain) {
          best_gain = gain;
          best_feature = static_cast<int>(f);
          best_threshold = lo + (hi - lo) / 2.0;
          if (!(best_threshold < hi)) best_threshold = lo;
        }
      }
    }
    if (best_feature < 0) return index;

    std::vector<std::size_t> left, right;
    for (std::size_t r : rows) {
      (x_(r, static_cast<std::size_t>(best_feature)) <= best_threshold ? left : right).push_back(r);
    }
    const int l = grow(left, depth + 1);
    const int r = grow(right, depth + 1);
    auto& stored = tree_.nodes[static_cast<std::size_t>(index)];
    stored.feature = best_feature;
    stored.threshold = best_threshold;
    stored.left = l;
    stored.right = r;
    return index;
  }

  const Matrix& x_;
  std::span<const double> g_;
  std::span<const double> h_;
  const GbtParams& params_;
  RegressionTree tree_;
  std::vector<std::size_t> sorted_;
};

double mean_cross_entropy(const Matrix& scores, std::span<const int> y) {
  double total = 0.0;
  for (std::size_t i = 0; i < scores.rows; ++i) {
    const auto p = softmax(scores.row(i));
    total -= std::log(std::max(p[static_cast<std::size_t>(y[i])], 1e-300));
  }
  return total / static_cast<double>(scores.rows);
}

}  // namespace

GbtModel train_gbt(const Matrix& x, std::span<const int> y, int n_classes, const GbtParams& params) {
  if (x.rows == 0 || y.size() != x.rows) throw Error(ErrorCode::ShapeMismatch, "rows and labels disagree");
  if (n_classes < 1) throw Error(ErrorCode::ShapeMismatch, "n_classes must be positive");
  for (int label : y) {
    if (label < 0 || label >= n_classes) throw Error(ErrorCode::ShapeMismatch, "label out of range");
  }
  if (params.rounds < 0 || params.max_depth < 0 || !(params.learning_rate > 0.0) || params.l2_lambda < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "invalid boosting parameters");
  }

  const auto k = static_cast<std::size_t>(n_classes);
  GbtModel model;
  model.n_classes = n_classes;
  model.n_features = x.cols;

  Matrix f(x.rows, k, 0.0);
  model.train_loss.push_back(mean_cross_entropy(f, y));
  std::vector<std::vector<double>> grad(k, std::vector<double>(x.rows));
  std::vector<std::vector<double>> hess(k, std::vector<double>(x.rows));

  for (int round = 0; round < params.rounds; ++round) {
    for (std::size_t i = 0; i < x.rows; ++i) {
      const auto p = softmax(f.row(i));
      for (std::size_t c = 0; c < k; ++c) {
        const double target = static_cast<std::size_t>(y[i]) == c ? 1.0 : 0.0;
        grad[c][i] = p[c] - target;
        hess[c][i] = std::max(2.0 * p[c] * (1.0 - p[c]), kMinHessian);
      }
    }
    std::vector<RegressionTree> trees(k);
    parallel_for(k, [&](std::size_t c) { trees[c] = RegressionGrower(x, grad[c], hess[c], params).run(); });
    for (std::size_t i = 0; i < x.rows; ++i) {
      for (std::size_t c = 0; c < k; ++c) f(i, c) += trees[c].predict(x.row(i));
    }
    model.rounds.push_back(std::move(trees));
    model.train_loss.push_back(mean_cross_entropy(f, y));
  }
  return model;
}

}  // namespace chitin
