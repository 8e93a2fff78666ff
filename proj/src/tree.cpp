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

#include "chitin/tree.hpp"

#include <algorithm>
#include <numeric>

#include "chitin/error.hpp"

namespace chitin {

double gini(std::span<const double> counts) {
  double total = 0.0;
  for (double c : counts) total += c;
  if (!(total > 0.0)) throw Error(ErrorCode::EmptyNode, "Gini of an empty node");
  double sq = 0.0;
  for (double c : counts) sq += (c / total) * (c / total);
  return 1.0 - sq;
}

double TreeNode::n_samples() const { return std::accumulate(class_counts.begin(), class_counts.end(), 0.0); }

int DecisionTree::leaf_index(std::span<const double> x) const {
  if (nodes.empty()) throw Error(ErrorCode::UntrainedModel, "empty tree");
  int i = 0;
  while (!nodes[static_cast<std::size_t>(i)].is_leaf()) {
    const auto& node = nodes[static_cast<std::size_t>(i)];
    i = x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left : node.right;
  }
  return i;
}

int DecisionTree::predict(std::span<const double> x) const {
  if (x.size() != n_features) {
    throw Error(ErrorCode::ShapeMismatch, "tree expects " + std::to_string(n_features) + " features, got " +
                                              std::to_string(x.size()));
  }
  return nodes[static_cast<std::size_t>(leaf_index(x))].predicted;
}

std::size_t DecisionTree::depth() const {
  if (nodes.empty()) return 0;
  std::vector<std::size_t> d(nodes.size(), 0);
  std::size_t deepest = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    deepest = std::max(deepest, d[i]);
    if (!nodes[i].is_leaf()) {
      d[static_cast<std::size_t>(nodes[i].left)] = d[i] + 1;
      d[static_cast<std::size_t>(nodes[i].right)] = d[i] + 1;
    }
  }
  return deepest;
}

std::size_t DecisionTree::leaf_count() const {
  return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

namespace {

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double gain = kMinSplitGain;

  bool valid() const { return feature >= 0; }
};

int argmax_lowest(std::span<const double> counts) {
  int best = 0;
  for (std::size_t c = 1; c < counts.size(); ++c) {
    if (counts[c] > counts[static_cast<std::size_t>(best)]) best = static_cast<int>(c);
  }
  return best;
}

class Grower {
 public:
  Grower(const Matrix& x, std::span<const int> y, int n_classes, const TreeParams& params, Rng& rng)
      : x_(x), y_(y), k_(static_cast<std::size_t>(n_classes)), params_(params), rng_(rng) {
    tree_.n_classes = n_classes;
    tree_.n_features = x.cols;
  }

  DecisionTree run(std::vector<std::size_t> rows) {
    grow(std::move(rows), 0);
    return std::move(tree_);
  }

 private:
  int grow(std::vector<std::size_t> rows, int depth) {
    TreeNode node;
    node.class_counts.assign(k_, 0.0);
    for (std::size_t r : rows) node.class_counts[static_cast<std::size_t>(y_[r])] += 1.0;
    node.impurity = gini(node.class_counts);
    node.predicted = argmax_lowest(node.class_counts);

    const int index = static_cast<int>(tree_.nodes.size());
    tree_.nodes.push_back(node);

    const bool depth_capped = params_.max_depth >= 0 && depth >= params_.max_depth;
    if (node.impurity <= 0.0 || rows.size() < static_cast<std::size_t>(params_.min_samples_split) || depth_capped) {
      return index;
    }

    const Split split = find_split(rows, node);
    if (!split.valid()) return index;

    std::vector<std::size_t> left, right;
    for (std::size_t r : rows) {
      (x_(r, static_cast<std::size_t>(split.feature)) <= split.threshold ? left : right).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();

    const int l = grow(std::move(left), depth + 1);
    const int r = grow(std::move(right), depth + 1);
    auto& stored = tree_.nodes[static_cast<std::size_t>(index)];
    stored.feature = split.feature;
    stored.threshold = split.threshold;
    stored.left = l;
    stored.right = r;
    return index;
  }

  Split find_split(const std::vector<std::size_t>& rows, const TreeNode& node) {
    Split best;
    const std::size_t d = x_.cols;
    const auto mtry = static_cast<std::size_t>(params_.max_features);
    if (mtry == 0 || mtry >= d) {
      for (std::size_t f = 0; f < d; ++f) scan_feature(rows, node, f, best);
      return best;
    }
    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::size_t visited = 0;
    for (std::size_t i = 0; i < d; ++i) {
      // Lazy partial Fisher-Yates: draws only as many features as visited.
      const std::size_t j = i + static_cast<std::size_t>(rng_.below(d - i));
      std::swap(order[i], order[j]);
      scan_feature(rows, node, order[i], best);
      ++visited;
      if (visited >= mtry && best.valid()) break;
    }
    return best;
  }

  void scan_feature(const std::vector<std::size_t>& rows, const TreeNode& node, std::size_t f, Split& best) {
    values_.clear();
    for (std::size_t r : rows) values_.emplace_back(x_(r, f), y_[r]);
    std::sort(values_.begin(), values_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    if (values_.front().first == values_.back().first) return;

    const auto n = static_cast<double>(rows.size());
    left_.assign(k_, 0.0);
    for (std::size_t i = 0; i + 1 < values_.size(); ++i) {
      left_[static_cast<std::size_t>(values_[i].second)] += 1.0;
      const double lo = values_[i].first;
      const double hi = values_[i + 1].first;
      if (lo == hi) continue;

      const auto n_left = static_cast<double>(i + 1);
      const double n_right = n - n_left;
      double sq_left = 0.0, sq_right = 0.0;
      for (std::size_t c = 0; c < k_; ++c) {
        const double right = node.class_counts[c] - left_[c];
        sq_left += left_[c] * left_[c];
        sq_right += right * right;
      }
      const double gini_left = 1.0 - sq_left / (n_left * n_left);
      const double gini_right = 1.0 - sq_right / (n_right * n_right);
      const double gain = node.impurity - (n_left * gini_left + n_right * gini_right) / n;

      const bool better = gain > best.gain || (best.valid() && gain == best.gain && static_cast<int>(f) < best.feature);
      if (better) {
        double mid = lo + (hi - lo) / 2.0;
        if (!(mid < hi)) mid = lo;
        best.feature = static_cast<int>(f);
        best.threshold = mid;
        best.gain = gain;
      }
    }
  }

  const Matrix& x_;
  std::span<const int> y_;
  std::size_t k_;
  const TreeParams& params_;
  Rng& rng_;
  DecisionTree tree_;
  std::vector<std::pair<double, int>> values_;
  std::vector<double> left_;
};

void check_training_shape(const Matrix& x, std::span<const int> y, int n_classes) {
  if (x.rows == 0) throw Error(ErrorCode::ShapeMismatch, "no training rows");
  if (y.size() != x.rows) {
    throw Error(ErrorCode::ShapeMismatch, std::to_string(x.rows) + " rows but " + std::to_string(y.size()) + " labels");
  }
  if (n_classes < 1) throw Error(ErrorCode::ShapeMismatch, "n_classes must be positive");
  for (int label : y) {
    if (label < 0 || label >= n_classes) throw Error(ErrorCode::ShapeMismatch, "label out of range");
  }
}

}  // namespace

DecisionTree grow_tree(const Matrix& x, std::span<const int> y, int n_classes, std::vector<std::size_t> rows,
                       const TreeParams& params, Rng& rng) {
  check_training_shape(x, y, n_classes);
  if (rows.empty()) throw Error(ErrorCode::ShapeMismatch, "no rows selected");
  return Grower(x, y, n_classes, params, rng).run(std::move(rows));
}

DecisionTree train_decision_tree(const Matrix& x, std::span<const int> y, int n_classes, const TreeParams& params) {
  std::vector<std::size_t> rows(x.rows);
  std::iota(rows.begin(), rows.end(), 0);
  Rng rng(params.seed);
  return grow_tree(x, y, n_classes, std::move(rows), params, rng);
}

std::vector<double> impurity_decrease(const DecisionTree& tree) {
  std::vector<double> out(tree.n_features, 0.0);
  if (tree.nodes.empty()) return out;
  const double n_root = tree.nodes.front().n_samples();
  for (const auto& node : tree.nodes) {
    if (node.is_leaf()) continue;
    const auto& l = tree.nodes[static_cast<std::size_t>(node.left)];
    const auto& r = tree.nodes[static_cast<std::size_t>(node.right)];
    const double n = node.n_samples();
    const double weighted = node.impurity - (l.n_samples() * l.impurity + r.n_samples() * r.impurity) / n;
    out[static_cast<std::size_t>(node.feature)] += (n / n_root) * weighted;
  }
  return out;
}

}  // namespace chitin
