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

#include "chitin/knn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "chitin/error.hpp"

namespace chitin {

KnnModel fit_knn(const Matrix& x, std::span<const int> y, int n_classes, int k) {
  if (y.size() != x.rows) throw Error(ErrorCode::ShapeMismatch, "rows and labels disagree");
  if (k < 1 || static_cast<std::size_t>(k) > x.rows) {
    throw Error(ErrorCode::InvalidArgument, "k = " + std::to_string(k) + " needs 1 <= k <= " + std::to_string(x.rows));
  }
  for (int label : y) {
    if (label < 0 || label >= n_classes) throw Error(ErrorCode::ShapeMismatch, "label out of range");
  }
  return KnnModel{x, std::vector<int>(y.begin(), y.end()), n_classes, k};
}

namespace {

struct Candidate {
  double dist_sq;
  std::size_t row;
};

std::vector<Candidate> nearest(const KnnModel& m, std::span<const double> query) {
  if (m.train.rows == 0) throw Error(ErrorCode::UntrainedModel, "knn model has no training rows");
  if (query.size() != m.train.cols) {
    throw Error(ErrorCode::ShapeMismatch, "knn expects " + std::to_string(m.train.cols) + " features, got " +
                                              std::to_string(query.size()));
  }
  std::vector<Candidate> all(m.train.rows);
  for (std::size_t i = 0; i < m.train.rows; ++i) {
    const auto row = m.train.row(i);
    double d = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) {
      const double diff = row[j] - query[j];
      d += diff * diff;
    }
    all[i] = {d, i};
  }
  const auto k = std::min(static_cast<std::size_t>(m.k), all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end(),
                    [](const Candidate& a, const Candidate& b) {
                      return a.dist_sq < b.dist_sq || (a.dist_sq == b.dist_sq && a.row < b.row);
                    });
  all.resize(k);
  return all;
}

}  // namespace

std::vector<std::size_t> KnnModel::neighbours(std::span<const double> query) const {
  std::vector<std::size_t> out;
  for (const auto& c : nearest(*this, query)) out.push_back(c.row);
  return out;
}

int KnnModel::predict(std::span<const double> query) const {
  const auto near = nearest(*this, query);
  std::vector<int> votes(static_cast<std::size_t>(n_classes), 0);
  std::vector<double> dist_sum(static_cast<std::size_t>(n_classes), 0.0);
  for (const auto& c : near) {
    const auto label = static_cast<std::size_t>(labels[c.row]);
    ++votes[label];
    dist_sum[label] += std::sqrt(c.dist_sq);
  }
  int best = -1;
  for (int c = 0; c < n_classes; ++c) {
    const auto i = static_cast<std::size_t>(c);
    if (votes[i] == 0) continue;
    if (best < 0) {
      best = c;
      continue;
    }
    const auto b = static_cast<std::size_t>(best);
    if (votes[i] > votes[b] || (votes[i] == votes[b] && dist_sum[i] < dist_sum[b])) best = c;
  }
  return best;
}

}  // namespace chitin
