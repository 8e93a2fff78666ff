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

#include <numeric>

#include "chitin/forest.hpp"
#include "chitin/gbt.hpp"
#include "chitin/knn.hpp"
#include "chitin/parallel.hpp"
#include "chitin/svm.hpp"
#include "chitin/tree.hpp"
#include "classifier_oracles.hpp"
#include "test_support.hpp"

namespace chitin {
namespace {

using testing::blobs;
using testing::random_matrix;

oracle::Rows rows_of(const Matrix& m) {
  oracle::Rows out(m.rows);
  for (std::size_t r = 0; r < m.rows; ++r) out[r].assign(m.row(r).begin(), m.row(r).end());
  return out;
}

double accuracy(const std::vector<int>& pred, const std::vector<int>& y) {
  std::size_t ok = 0;
  for (std::size_t i = 0; i < y.size(); ++i) ok += pred[i] == y[i];
  return static_cast<double>(ok) / static_cast<double>(y.size());
}

template <class Model>
std::vector<int> predict_rows(const Model& m, const Matrix& x) {
  std::vector<int> out;
  for (std::size_t r = 0; r < x.rows; ++r) out.push_back(m.predict(x.row(r)));
  return out;
}

// ---- decision tree ----

TEST(Gini, ExactValues) {
  const std::vector<double> pure{4, 0, 0, 0}, half{2, 2}, quarter{1, 1, 1, 1};
  EXPECT_EQ(gini(pure), 0.0);
  EXPECT_EQ(gini(half), 0.5);
  EXPECT_EQ(gini(quarter), 0.75);
}

TEST(DecisionTree, OneDimensionalSplit) {
  Matrix x(4, 1);
  x.data = {0, 1, 2, 3};
  const std::vector<int> y{0, 0, 1, 1};
  const auto t = train_decision_tree(x, y, 2);
  ASSERT_EQ(t.nodes.size(), 3u);
  EXPECT_EQ(t.nodes[0].feature, 0);
  EXPECT_EQ(t.nodes[0].threshold, 1.5);
  const auto ref = oracle::best_split(rows_of(x), y, 2);
  EXPECT_EQ(ref.feature, 0);
  EXPECT_EQ(ref.threshold, 1.5);
  EXPECT_EQ(t.depth(), 1u);
  EXPECT_EQ(t.leaf_count(), 2u);
}

TEST(DecisionTree, RootSplitMatchesBruteForce) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto x = random_matrix(30, 4, seed);
    for (auto& v : x.data) v = std::round(v * 4.0) / 4.0;  // plenty of ties
    Rng rng(seed * 7);
    std::vector<int> y(30);
    for (auto& v : y) v = static_cast<int>(rng.below(3));
    const auto ref = oracle::best_split(rows_of(x), y, 3);
    TreeParams p;
    p.max_depth = 1;
    const auto t = train_decision_tree(x, y, 3, p);
    EXPECT_EQ(t.nodes[0].feature, ref.feature) << seed;
    if (ref.feature >= 0) EXPECT_DOUBLE_EQ(t.nodes[0].threshold, ref.threshold) << seed;
  }
}

TEST(DecisionTree, GrowsToPurity) {
  const auto [x, y] = blobs(20, 4, 6, 1.5, 3);
  const auto t = train_decision_tree(x, y, 4);
  EXPECT_EQ(accuracy(predict_rows(t, x), y), 1.0);
  for (const auto& n : t.nodes) {
    const double total = std::accumulate(n.class_counts.begin(), n.class_counts.end(), 0.0);
    EXPECT_GE(total, 1.0);
    if (n.is_leaf()) EXPECT_EQ(n.impurity, 0.0);
  }
}

TEST(DecisionTree, SingleClassIsOneLeaf) {
  const auto x = random_matrix(10, 3, 1);
  const std::vector<int> y(10, 2);
  const auto t = train_decision_tree(x, y, 4);
  ASSERT_EQ(t.nodes.size(), 1u);
  EXPECT_EQ(t.predict(x.row(0)), 2);
  const auto imp = impurity_decrease(t);
  for (double v : imp) EXPECT_EQ(v, 0.0);
}

TEST(DecisionTree, IdenticalVectorsStopSplitting) {
  Matrix x(4, 2, 1.0);
  const std::vector<int> y{0, 1, 1, 0};
  const auto t = train_decision_tree(x, y, 2);
  EXPECT_EQ(t.nodes.size(), 1u);
  EXPECT_EQ(t.predict(x.row(0)), 0);  // 2-2 tie goes to the lower class
}

// ---- random forest ----

TEST(RandomForest, SeparatesBlobs) {
  const auto [x, y] = blobs(20, 4, 8, 1.0, 5);
  ForestParams p;
  p.n_estimators = 25;
  const auto f = train_random_forest(x, y, 4, p);
  EXPECT_EQ(f.trees.size(), 25u);
  EXPECT_EQ(accuracy(predict_rows(f, x), y), 1.0);
  const auto votes = f.votes(x.row(0));
  EXPECT_EQ(std::accumulate(votes.begin(), votes.end(), 0), 25);
}

TEST(RandomForest, IndependentOfWorkerCount) {
  const auto [x, y] = blobs(15, 3, 5, 2.0, 8);
  ForestParams p;
  p.n_estimators = 12;
  set_worker_count(1);
  const auto a = train_random_forest(x, y, 3, p);
  set_worker_count(4);
  const auto b = train_random_forest(x, y, 3, p);
  set_worker_count(0);
  EXPECT_EQ(a, b);
  p.base_seed = 43;
  EXPECT_NE(train_random_forest(x, y, 3, p), a);
}

TEST(RandomForest, MajorityVoteTies) {
  const std::vector<int> a{3, 5, 5}, b{0, 0, 0};
  EXPECT_EQ(majority_vote(a), 1);
  EXPECT_EQ(majority_vote(b), 0);
}

// ---- KNN ----

TEST(Knn, MatchesExhaustiveSort) {
  const auto train = random_matrix(100, 2, 17);
  Rng rng(18);
  std::vector<int> y(100);
  for (auto& v : y) v = static_cast<int>(rng.below(3));
  const auto queries = random_matrix(50, 2, 19);
  const auto rows = rows_of(train);
  for (int k : {1, 3, 5}) {
    const auto m = fit_knn(train, y, 3, k);
    for (std::size_t q = 0; q < queries.rows; ++q) {
      std::vector<double> qv(queries.row(q).begin(), queries.row(q).end());
      ASSERT_EQ(m.predict(queries.row(q)), oracle::knn_predict(rows, y, 3, k, qv)) << "k=" << k << " q=" << q;
    }
  }
}

TEST(Knn, TieBreaks) {
  // Two neighbours at equal distance: the lower row wins the single slot.
  Matrix x(2, 1);
  x.data = {-1.0, 1.0};
  const std::vector<int> y{1, 0};
  const double q = 0.0;
  EXPECT_EQ(fit_knn(x, y, 2, 1).predict(std::span<const double>(&q, 1)), 1);
  // 1-1 vote: the class with the smaller summed distance wins.
  Matrix x2(2, 1);
  x2.data = {0.5, -2.0};
  EXPECT_EQ(fit_knn(x2, y, 2, 2).predict(std::span<const double>(&q, 1)), 1);
  const auto nb = fit_knn(x2, y, 2, 2).neighbours(std::span<const double>(&q, 1));
  EXPECT_EQ(nb, (std::vector<std::size_t>{0, 1}));
  EXPECT_CHITIN_ERROR(fit_knn(x, y, 2, 3), ErrorCode::InvalidArgument);
  EXPECT_CHITIN_ERROR(fit_knn(x, y, 2, 0), ErrorCode::InvalidArgument);
}

// ---- gradient boosting ----

TEST(Gbt, LossNonIncreasingAndMatchesReference) {
  const auto [x, y] = blobs(10, 3, 4, 2.5, 21);
  GbtParams p;
  p.rounds = 100;
  const auto m = train_gbt(x, y, 3, p);
  ASSERT_EQ(m.train_loss.size(), 101u);
  EXPECT_NEAR(m.train_loss[0], std::log(3.0), 1e-12);
  for (std::size_t i = 1; i < m.train_loss.size(); ++i) EXPECT_LE(m.train_loss[i], m.train_loss[i - 1] + 1e-12) << i;

  oracle::BoostReference ref;
  std::vector<std::vector<double>> scores;
  const auto losses = ref.losses(rows_of(x), y, 3, 10, &scores);
  GbtParams short_run = p;
  short_run.rounds = 10;
  const auto s = train_gbt(x, y, 3, short_run);
  for (std::size_t i = 0; i < losses.size(); ++i) EXPECT_NEAR(s.train_loss[i], losses[i], 1e-9) << i;
  for (std::size_t r = 0; r < x.rows; ++r) {
    const auto got = s.scores(x.row(r));
    for (int c = 0; c < 3; ++c) EXPECT_NEAR(got[static_cast<std::size_t>(c)], scores[r][static_cast<std::size_t>(c)], 1e-9);
  }
}

TEST(Gbt, SoftmaxAndSingleClass) {
  const std::vector<double> s{1000.0, 1000.0, 0.0};
  const auto p = softmax(s);
  EXPECT_NEAR(p[0], 0.5, 1e-12);
  EXPECT_NEAR(p[2], 0.0, 1e-12);
  const auto x = random_matrix(8, 2, 4);
  const std::vector<int> y(8, 1);
  GbtParams params;
  params.rounds = 5;
  const auto m = train_gbt(x, y, 3, params);
  for (std::size_t r = 0; r < x.rows; ++r) EXPECT_EQ(m.predict(x.row(r)), 1);
}

TEST(Gbt, IndependentOfWorkerCount) {
  const auto [x, y] = blobs(8, 4, 5, 2.0, 2);
  GbtParams p;
  p.rounds = 8;
  set_worker_count(1);
  const auto a = train_gbt(x, y, 4, p);
  set_worker_count(3);
  const auto b = train_gbt(x, y, 4, p);
  set_worker_count(0);
  EXPECT_EQ(a, b);
}

// ---- SVM ----

TEST(Svm, GammaScaleAndKernel) {
  Matrix x(2, 2);
  x.data = {0, 0, 2, 2};
  // entries {0,0,2,2}: variance 1, d = 2
  EXPECT_DOUBLE_EQ(gamma_scale(x), 0.5);
  EXPECT_EQ(gamma_scale(Matrix(3, 2, 4.0)), 1.0);
  EXPECT_DOUBLE_EQ(rbf_kernel(x.row(0), x.row(1), 0.5), std::exp(-4.0));
}

TEST(Svm, DualMatchesProjectedGradient) {
  const auto [x, yi] = blobs(8, 2, 2, 2.0, 31);
  std::vector<double> y;
  for (int v : yi) y.push_back(v == 0 ? 1.0 : -1.0);
  const double gamma = 0.3, c = 1.0;
  SvmParams p;
  p.c = c;
  p.gamma = gamma;
  p.tol = 1e-8;
  p.max_passes = 10000;
  const auto machine = train_binary_svm(x, y, kernel_matrix(x, gamma), p);
  EXPECT_TRUE(machine.converged);

  // Scatter the support-vector alphas back onto training rows.
  std::vector<double> alpha(x.rows, 0.0);
  for (std::size_t s = 0; s < machine.support_vectors.rows; ++s) {
    EXPECT_GE(machine.alpha[s], 0.0);
    EXPECT_LE(machine.alpha[s], c);
    for (std::size_t r = 0; r < x.rows; ++r) {
      if (std::equal(x.row(r).begin(), x.row(r).end(), machine.support_vectors.row(s).begin())) alpha[r] = machine.alpha[s];
    }
  }
  const auto rows = rows_of(x);
  const auto ref = oracle::solve_dual(rows, y, c, gamma);
  const double ours = oracle::dual_objective(rows, y, alpha, gamma);
  const double theirs = oracle::dual_objective(rows, y, ref, gamma);
  EXPECT_LE(ours, theirs + 1e-6);
  EXPECT_NEAR(ours, theirs, 1e-4 * std::abs(theirs));
  double eq = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) eq += alpha[i] * y[i];
  EXPECT_NEAR(eq, 0.0, 1e-9);
}

TEST(Svm, TwoBlobsPerfectTraining) {
  const auto [x, y] = blobs(25, 2, 3, 1.0, 41);
  const auto m = train_svm_rbf(x, y, 2);
  EXPECT_TRUE(m.converged());
  EXPECT_EQ(accuracy(predict_rows(m, x), y), 1.0);
  for (const auto& machine : m.machines) {
    for (double a : machine.alpha) {
      EXPECT_GE(a, 0.0);
      EXPECT_LE(a, m.c);
    }
  }
}

TEST(Svm, MulticlassAndWorkerCount) {
  const auto [x, y] = blobs(12, 4, 6, 1.0, 12);
  set_worker_count(1);
  const auto a = train_svm_rbf(x, y, 4);
  set_worker_count(4);
  const auto b = train_svm_rbf(x, y, 4);
  set_worker_count(0);
  EXPECT_EQ(a, b);
  EXPECT_EQ(accuracy(predict_rows(a, x), y), 1.0);
  EXPECT_EQ(a.decision(x.row(0)).size(), 4u);
}

TEST(Svm, IterationCapClearsConverged) {
  const auto [x, yi] = blobs(20, 2, 2, 3.0, 5);
  std::vector<double> y;
  for (int v : yi) y.push_back(v == 0 ? 1.0 : -1.0);
  SvmParams p;
  p.max_passes = 0;
  const auto m = train_binary_svm(x, y, kernel_matrix(x, 0.5), p);
  EXPECT_FALSE(m.converged);
}

}  // namespace
}  // namespace chitin
