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

#include <set>

#include "chitin/augment.hpp"
#include "chitin/evaluation.hpp"
#include "chitin/synth.hpp"
#include "pca_oracle.hpp"
#include "test_support.hpp"

namespace chitin {
namespace {

using testing::random_matrix;
using testing::TempDir;

// ---- splits and plans ----

TEST(RandomSplit, SizesAndDeterminism) {
  const auto s = random_split(120, 0.2, 42);
  EXPECT_EQ(s.test.size(), 24u);
  EXPECT_EQ(s.train.size(), 96u);
  EXPECT_TRUE(std::is_sorted(s.test.begin(), s.test.end()));
  EXPECT_TRUE(std::is_sorted(s.train.begin(), s.train.end()));
  std::set<std::size_t> all(s.train.begin(), s.train.end());
  all.insert(s.test.begin(), s.test.end());
  EXPECT_EQ(all.size(), 120u);
  EXPECT_EQ(random_split(120, 0.2, 42).test, s.test);
  EXPECT_NE(random_split(120, 0.2, 43).test, s.test);

  const auto tiny = random_split(2, 0.99, 42);
  EXPECT_EQ(tiny.test.size(), 1u);
  EXPECT_EQ(tiny.train.size(), 1u);
  EXPECT_CHITIN_ERROR(random_split(1, 0.2), ErrorCode::DegenerateSplit);
  EXPECT_CHITIN_ERROR(random_split(10, 1.0), ErrorCode::DegenerateSplit);
}

TEST(LocvPlan, FiveClipConditionOrder) {
  const std::vector<int> clips{1, 2, 3, 4, 5};
  const auto plan = build_locv_plan(clips);
  ASSERT_EQ(plan.conditions.size(), 5u);
  const int expected_test[] = {5, 1, 2, 3, 4};
  for (int c = 0; c < 5; ++c) {
    const auto& cond = plan.conditions[static_cast<std::size_t>(c)];
    EXPECT_EQ(cond.condition_id, c + 1);
    EXPECT_EQ(cond.test_clip, expected_test[c]);
    EXPECT_EQ(cond.train_clips.size(), 4u);
    EXPECT_EQ(std::count(cond.train_clips.begin(), cond.train_clips.end(), cond.test_clip), 0);
  }
  EXPECT_EQ(plan.conditions[0].train_clips, (std::vector<int>{1, 2, 3, 4}));

  const std::vector<int> two{1, 2};
  const auto p2 = build_locv_plan(two);
  ASSERT_EQ(p2.conditions.size(), 2u);
  EXPECT_EQ(p2.conditions[0].test_clip, 2);
  EXPECT_EQ(p2.conditions[1].test_clip, 1);
  const std::vector<int> one{1};
  EXPECT_CHITIN_ERROR(build_locv_plan(one), ErrorCode::TooFewClips);
}

// Small synthetic corpus pushed through segmentation, augmentation and MFCC.
FeatureMatrix augmented_fixture(const std::filesystem::path& dir) {
  SynthSpec spec;
  spec.clips_per_class = 3;
  spec.clip_duration = 2.0;
  const auto clips = synth_generate(spec, dir / "synth");
  const auto seg = segment_manifest(clips, 1.0, 44100.0, dir / "inst");
  const auto aug = augment_dataset(seg, AugmentSpec{}, 44100.0, dir / "aug");
  MfccConfig cfg;
  cfg.n_mfcc = 13;
  return build_feature_matrix(load_instances(aug, 44100.0), cfg);
}

TEST(FoldRows, LeakFreeOverAugmentedManifest) {
  TempDir dir;
  const auto fm = augmented_fixture(dir.path());
  ASSERT_EQ(fm.rows(), 4u * 3u * 2u * 3u);
  const auto plan = build_locv_plan(std::vector<int>{1, 2, 3});
  for (const auto& cond : plan.conditions) {
    for (TrainPool pool : {TrainPool::Original, TrainPool::Augmented, TrainPool::Both}) {
      const auto rows = fold_rows(fm, cond, pool);
      std::set<std::string> test_sources;
      for (auto r : rows.test) {
        EXPECT_EQ(fm.groups[r], cond.test_clip);
        EXPECT_FALSE(fm.augmented[r]);
        test_sources.insert(fm.instance_ids[r]);
      }
      EXPECT_EQ(rows.test.size(), 8u);
      for (auto r : rows.train) {
        EXPECT_NE(fm.groups[r], cond.test_clip);
        const auto& id = fm.instance_ids[r];
        EXPECT_EQ(test_sources.count(id.substr(0, id.find("__"))), 0u);
        if (pool == TrainPool::Original) EXPECT_FALSE(fm.augmented[r]);
        if (pool == TrainPool::Augmented) EXPECT_TRUE(fm.augmented[r]);
      }
      EXPECT_EQ(rows.train.size(), pool == TrainPool::Both ? 48u : pool == TrainPool::Original ? 16u : 32u);
    }
  }
}

TEST(RunComparison, StructureAndDeterminism) {
  TempDir dir;
  const auto fm = augmented_fixture(dir.path());
  const auto plan = build_locv_plan(std::vector<int>{1, 2, 3});
  ComparisonOptions opts;
  opts.params.forest.n_estimators = 15;
  opts.params.gbt.rounds = 15;
  const auto table = run_comparison(fm, all_families(), plan, opts);
  ASSERT_EQ(table.cells.size(), 15u);
  for (Family f : all_families()) {
    EXPECT_EQ(table.failed_count(f), 0u);
    double sum = 0;
    for (const auto& cond : plan.conditions) {
      const auto& cell = table.cell(f, cond.condition_id);
      EXPECT_TRUE(cell.ok) << cell.error;
      EXPECT_EQ(cell.n_test, 8u);
      EXPECT_EQ(cell.n_train, 48u);
      EXPECT_EQ(cell.accuracy, cell.report.accuracy);
      sum += cell.accuracy;
    }
    EXPECT_NEAR(table.average(f), sum / 3.0, 1e-15);
  }
  const auto again = run_comparison(fm, all_families(), plan, opts);
  EXPECT_EQ(comparison_csv(again), comparison_csv(table));

  // average does not depend on condition order
  auto reversed = plan;
  std::reverse(reversed.conditions.begin(), reversed.conditions.end());
  const auto rt = run_comparison(fm, all_families(), reversed, opts);
  for (Family f : all_families()) EXPECT_DOUBLE_EQ(rt.average(f), table.average(f));

  const auto csv = comparison_csv(table);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "model,condition,test_clip,accuracy");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 15 + 5);
}

TEST(RunComparison, RecordsFailedCells) {
  FeatureMatrix fm;
  fm.values = random_matrix(6, 2, 3);
  fm.column_names = {"a", "b"};
  fm.instance_ids = {"a1", "a2", "b1", "b2", "c1", "c2"};
  fm.labels = {"x", "y", "x", "y", "x", "y"};
  fm.groups = {1, 1, 2, 2, 3, 3};
  fm.augmented.assign(6, false);
  const auto plan = build_locv_plan(std::vector<int>{1, 2, 3});
  ComparisonOptions opts;
  opts.params.knn_k = 5;  // more neighbours than the 4 training rows
  const std::vector<Family> fams{Family::Knn, Family::DecisionTree};
  const auto t = run_comparison(fm, fams, plan, opts);
  EXPECT_EQ(t.failed_count(Family::Knn), 3u);
  EXPECT_TRUE(std::isnan(t.average(Family::Knn)));
  EXPECT_EQ(t.failed_count(Family::DecisionTree), 0u);
  const auto csv = comparison_csv(t);
  EXPECT_NE(csv.find("failed:"), std::string::npos);
  EXPECT_NE(csv.find("knn,average,,failed"), std::string::npos);
}

TEST(ComparisonTable, AverageOfConditionList) {
  ComparisonTable t;
  t.families = {Family::DecisionTree};
  const double acc[] = {0.95, 0.79, 0.90, 1.00, 1.00};
  for (int c = 0; c < 5; ++c) {
    ComparisonCell cell;
    cell.family = Family::DecisionTree;
    cell.condition_id = c + 1;
    cell.ok = true;
    cell.accuracy = acc[c];
    t.cells.push_back(cell);
  }
  EXPECT_NEAR(t.average(Family::DecisionTree), 0.928, 1e-12);
}

// ---- metrics ----

TEST(Metrics, HandEnumeratedExample) {
  const std::vector<std::string> names{"A", "B"};
  const auto enc = encode_labels(names);
  const std::vector<int> truth{0, 0, 1, 1}, pred{0, 1, 1, 1};
  const auto r = evaluate(pred, truth, enc);
  EXPECT_EQ(r.accuracy, 0.75);
  EXPECT_EQ(r.confusion, (std::vector<std::vector<std::size_t>>{{1, 1}, {0, 2}}));
  EXPECT_EQ(r.per_class[0].precision, 1.0);
  EXPECT_EQ(r.per_class[0].recall, 0.5);
  EXPECT_EQ(r.per_class[0].f1, 2.0 / 3.0);
  EXPECT_EQ(r.per_class[1].precision, 2.0 / 3.0);
  EXPECT_EQ(r.per_class[1].recall, 1.0);
  EXPECT_EQ(r.per_class[1].f1, 0.8);
  EXPECT_TRUE(r.flagged_classes().empty());
  const auto text = format_report(r);
  EXPECT_NE(text.find("accuracy"), std::string::npos);
  EXPECT_NE(text.find("macro avg"), std::string::npos);
  EXPECT_EQ(to_json(r)["accuracy"], 0.75);
}

TEST(Metrics, PerfectAndZeroDenominator) {
  const std::vector<std::string> names{"A", "B", "C"};
  const auto enc = encode_labels(names);
  const std::vector<int> y{0, 1, 2, 1};
  const auto perfect = evaluate(y, y, enc);
  EXPECT_EQ(perfect.accuracy, 1.0);
  for (const auto& m : perfect.per_class) EXPECT_EQ(m.f1, 1.0);

  // C predicted but never true: its recall is undefined, reported as 0 and flagged
  const std::vector<int> truth{0, 0, 1}, pred{2, 0, 1};
  const auto r = evaluate(pred, truth, enc);
  EXPECT_EQ(r.per_class[2].recall, 0.0);
  EXPECT_TRUE(r.per_class[2].recall_undefined);
  EXPECT_EQ(r.flagged_classes(), (std::vector<std::string>{"C"}));
  EXPECT_CHITIN_ERROR(evaluate(pred, y, enc), ErrorCode::LengthMismatch);
}

TEST(Metrics, RandomIdentities) {
  const std::vector<std::string> names{"a", "b", "c", "d"};
  const auto enc = encode_labels(names);
  Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int> truth(37), pred(37);
    for (auto& v : truth) v = static_cast<int>(rng.below(4));
    for (auto& v : pred) v = static_cast<int>(rng.below(4));
    const auto r = evaluate(pred, truth, enc);
    std::size_t trace = 0;
    for (std::size_t i = 0; i < 4; ++i) {
      trace += r.confusion[i][i];
      std::size_t row = 0;
      for (auto v : r.confusion[i]) row += v;
      EXPECT_EQ(r.per_class[i].support, row);
    }
    EXPECT_EQ(r.accuracy, static_cast<double>(trace) / 37.0);
    EXPECT_NEAR(r.weighted.recall, r.accuracy, 1e-12);
  }
}

// ---- importance ----

TEST(Importance, SignalOnlyInFeatureZero) {
  Matrix x(40, 5, 3.0);
  std::vector<int> y(40);
  for (std::size_t i = 0; i < 40; ++i) {
    x(i, 0) = static_cast<double>(i);
    y[i] = i < 20 ? 0 : 1;
  }
  ForestParams p;
  p.n_estimators = 20;
  const auto rep = feature_importance(train_random_forest(x, y, 2, p));
  EXPECT_EQ(rep.importances[0], 1.0);
  EXPECT_EQ(rep.order[0], 0u);
  EXPECT_FALSE(rep.uniform_fallback);
}

TEST(Importance, SumsToOneAndCumulativeMonotone) {
  const auto x = random_matrix(120, 45, 8);
  Rng rng(8);
  std::vector<int> y(120);
  for (auto& v : y) v = static_cast<int>(rng.below(4));  // labels unrelated to features
  ForestParams p;
  p.n_estimators = 30;
  const auto rep = feature_importance(train_random_forest(x, y, 4, p));
  double sum = 0;
  for (double v : rep.importances) {
    EXPECT_GE(v, 0.0);
    sum += v;
  }
  EXPECT_NEAR(sum, 1.0, 1e-9);
  ASSERT_EQ(rep.cumulative.size(), 4u);
  for (std::size_t i = 1; i < rep.cumulative.size(); ++i) EXPECT_GE(rep.cumulative[i].second, rep.cumulative[i - 1].second);
  EXPECT_LT(rep.importances[rep.order[0]], 0.5);
  for (std::size_t i = 1; i < rep.order.size(); ++i) {
    EXPECT_GE(rep.importances[rep.order[i - 1]], rep.importances[rep.order[i]]);
  }
  std::vector<std::string> names;
  for (int i = 0; i < 45; ++i) names.push_back("f" + std::to_string(i));
  const auto csv = importance_csv(rep, names);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "rank,feature_index,feature,importance,cumulative");
}

TEST(Importance, NoSplitsFallsBackToUniform) {
  const auto x = random_matrix(10, 4, 1);
  const std::vector<int> y(10, 0);
  ForestParams p;
  p.n_estimators = 3;
  const auto rep = feature_importance(train_random_forest(x, y, 2, p));
  EXPECT_TRUE(rep.uniform_fallback);
  for (double v : rep.importances) EXPECT_EQ(v, 0.25);
}

// ---- embedding ----

TEST(Embedding, MatchesJacobiOracle) {
  const auto x = random_matrix(30, 5, 12);
  const auto e = embed_2d(x);
  std::vector<std::vector<double>> rows(30);
  for (std::size_t r = 0; r < 30; ++r) rows[r].assign(x.row(r).begin(), x.row(r).end());
  const auto ref = oracle::pca2(rows);
  for (std::size_t r = 0; r < 30; ++r) {
    EXPECT_NEAR(e.coords(r, 0), ref[r][0], 1e-9);
    EXPECT_NEAR(e.coords(r, 1), ref[r][1], 1e-9);
  }
}

TEST(Embedding, PlaneReconstruction) {
  // 3-D points on span{u, v} + offset; two components capture everything.
  Rng rng(4);
  Matrix x(25, 3);
  for (std::size_t r = 0; r < 25; ++r) {
    const double a = rng.normal() * 3.0, b = rng.normal();
    x(r, 0) = 1.0 + a + 0.5 * b;
    x(r, 1) = -2.0 + 2.0 * a - b;
    x(r, 2) = 0.5 - a + 3.0 * b;
  }
  const auto e = embed_2d(x);
  EXPECT_NEAR(e.explained_variance[0] + e.explained_variance[1], e.total_variance, 1e-9 * e.total_variance);
  // pairwise distances survive the projection
  for (std::size_t i = 0; i < 25; ++i) {
    for (std::size_t j = i + 1; j < 25; ++j) {
      double d3 = 0, d2 = 0;
      for (std::size_t k = 0; k < 3; ++k) d3 += (x(i, k) - x(j, k)) * (x(i, k) - x(j, k));
      for (std::size_t k = 0; k < 2; ++k) d2 += (e.coords(i, k) - e.coords(j, k)) * (e.coords(i, k) - e.coords(j, k));
      EXPECT_NEAR(d2, d3, 1e-9 * (1.0 + d3));
    }
  }
}

TEST(Embedding, TranslationInvariantAndDuplicates) {
  auto x = random_matrix(20, 4, 6);
  std::copy(x.row(3).begin(), x.row(3).end(), x.row(7).begin());
  const auto a = embed_2d(x);
  EXPECT_EQ(a.coords(3, 0), a.coords(7, 0));
  EXPECT_EQ(a.coords(3, 1), a.coords(7, 1));
  auto shifted = x;
  for (std::size_t r = 0; r < x.rows; ++r)
    for (std::size_t c = 0; c < x.cols; ++c) shifted(r, c) += 100.0 * static_cast<double>(c + 1);
  const auto b = embed_2d(shifted);
  for (std::size_t i = 0; i < a.coords.data.size(); ++i) EXPECT_NEAR(a.coords.data[i], b.coords.data[i], 1e-9);

  Matrix flat(2, 2);
  flat.data = {0.0, 0.0, 1.0, 1.0};
  const auto two = embed_2d(flat);
  EXPECT_NEAR(two.explained_variance[0], two.total_variance, 1e-12);
  EXPECT_CHITIN_ERROR(embed_2d(Matrix(5, 3, 1.0)), ErrorCode::DegenerateData);
  EXPECT_CHITIN_ERROR(embed_2d(Matrix(1, 3)), ErrorCode::DegenerateData);
}

// ---- plot data ----

TEST(PlotData, CsvAndSvgShapes) {
  ComparisonTable t;
  t.families = {Family::Knn};
  for (int c = 1; c <= 2; ++c) {
    ComparisonCell cell;
    cell.family = Family::Knn;
    cell.condition_id = c;
    cell.ok = true;
    cell.accuracy = 0.5 * c;
    t.cells.push_back(cell);
  }
  const std::vector<SweepResult> sweep{{10, t}, {20, t}};
  const auto box = boxplot_csv(sweep);
  EXPECT_EQ(box.substr(0, box.find('\n')), "n_mfcc,model,condition,accuracy");
  EXPECT_EQ(std::count(box.begin(), box.end(), '\n'), 5);
  const auto bar = bar_csv(sweep);
  EXPECT_NE(bar.find("10,knn,0.75"), std::string::npos);
  EXPECT_EQ(boxplot_svg(sweep).rfind("<svg", 0), 0u);
  EXPECT_NE(bar_svg(sweep).find("</svg>"), std::string::npos);
  EXPECT_EQ(csv_field("SVM (RBF)"), "SVM (RBF)");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
}

}  // namespace
}  // namespace chitin
