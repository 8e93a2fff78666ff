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

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "chitin/features.hpp"
#include "chitin/labels.hpp"
#include "chitin/matrix.hpp"
#include "chitin/model.hpp"

namespace chitin {

// ---- split protocols ---------------------------------------------------------

struct RandomSplit {
  std::vector<std::size_t> train;  // ascending row indices
  std::vector<std::size_t> test;
  double test_fraction = 0.2;
  std::uint64_t seed = 42;
};

/// Unstratified seeded shuffle; test size is round(n * fraction) clamped to
/// [1, n - 1]. Throws DegenerateSplit when n < 2 or the fraction is outside
/// (0, 1).
RandomSplit random_split(std::size_t n_rows, double test_fraction = 0.2, std::uint64_t seed = 42);

struct LocvCondition {
  int condition_id = 0;  // 1-based
  int test_clip = 0;
  std::vector<int> train_clips;
};

struct LocvPlan {
  std::vector<LocvCondition> conditions;
};

/// Condition 1 tests the last clip, then clips 1..n-1 follow in order; every
/// other clip trains. Throws TooFewClips for fewer than two clips.
LocvPlan build_locv_plan(std::span<const int> clip_ids);

enum class TrainPool { Original, Augmented, Both };

std::string_view to_string(TrainPool pool);
TrainPool parse_train_pool(std::string_view text);

struct FoldRows {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Train rows come from the condition's training clips, filtered by pool.
/// Test rows are the original (non-augmented) rows of the test clip.
FoldRows fold_rows(const FeatureMatrix& fm, const LocvCondition& condition, TrainPool pool);

// ---- metrics -----------------------------------------------------------------

struct ClassMetrics {
  std::string name;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
  bool precision_undefined = false;  // zero denominator, reported as 0
  bool recall_undefined = false;
  bool f1_undefined = false;
};

struct EvaluationReport {
  std::vector<std::string> class_names;
  std::vector<std::vector<std::size_t>> confusion;  // rows = true, cols = predicted
  std::vector<ClassMetrics> per_class;
  ClassMetrics macro;
  ClassMetrics weighted;
  double accuracy = 0.0;
  std::size_t total = 0;

  std::size_t correct() const;
  /// Names of classes with at least one zero-denominator metric.
  std::vector<std::string> flagged_classes() const;
};

/// Throws LengthMismatch when the vectors differ in length or are empty.
EvaluationReport evaluate(std::span<const int> predictions, std::span<const int> truths, const LabelEncoding& encoding);

/// Aligned plain-text classification report (two decimals).
std::string format_report(const EvaluationReport& report);
nlohmann::json to_json(const EvaluationReport& report);

// ---- model comparison --------------------------------------------------------

struct ComparisonOptions {
  ModelParams params;
  TrainPool pool = TrainPool::Both;
  bool standardize = true;
};

struct ComparisonCell {
  Family family = Family::DecisionTree;
  int condition_id = 0;
  int test_clip = 0;
  bool ok = false;
  double accuracy = 0.0;
  std::string error;  // set when !ok
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  bool converged = true;  // false only for an SVM that hit its iteration cap
  EvaluationReport report;
};

struct ComparisonTable {
  std::vector<Family> families;
  std::vector<LocvCondition> conditions;
  std::vector<ComparisonCell> cells;  // family-major, conditions in plan order

  const ComparisonCell& cell(Family family, int condition_id) const;
  /// Mean accuracy over the family's successful cells; NaN when none succeeded.
  double average(Family family) const;
  std::size_t failed_count(Family family) const;
};

/// Fits the standardizer on each training fold only, trains every family,
/// and scores the fold's test rows. A failing cell is recorded and the run
/// continues. Cells are computed in parallel; the table layout is fixed.
ComparisonTable run_comparison(const FeatureMatrix& features, std::span<const Family> families, const LocvPlan& plan,
                               const ComparisonOptions& options = {});

/// model,condition,test_clip,accuracy with model,average,,<mean> footers.
std::string comparison_csv(const ComparisonTable& table);

// ---- feature importance -----------------------------------------------------

struct ImportanceReport {
  std::vector<double> importances;  // sum to 1
  std::vector<std::size_t> order;   // descending importance, ties to lower index
  std::vector<std::pair<std::size_t, double>> cumulative;  // (k, sum of top k)
  bool uniform_fallback = false;  // forest made no splits at all
};

/// Per-tree impurity decreases averaged over the forest, then normalized.
/// Throws UntrainedModel for an empty forest.
ImportanceReport feature_importance(const RandomForest& forest,
                                    std::span<const std::size_t> top_k = std::span<const std::size_t>{});

/// Default cumulative cut-offs: 10, 20, 30, 40.
std::span<const std::size_t> default_top_k();

std::string importance_csv(const ImportanceReport& report, std::span<const std::string> feature_names);

// ---- embedding ---------------------------------------------------------------

struct Embedding {
  Matrix coords;                       // n x 2
  std::vector<double> explained_variance;  // top-2 eigenvalues of the covariance
  double total_variance = 0.0;
};

/// PCA onto the top two principal directions. Each direction is signed so
/// its largest-magnitude entry is positive. Throws DegenerateData for fewer
/// than two rows or columns or zero variance everywhere.
Embedding embed_2d(const Matrix& x);

std::string embedding_csv(const FeatureMatrix& features, const Embedding& embedding);

// ---- plot data ----------------------------------------------------------------

struct SweepResult {
  int n_mfcc = 0;
  ComparisonTable table;
};

/// n_mfcc,model,condition,accuracy rows for every successful cell.
std::string boxplot_csv(std::span<const SweepResult> sweep);
/// n_mfcc,model,average_accuracy rows.
std::string bar_csv(std::span<const SweepResult> sweep);

/// Dependency-free SVG renderings of the two plot-data files.
std::string boxplot_svg(std::span<const SweepResult> sweep);
std::string bar_svg(std::span<const SweepResult> sweep);

/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(std::string_view text);

}  // namespace chitin
