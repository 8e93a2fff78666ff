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

#include "chitin/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>

#include "chitin/error.hpp"
#include "chitin/fileio.hpp"
#include "chitin/parallel.hpp"
#include "chitin/random.hpp"

namespace chitin {

using nlohmann::json;

// ---- splits ------------------------------------------------------------------

RandomSplit random_split(std::size_t n_rows, double test_fraction, std::uint64_t seed) {
  if (n_rows < 2) throw Error(ErrorCode::DegenerateSplit, "need at least 2 rows to split, got " + std::to_string(n_rows));
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw Error(ErrorCode::DegenerateSplit, "test fraction must lie in (0, 1)");
  }
  auto n_test = static_cast<std::size_t>(std::llround(static_cast<double>(n_rows) * test_fraction));
  n_test = std::clamp<std::size_t>(n_test, 1, n_rows - 1);

  std::vector<std::size_t> idx(n_rows);
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  rng.shuffle(idx);

  RandomSplit split;
  split.test_fraction = test_fraction;
  split.seed = seed;
  split.test.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_test));
  split.train.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_test), idx.end());
  std::sort(split.test.begin(), split.test.end());
  std::sort(split.train.begin(), split.train.end());
  return split;
}

LocvPlan build_locv_plan(std::span<const int> clip_ids) {
  std::vector<int> ids(clip_ids.begin(), clip_ids.end());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  if (ids.size() < 2) {
    throw Error(ErrorCode::TooFewClips, "leave-one-clip-out needs at least 2 clips, got " + std::to_string(ids.size()));
  }
  std::vector<int> test_order;
  test_order.push_back(ids.back());
  test_order.insert(test_order.end(), ids.begin(), ids.end() - 1);

  LocvPlan plan;
  for (std::size_t c = 0; c < test_order.size(); ++c) {
    LocvCondition cond;
    cond.condition_id = static_cast<int>(c + 1);
    cond.test_clip = test_order[c];
    for (int id : ids) {
      if (id != cond.test_clip) cond.train_clips.push_back(id);
    }
    plan.conditions.push_back(std::move(cond));
  }
  return plan;
}

std::string_view to_string(TrainPool pool) {
  switch (pool) {
    case TrainPool::Original: return "original";
    case TrainPool::Augmented: return "augmented";
    case TrainPool::Both: return "both";
  }
  return "both";
}

TrainPool parse_train_pool(std::string_view text) {
  if (text == "original") return TrainPool::Original;
  if (text == "augmented") return TrainPool::Augmented;
  if (text == "both") return TrainPool::Both;
  throw Error(ErrorCode::InvalidArgument, "train pool must be original, augmented or both");
}

FoldRows fold_rows(const FeatureMatrix& fm, const LocvCondition& condition, TrainPool pool) {
  FoldRows rows;
  for (std::size_t r = 0; r < fm.rows(); ++r) {
    const int clip = fm.groups[r];
    const bool aug = fm.augmented[r];
    if (clip == condition.test_clip) {
      if (!aug) rows.test.push_back(r);
      continue;
    }
    if (std::find(condition.train_clips.begin(), condition.train_clips.end(), clip) == condition.train_clips.end()) {
      continue;
    }
    if ((pool == TrainPool::Original && aug) || (pool == TrainPool::Augmented && !aug)) continue;
    rows.train.push_back(r);
  }
  return rows;
}

// ---- metrics -----------------------------------------------------------------

std::size_t EvaluationReport::correct() const {
  std::size_t c = 0;
  for (std::size_t i = 0; i < confusion.size(); ++i) c += confusion[i][i];
  return c;
}

std::vector<std::string> EvaluationReport::flagged_classes() const {
  std::vector<std::string> out;
  for (const auto& m : per_class) {
    if (m.precision_undefined || m.recall_undefined || m.f1_undefined) out.push_back(m.name);
  }
  return out;
}

EvaluationReport evaluate(std::span<const int> predictions, std::span<const int> truths, const LabelEncoding& encoding) {
  if (predictions.size() != truths.size()) {
    throw Error(ErrorCode::LengthMismatch, std::to_string(predictions.size()) + " predictions for " +
                                               std::to_string(truths.size()) + " truths");
  }
  if (truths.empty()) throw Error(ErrorCode::LengthMismatch, "nothing to evaluate");
  const std::size_t k = encoding.size();
  EvaluationReport rep;
  rep.class_names = encoding.names();
  rep.confusion.assign(k, std::vector<std::size_t>(k, 0));
  for (std::size_t i = 0; i < truths.size(); ++i) {
    const int t = truths[i], p = predictions[i];
    if (t < 0 || p < 0 || static_cast<std::size_t>(t) >= k || static_cast<std::size_t>(p) >= k) {
      throw Error(ErrorCode::InvalidArgument, "label index outside the encoding");
    }
    ++rep.confusion[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)];
  }
  rep.total = truths.size();
  rep.accuracy = static_cast<double>(rep.correct()) / static_cast<double>(rep.total);

  const double n = static_cast<double>(rep.total);
  for (std::size_t c = 0; c < k; ++c) {
    ClassMetrics m;
    m.name = rep.class_names[c];
    std::size_t predicted = 0;
    for (std::size_t t = 0; t < k; ++t) predicted += rep.confusion[t][c];
    for (std::size_t p = 0; p < k; ++p) m.support += rep.confusion[c][p];
    const auto tp = static_cast<double>(rep.confusion[c][c]);
    if (predicted == 0) {
      m.precision_undefined = true;
    } else {
      m.precision = tp / static_cast<double>(predicted);
    }
    if (m.support == 0) {
      m.recall_undefined = true;
    } else {
      m.recall = tp / static_cast<double>(m.support);
    }
    if (m.precision + m.recall > 0.0) {
      m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    } else {
      m.f1_undefined = true;
    }
    rep.macro.precision += m.precision / static_cast<double>(k);
    rep.macro.recall += m.recall / static_cast<double>(k);
    rep.macro.f1 += m.f1 / static_cast<double>(k);
    const double w = static_cast<double>(m.support) / n;
    rep.weighted.precision += w * m.precision;
    rep.weighted.recall += w * m.recall;
    rep.weighted.f1 += w * m.f1;
    rep.per_class.push_back(std::move(m));
  }
  rep.macro.name = "macro avg";
  rep.weighted.name = "weighted avg";
  rep.macro.support = rep.weighted.support = rep.total;
  return rep;
}

std::string format_report(const EvaluationReport& rep) {
  std::size_t width = std::string_view("weighted avg").size();
  for (const auto& name : rep.class_names) width = std::max(width, name.size());
  const int w = static_cast<int>(width);
  std::string out;
  char buf[512];
  std::snprintf(buf, sizeof buf, "%*s  %9s %9s %9s %9s\n\n", w, "", "precision", "recall", "f1-score", "support");
  out += buf;
  for (const auto& m : rep.per_class) {
    std::snprintf(buf, sizeof buf, "%*s  %9.2f %9.2f %9.2f %9zu\n", w, m.name.c_str(), m.precision, m.recall, m.f1,
                  m.support);
    out += buf;
  }
  out += "\n";
  std::snprintf(buf, sizeof buf, "%*s  %9s %9s %9.2f %9zu\n", w, "accuracy", "", "", rep.accuracy, rep.total);
  out += buf;
  for (const auto* m : {&rep.macro, &rep.weighted}) {
    std::snprintf(buf, sizeof buf, "%*s  %9.2f %9.2f %9.2f %9zu\n", w, m->name.c_str(), m->precision, m->recall, m->f1,
                  m->support);
    out += buf;
  }
  const auto flagged = rep.flagged_classes();
  if (!flagged.empty()) {
    out += "\nundefined metrics set to 0 for:";
    for (const auto& name : flagged) out += " " + name;
    out += "\n";
  }
  return out;
}

namespace {

json metrics_json(const ClassMetrics& m) {
  json j = {{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}, {"support", m.support}};
  json undefined = json::array();
  if (m.precision_undefined) undefined.push_back("precision");
  if (m.recall_undefined) undefined.push_back("recall");
  if (m.f1_undefined) undefined.push_back("f1");
  if (!undefined.empty()) j["undefined"] = std::move(undefined);
  return j;
}

}  // namespace

json to_json(const EvaluationReport& rep) {
  json per_class = json::object();
  for (const auto& m : rep.per_class) per_class[m.name] = metrics_json(m);
  return {{"classes", rep.class_names},
          {"confusion_matrix", rep.confusion},
          {"per_class", std::move(per_class)},
          {"accuracy", rep.accuracy},
          {"total", rep.total},
          {"macro_avg", metrics_json(rep.macro)},
          {"weighted_avg", metrics_json(rep.weighted)}};
}

// ---- comparison ---------------------------------------------------------------

const ComparisonCell& ComparisonTable::cell(Family family, int condition_id) const {
  for (const auto& c : cells) {
    if (c.family == family && c.condition_id == condition_id) return c;
  }
  throw Error(ErrorCode::InvalidArgument, "no such comparison cell");
}

double ComparisonTable::average(Family family) const {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& c : cells) {
    if (c.family == family && c.ok) {
      sum += c.accuracy;
      ++n;
    }
  }
  return n == 0 ? std::numeric_limits<double>::quiet_NaN() : sum / static_cast<double>(n);
}

std::size_t ComparisonTable::failed_count(Family family) const {
  return static_cast<std::size_t>(
      std::count_if(cells.begin(), cells.end(), [&](const ComparisonCell& c) { return c.family == family && !c.ok; }));
}

ComparisonTable run_comparison(const FeatureMatrix& fm, std::span<const Family> families, const LocvPlan& plan,
                               const ComparisonOptions& options) {
  if (fm.rows() == 0) throw Error(ErrorCode::DegenerateSplit, "feature matrix is empty");
  const LabelEncoding encoding = encode_labels(fm.labels);
  const std::vector<int> y_all = encoding.encode_all(fm.labels);

  ComparisonTable table;
  table.families.assign(families.begin(), families.end());
  table.conditions = plan.conditions;
  for (Family f : families) {
    for (const auto& cond : plan.conditions) {
      ComparisonCell cell;
      cell.family = f;
      cell.condition_id = cond.condition_id;
      cell.test_clip = cond.test_clip;
      table.cells.push_back(std::move(cell));
    }
  }

  // Folds are shared by every family, so split and scale them once.
  struct Fold {
    Matrix x_train, x_test;
    std::vector<int> y_train, y_test;
    std::string error;
  };
  std::vector<Fold> folds(plan.conditions.size());
  for (std::size_t c = 0; c < plan.conditions.size(); ++c) {
    auto& fold = folds[c];
    const auto rows = fold_rows(fm, plan.conditions[c], options.pool);
    if (rows.train.empty() || rows.test.empty()) {
      fold.error = std::string(to_string(ErrorCode::DegenerateSplit)) + ": condition " +
                   std::to_string(plan.conditions[c].condition_id) + " has " + std::to_string(rows.train.size()) +
                   " training and " + std::to_string(rows.test.size()) + " test rows";
      continue;
    }
    fold.x_train = fm.values.select_rows(rows.train);
    fold.x_test = fm.values.select_rows(rows.test);
    for (auto r : rows.train) fold.y_train.push_back(y_all[r]);
    for (auto r : rows.test) fold.y_test.push_back(y_all[r]);
    if (options.standardize) {
      const auto scaler = fit_standardizer(fold.x_train);
      fold.x_train = apply_standardizer(scaler, fold.x_train);
      fold.x_test = apply_standardizer(scaler, fold.x_test);
    }
  }

  const int k = static_cast<int>(encoding.size());
  parallel_for(table.cells.size(), [&](std::size_t i) {
    auto& cell = table.cells[i];
    const auto& fold = folds[i % plan.conditions.size()];
    cell.n_train = fold.y_train.size();
    cell.n_test = fold.y_test.size();
    if (!fold.error.empty()) {
      cell.error = fold.error;
      return;
    }
    try {
      const auto model = train_model(cell.family, fold.x_train, fold.y_train, k, options.params);
      if (const auto* svm = std::get_if<SvmModel>(&model)) cell.converged = svm->converged();
      std::vector<int> pred(fold.y_test.size());
      for (std::size_t r = 0; r < pred.size(); ++r) pred[r] = predict_payload(model, fold.x_test.row(r));
      cell.report = evaluate(pred, fold.y_test, encoding);
      cell.accuracy = cell.report.accuracy;
      cell.ok = true;
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
  });
  return table;
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char ch : text) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::string comparison_csv(const ComparisonTable& table) {
  std::string out = "model,condition,test_clip,accuracy\n";
  for (const auto& c : table.cells) {
    out += std::string(to_string(c.family)) + "," + std::to_string(c.condition_id) + "," + std::to_string(c.test_clip) +
           "," + (c.ok ? format_double(c.accuracy) : csv_field("failed:" + c.error)) + "\n";
  }
  for (Family f : table.families) {
    const double avg = table.average(f);
    out += std::string(to_string(f)) + ",average,," + (std::isnan(avg) ? std::string("failed") : format_double(avg)) +
           "\n";
  }
  return out;
}

// ---- importance ---------------------------------------------------------------

std::span<const std::size_t> default_top_k() {
  static constexpr std::size_t kTopK[] = {10, 20, 30, 40};
  return kTopK;
}

ImportanceReport feature_importance(const RandomForest& forest, std::span<const std::size_t> top_k) {
  if (forest.trees.empty() || forest.n_features == 0) {
    throw Error(ErrorCode::UntrainedModel, "feature importance needs a trained forest");
  }
  if (top_k.empty()) top_k = default_top_k();
  const std::size_t d = forest.n_features;
  ImportanceReport rep;
  rep.importances.assign(d, 0.0);
  for (const auto& tree : forest.trees) {
    const auto dec = impurity_decrease(tree);
    for (std::size_t j = 0; j < d; ++j) rep.importances[j] += dec[j] / static_cast<double>(forest.trees.size());
  }
  const double total = std::accumulate(rep.importances.begin(), rep.importances.end(), 0.0);
  if (total > 0.0) {
    for (auto& v : rep.importances) v /= total;
  } else {
    rep.uniform_fallback = true;
    std::fill(rep.importances.begin(), rep.importances.end(), 1.0 / static_cast<double>(d));
  }
  rep.order.resize(d);
  std::iota(rep.order.begin(), rep.order.end(), 0);
  std::stable_sort(rep.order.begin(), rep.order.end(),
                   [&](std::size_t a, std::size_t b) { return rep.importances[a] > rep.importances[b]; });
  for (std::size_t k : top_k) {
    const std::size_t upto = std::min(k, d);
    double sum = 0.0;
    for (std::size_t i = 0; i < upto; ++i) sum += rep.importances[rep.order[i]];
    rep.cumulative.emplace_back(k, std::min(sum, 1.0));
  }
  return rep;
}

std::string importance_csv(const ImportanceReport& rep, std::span<const std::string> names) {
  std::string out = "rank,feature_index,feature,importance,cumulative\n";
  double running = 0.0;
  for (std::size_t i = 0; i < rep.order.size(); ++i) {
    const std::size_t j = rep.order[i];
    running += rep.importances[j];
    const std::string name = j < names.size() ? names[j] : "f" + std::to_string(j);
    out += std::to_string(i + 1) + "," + std::to_string(j) + "," + csv_field(name) + "," +
           format_double(rep.importances[j]) + "," + format_double(running) + "\n";
  }
  return out;
}

// ---- embedding ------------------------------------------------------------------

Embedding embed_2d(const Matrix& x) {
  if (x.rows < 2 || x.cols < 2) throw Error(ErrorCode::DegenerateData, "embedding needs at least 2 rows and 2 columns");
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
      x.data.data(), static_cast<Eigen::Index>(x.rows), static_cast<Eigen::Index>(x.cols));
  const Eigen::MatrixXd centered = m.rowwise() - m.colwise().mean();
  const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(x.rows - 1);
  const double total = cov.trace();
  if (!(total > 0.0)) throw Error(ErrorCode::DegenerateData, "every column has zero variance");

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success) throw Error(ErrorCode::DegenerateData, "eigendecomposition failed");
  // Eigenvalues come back ascending.
  const Eigen::Index d = cov.rows();
  Eigen::MatrixXd basis(d, 2);
  Embedding out;
  for (int c = 0; c < 2; ++c) {
    Eigen::VectorXd v = eig.eigenvectors().col(d - 1 - c);
    Eigen::Index arg = 0;
    for (Eigen::Index i = 1; i < d; ++i) {
      if (std::abs(v(i)) > std::abs(v(arg))) arg = i;
    }
    if (v(arg) < 0) v = -v;
    basis.col(c) = v;
    out.explained_variance.push_back(std::max(0.0, eig.eigenvalues()(d - 1 - c)));
  }
  out.total_variance = total;
  const Eigen::MatrixXd proj = centered * basis;
  out.coords = Matrix(x.rows, 2);
  for (std::size_t r = 0; r < x.rows; ++r) {
    out.coords(r, 0) = proj(static_cast<Eigen::Index>(r), 0);
    out.coords(r, 1) = proj(static_cast<Eigen::Index>(r), 1);
  }
  return out;
}

std::string embedding_csv(const FeatureMatrix& fm, const Embedding& e) {
  if (e.coords.rows != fm.rows()) throw Error(ErrorCode::LengthMismatch, "embedding and feature rows differ");
  std::string out = "instance_id,clip_id,label,x,y\n";
  for (std::size_t r = 0; r < fm.rows(); ++r) {
    out += csv_field(fm.instance_ids[r]) + "," + std::to_string(fm.groups[r]) + "," + csv_field(fm.labels[r]) + "," +
           format_double(e.coords(r, 0)) + "," + format_double(e.coords(r, 1)) + "\n";
  }
  return out;
}

// ---- plot data -------------------------------------------------------------------

std::string boxplot_csv(std::span<const SweepResult> sweep) {
  std::string out = "n_mfcc,model,condition,accuracy\n";
  for (const auto& s : sweep) {
    for (const auto& c : s.table.cells) {
      if (!c.ok) continue;
      out += std::to_string(s.n_mfcc) + "," + std::string(to_string(c.family)) + "," + std::to_string(c.condition_id) +
             "," + format_double(c.accuracy) + "\n";
    }
  }
  return out;
}

std::string bar_csv(std::span<const SweepResult> sweep) {
  std::string out = "n_mfcc,model,average_accuracy\n";
  for (const auto& s : sweep) {
    for (Family f : s.table.families) {
      const double avg = s.table.average(f);
      out += std::to_string(s.n_mfcc) + "," + std::string(to_string(f)) + "," +
             (std::isnan(avg) ? std::string("failed") : format_double(avg)) + "\n";
    }
  }
  return out;
}

namespace {

// Linear-interpolated quantile of sorted values.
double quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - static_cast<double>(lo));
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

constexpr double kPlotW = 640, kPlotH = 400, kLeft = 60, kRight = 20, kTop = 40, kBottom = 60;

double y_of(double acc) { return kTop + (1.0 - acc) * (kPlotH - kTop - kBottom); }

std::string svg_frame(const std::string& title) {
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kPlotW) + "\" height=\"" + fmt(kPlotH) +
                  "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + fmt(kPlotW / 2) + "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" + title + "</text>\n";
  for (int t = 0; t <= 5; ++t) {
    const double acc = t / 5.0;
    const double y = y_of(acc);
    s += "<line x1=\"" + fmt(kLeft) + "\" x2=\"" + fmt(kPlotW - kRight) + "\" y1=\"" + fmt(y) + "\" y2=\"" + fmt(y) +
         "\" stroke=\"#ddd\"/>\n";
    s += "<text x=\"" + fmt(kLeft - 6) + "\" y=\"" + fmt(y + 4) + "\" text-anchor=\"end\">" + fmt(acc) + "</text>\n";
  }
  return s;
}

}  // namespace

std::string boxplot_svg(std::span<const SweepResult> sweep) {
  std::string s = svg_frame("LOCV accuracy by MFCC count");
  const double slot = (kPlotW - kLeft - kRight) / static_cast<double>(std::max<std::size_t>(sweep.size(), 1));
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    std::vector<double> acc;
    for (const auto& c : sweep[i].table.cells) {
      if (c.ok) acc.push_back(c.accuracy);
    }
    const double cx = kLeft + slot * (static_cast<double>(i) + 0.5);
    s += "<text x=\"" + fmt(cx) + "\" y=\"" + fmt(kPlotH - kBottom + 20) + "\" text-anchor=\"middle\">" +
         std::to_string(sweep[i].n_mfcc) + " MFCC</text>\n";
    if (acc.empty()) continue;
    std::sort(acc.begin(), acc.end());
    const double q1 = quantile(acc, 0.25), med = quantile(acc, 0.5), q3 = quantile(acc, 0.75);
    const double half = slot * 0.2;
    s += "<line x1=\"" + fmt(cx) + "\" x2=\"" + fmt(cx) + "\" y1=\"" + fmt(y_of(acc.front())) + "\" y2=\"" +
         fmt(y_of(acc.back())) + "\" stroke=\"black\"/>\n";
    s += "<rect x=\"" + fmt(cx - half) + "\" y=\"" + fmt(y_of(q3)) + "\" width=\"" + fmt(2 * half) + "\" height=\"" +
         fmt(y_of(q1) - y_of(q3)) + "\" fill=\"#9ecae1\" stroke=\"black\"/>\n";
    s += "<line x1=\"" + fmt(cx - half) + "\" x2=\"" + fmt(cx + half) + "\" y1=\"" + fmt(y_of(med)) + "\" y2=\"" +
         fmt(y_of(med)) + "\" stroke=\"black\" stroke-width=\"2\"/>\n";
  }
  s += "</svg>\n";
  return s;
}

std::string bar_svg(std::span<const SweepResult> sweep) {
  static const char* kColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd"};
  std::string s = svg_frame("Average LOCV accuracy");
  const double slot = (kPlotW - kLeft - kRight) / static_cast<double>(std::max<std::size_t>(sweep.size(), 1));
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    const auto& fams = sweep[i].table.families;
    const double x0 = kLeft + slot * static_cast<double>(i) + slot * 0.1;
    const double bw = slot * 0.8 / static_cast<double>(std::max<std::size_t>(fams.size(), 1));
    for (std::size_t f = 0; f < fams.size(); ++f) {
      const double avg = sweep[i].table.average(fams[f]);
      if (std::isnan(avg)) continue;
      s += "<rect x=\"" + fmt(x0 + bw * static_cast<double>(f)) + "\" y=\"" + fmt(y_of(avg)) + "\" width=\"" +
           fmt(bw * 0.9) + "\" height=\"" + fmt(y_of(0.0) - y_of(avg)) + "\" fill=\"" +
           kColors[static_cast<std::size_t>(fams[f]) % 5] + "\"><title>" + std::string(display_name(fams[f])) + " " +
           fmt(avg) + "</title></rect>\n";
    }
    s += "<text x=\"" + fmt(kLeft + slot * (static_cast<double>(i) + 0.5)) + "\" y=\"" +
         fmt(kPlotH - kBottom + 20) + "\" text-anchor=\"middle\">" + std::to_string(sweep[i].n_mfcc) +
         " MFCC</text>\n";
  }
  const auto& fams = sweep.empty() ? all_families() : sweep.front().table.families;
  for (std::size_t f = 0; f < fams.size(); ++f) {
    const double x = kLeft + 110.0 * static_cast<double>(f);
    s += "<rect x=\"" + fmt(x) + "\" y=\"" + fmt(kPlotH - 22) + "\" width=\"10\" height=\"10\" fill=\"" +
         kColors[static_cast<std::size_t>(fams[f]) % 5] + "\"/>\n";
    s += "<text x=\"" + fmt(x + 14) + "\" y=\"" + fmt(kPlotH - 13) + "\">" + std::string(display_name(fams[f])) +
         "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

}  // namespace chitin
