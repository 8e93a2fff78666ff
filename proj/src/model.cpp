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

#include "chitin/model.hpp"

#include <algorithm>
#include <array>

#include "chitin/error.hpp"
#include "chitin/fileio.hpp"

namespace chitin {

using nlohmann::json;

namespace {

struct FamilyInfo {
  Family family;
  std::string_view tag;
  std::string_view display;
};

constexpr std::array<FamilyInfo, 5> kFamilies{{
    {Family::DecisionTree, "decision_tree", "Decision Tree"},
    {Family::RandomForest, "random_forest", "Random Forest"},
    {Family::Xgboost, "xgboost", "XGBoost"},
    {Family::Knn, "knn", "KNN"},
    {Family::SvmRbf, "svm_rbf", "SVM (RBF)"},
}};

const FamilyInfo& info(Family f) {
  for (const auto& i : kFamilies) {
    if (i.family == f) return i;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown model family");
}

}  // namespace

std::string_view to_string(Family f) { return info(f).tag; }
std::string_view display_name(Family f) { return info(f).display; }

Family parse_family(std::string_view tag) {
  for (const auto& i : kFamilies) {
    if (i.tag == tag) return i.family;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown model family '" + std::string(tag) +
                                              "' (expected decision_tree, random_forest, xgboost, knn, svm_rbf)");
}

const std::vector<Family>& all_families() {
  static const std::vector<Family> families = [] {
    std::vector<Family> out;
    for (const auto& i : kFamilies) out.push_back(i.family);
    return out;
  }();
  return families;
}

std::vector<Family> parse_families(std::string_view text) {
  if (text == "all") return all_families();
  std::vector<bool> wanted(kFamilies.size(), false);
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto piece = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    if (!piece.empty()) wanted[static_cast<std::size_t>(parse_family(piece))] = true;
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  std::vector<Family> out;
  for (std::size_t i = 0; i < kFamilies.size(); ++i) {
    if (wanted[i]) out.push_back(kFamilies[i].family);
  }
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "no model families selected");
  return out;
}

void ModelParams::set_seed(std::uint64_t seed) {
  tree.seed = seed;
  forest.base_seed = seed;
}

Family family_of(const ModelPayload& payload) { return static_cast<Family>(payload.index()); }

ModelPayload train_model(Family family, const Matrix& x, std::span<const int> y, int n_classes,
                         const ModelParams& params) {
  switch (family) {
    case Family::DecisionTree: return train_decision_tree(x, y, n_classes, params.tree);
    case Family::RandomForest: return train_random_forest(x, y, n_classes, params.forest);
    case Family::Xgboost: return train_gbt(x, y, n_classes, params.gbt);
    case Family::Knn: return fit_knn(x, y, n_classes, params.knn_k);
    case Family::SvmRbf: return train_svm_rbf(x, y, n_classes, params.svm);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown model family");
}

int predict_payload(const ModelPayload& payload, std::span<const double> x) {
  return std::visit([&](const auto& m) { return m.predict(x); }, payload);
}

std::size_t ModelArtifact::n_features() const {
  return std::visit(
      [](const auto& m) -> std::size_t {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, KnnModel>) {
          return m.train.cols;
        } else {
          return m.n_features;
        }
      },
      payload);
}

int ModelArtifact::predict(std::span<const double> features) const {
  const std::size_t width = standardizer ? standardizer->width() : n_features();
  if (features.size() != width) {
    throw Error(ErrorCode::ShapeMismatch, "model expects " + std::to_string(width) + " features, got " +
                                              std::to_string(features.size()));
  }
  if (!standardizer) return predict_payload(payload, features);
  std::vector<double> scaled(features.size());
  standardizer->apply_row(features, scaled);
  return predict_payload(payload, scaled);
}

std::string ModelArtifact::predict_label(std::span<const double> features) const {
  return labels.decode(predict(features));
}

std::vector<int> ModelArtifact::predict_all(const Matrix& features) const {
  std::vector<int> out(features.rows);
  for (std::size_t i = 0; i < features.rows; ++i) out[i] = predict(features.row(i));
  return out;
}

// ---- serialization ----------------------------------------------------------

namespace {

[[noreturn]] void schema_fail(const std::string& what) { throw Error(ErrorCode::SchemaViolation, what); }

json matrix_to_json(const Matrix& m) { return {{"rows", m.rows}, {"cols", m.cols}, {"data", m.data}}; }

Matrix matrix_from_json(const json& j) {
  Matrix m;
  m.rows = j.at("rows").get<std::size_t>();
  m.cols = j.at("cols").get<std::size_t>();
  m.data = j.at("data").get<std::vector<double>>();
  if (m.data.size() != m.rows * m.cols) schema_fail("matrix data length does not match its shape");
  return m;
}

json tree_node_to_json(const DecisionTree& tree, std::size_t i) {
  const auto& n = tree.nodes[i];
  json j = {{"class_counts", n.class_counts}, {"predicted", n.predicted}, {"impurity", n.impurity}};
  if (!n.is_leaf()) {
    j["feature"] = n.feature;
    j["threshold"] = n.threshold;
    j["left"] = tree_node_to_json(tree, static_cast<std::size_t>(n.left));
    j["right"] = tree_node_to_json(tree, static_cast<std::size_t>(n.right));
  }
  return j;
}

// Rebuilds in preorder, which is the order the grower emits nodes in.
int tree_node_from_json(const json& j, DecisionTree& tree) {
  TreeNode node;
  node.class_counts = j.at("class_counts").get<std::vector<double>>();
  node.predicted = j.at("predicted").get<int>();
  node.impurity = j.at("impurity").get<double>();
  if (node.class_counts.size() != static_cast<std::size_t>(tree.n_classes)) schema_fail("tree node class count");
  const int index = static_cast<int>(tree.nodes.size());
  tree.nodes.push_back(node);
  if (j.contains("feature")) {
    const int feature = j.at("feature").get<int>();
    if (feature < 0 || static_cast<std::size_t>(feature) >= tree.n_features) schema_fail("tree split feature out of range");
    const double threshold = j.at("threshold").get<double>();
    const int l = tree_node_from_json(j.at("left"), tree);
    const int r = tree_node_from_json(j.at("right"), tree);
    auto& stored = tree.nodes[static_cast<std::size_t>(index)];
    stored.feature = feature;
    stored.threshold = threshold;
    stored.left = l;
    stored.right = r;
  }
  return index;
}

json tree_to_json(const DecisionTree& t) {
  json j = {{"n_classes", t.n_classes}, {"n_features", t.n_features}};
  j["root"] = t.nodes.empty() ? json(nullptr) : tree_node_to_json(t, 0);
  return j;
}

DecisionTree tree_from_json(const json& j) {
  DecisionTree t;
  t.n_classes = j.at("n_classes").get<int>();
  t.n_features = j.at("n_features").get<std::size_t>();
  if (!j.at("root").is_null()) tree_node_from_json(j.at("root"), t);
  return t;
}

json reg_node_to_json(const RegressionTree& t, std::size_t i) {
  const auto& n = t.nodes[i];
  if (n.is_leaf()) return {{"value", n.value}};
  return {{"feature", n.feature},
          {"threshold", n.threshold},
          {"value", n.value},
          {"left", reg_node_to_json(t, static_cast<std::size_t>(n.left))},
          {"right", reg_node_to_json(t, static_cast<std::size_t>(n.right))}};
}

int reg_node_from_json(const json& j, RegressionTree& t, std::size_t n_features) {
  RegressionNode node;
  node.value = j.at("value").get<double>();
  const int index = static_cast<int>(t.nodes.size());
  t.nodes.push_back(node);
  if (j.contains("feature")) {
    const int feature = j.at("feature").get<int>();
    if (feature < 0 || static_cast<std::size_t>(feature) >= n_features) schema_fail("gbt split feature out of range");
    const double threshold = j.at("threshold").get<double>();
    const int l = reg_node_from_json(j.at("left"), t, n_features);
    const int r = reg_node_from_json(j.at("right"), t, n_features);
    auto& stored = t.nodes[static_cast<std::size_t>(index)];
    stored.feature = feature;
    stored.threshold = threshold;
    stored.left = l;
    stored.right = r;
  }
  return index;
}

json to_json_payload(const DecisionTree& t) { return tree_to_json(t); }

json to_json_payload(const RandomForest& f) {
  json trees = json::array();
  for (const auto& t : f.trees) trees.push_back(tree_to_json(t));
  return {{"n_classes", f.n_classes}, {"n_features", f.n_features}, {"trees", std::move(trees)}};
}

json to_json_payload(const GbtModel& g) {
  json rounds = json::array();
  for (const auto& round : g.rounds) {
    json per_class = json::array();
    for (const auto& t : round) per_class.push_back(t.nodes.empty() ? json(nullptr) : reg_node_to_json(t, 0));
    rounds.push_back(std::move(per_class));
  }
  return {{"n_classes", g.n_classes},
          {"n_features", g.n_features},
          {"train_loss", g.train_loss},
          {"rounds", std::move(rounds)}};
}

json to_json_payload(const KnnModel& k) {
  return {{"k", k.k}, {"n_classes", k.n_classes}, {"labels", k.labels}, {"train", matrix_to_json(k.train)}};
}

json to_json_payload(const SvmModel& s) {
  json machines = json::array();
  for (const auto& m : s.machines) {
    machines.push_back({{"support_vectors", matrix_to_json(m.support_vectors)},
                        {"alpha", m.alpha},
                        {"coef", m.coef},
                        {"bias", m.bias},
                        {"converged", m.converged},
                        {"iterations", m.iterations}});
  }
  return {{"gamma", s.gamma}, {"c", s.c}, {"n_features", s.n_features}, {"machines", std::move(machines)}};
}

}  // namespace

json payload_to_json(const ModelPayload& payload) {
  return std::visit([](const auto& m) { return to_json_payload(m); }, payload);
}

ModelPayload payload_from_json(Family family, const json& j) {
  try {
    switch (family) {
      case Family::DecisionTree: return tree_from_json(j);
      case Family::RandomForest: {
        RandomForest f;
        f.n_classes = j.at("n_classes").get<int>();
        f.n_features = j.at("n_features").get<std::size_t>();
        for (const auto& t : j.at("trees")) f.trees.push_back(tree_from_json(t));
        return f;
      }
      case Family::Xgboost: {
        GbtModel g;
        g.n_classes = j.at("n_classes").get<int>();
        g.n_features = j.at("n_features").get<std::size_t>();
        g.train_loss = j.at("train_loss").get<std::vector<double>>();
        for (const auto& round : j.at("rounds")) {
          std::vector<RegressionTree> trees;
          for (const auto& t : round) {
            RegressionTree tree;
            if (!t.is_null()) reg_node_from_json(t, tree, g.n_features);
            trees.push_back(std::move(tree));
          }
          if (trees.size() != static_cast<std::size_t>(g.n_classes)) schema_fail("gbt round has wrong tree count");
          g.rounds.push_back(std::move(trees));
        }
        return g;
      }
      case Family::Knn: {
        KnnModel k;
        k.k = j.at("k").get<int>();
        k.n_classes = j.at("n_classes").get<int>();
        k.labels = j.at("labels").get<std::vector<int>>();
        k.train = matrix_from_json(j.at("train"));
        if (k.labels.size() != k.train.rows) schema_fail("knn labels do not match stored rows");
        return k;
      }
      case Family::SvmRbf: {
        SvmModel s;
        s.gamma = j.at("gamma").get<double>();
        s.c = j.at("c").get<double>();
        s.n_features = j.at("n_features").get<std::size_t>();
        for (const auto& m : j.at("machines")) {
          BinarySvm b;
          b.support_vectors = matrix_from_json(m.at("support_vectors"));
          b.alpha = m.at("alpha").get<std::vector<double>>();
          b.coef = m.at("coef").get<std::vector<double>>();
          b.bias = m.at("bias").get<double>();
          b.converged = m.at("converged").get<bool>();
          b.iterations = m.at("iterations").get<int>();
          if (b.coef.size() != b.support_vectors.rows || b.alpha.size() != b.coef.size()) {
            schema_fail("svm coefficients do not match support vectors");
          }
          s.machines.push_back(std::move(b));
        }
        return s;
      }
    }
  } catch (const json::exception& e) {
    schema_fail(std::string("model payload: ") + e.what());
  }
  schema_fail("unknown model family");
}

json artifact_to_json(const ModelArtifact& a) {
  json j;
  j["schema_version"] = a.schema_version;
  j["family"] = std::string(to_string(a.family()));
  j["label_encoding"] = a.labels.names();
  j["standardizer"] = a.standardizer ? to_json(*a.standardizer) : json(nullptr);
  j["mfcc_config"] = to_json(a.mfcc);
  j["provenance"] = a.provenance;
  j["payload"] = payload_to_json(a.payload);
  return j;
}

ModelArtifact artifact_from_json(const json& j) {
  if (!j.is_object()) schema_fail("model file is not a JSON object");
  if (!j.contains("schema_version") || !j["schema_version"].is_number_integer()) {
    schema_fail("model file has no integer schema_version");
  }
  const int version = j["schema_version"].get<int>();
  if (version != kModelSchemaVersion) {
    throw Error(ErrorCode::VersionMismatch, "model schema_version " + std::to_string(version) +
                                                " is not supported (expected " +
                                                std::to_string(kModelSchemaVersion) + ")");
  }
  try {
    ModelArtifact a;
    a.schema_version = version;
    const Family family = parse_family(j.at("family").get<std::string>());
    const auto names = j.at("label_encoding").get<std::vector<std::string>>();
    a.labels = LabelEncoding(names);
    if (a.labels.names() != names) schema_fail("label_encoding must be sorted and distinct");
    if (!j.at("standardizer").is_null()) a.standardizer = standardizer_from_json(j.at("standardizer"));
    a.mfcc = mfcc_config_from_json(j.at("mfcc_config"));
    if (j.contains("provenance")) a.provenance = j.at("provenance");
    a.payload = payload_from_json(family, j.at("payload"));
    return a;
  } catch (const json::exception& e) {
    schema_fail(std::string("model file: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidArgument) schema_fail(e.what());
    throw;
  }
}

void save_model(const ModelArtifact& artifact, const std::filesystem::path& path) {
  write_file_atomic(path, artifact_to_json(artifact).dump(1) + "\n");
}

ModelArtifact load_model(const std::filesystem::path& path) {
  const std::string text = read_file_text(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    schema_fail(path.string() + ": " + e.what());
  }
  return artifact_from_json(j);
}

}  // namespace chitin
