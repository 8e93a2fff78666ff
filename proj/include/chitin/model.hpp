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

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "chitin/features.hpp"
#include "chitin/forest.hpp"
#include "chitin/gbt.hpp"
#include "chitin/knn.hpp"
#include "chitin/labels.hpp"
#include "chitin/matrix.hpp"
#include "chitin/svm.hpp"
#include "chitin/tree.hpp"

namespace chitin {

enum class Family { DecisionTree, RandomForest, Xgboost, Knn, SvmRbf };

/// decision_tree, random_forest, xgboost, knn, svm_rbf
std::string_view to_string(Family f);
/// Human-readable name for reports ("Decision Tree", ...).
std::string_view display_name(Family f);
/// Throws InvalidArgument for an unknown tag.
Family parse_family(std::string_view tag);
/// Parses "all" or a comma-separated list of tags; keeps the canonical order.
std::vector<Family> parse_families(std::string_view text);
const std::vector<Family>& all_families();

struct ModelParams {
  TreeParams tree;
  ForestParams forest;
  int knn_k = 5;
  GbtParams gbt;
  SvmParams svm;

  /// Points every stochastic component at the same seed.
  void set_seed(std::uint64_t seed);
};

using ModelPayload = std::variant<DecisionTree, RandomForest, GbtModel, KnnModel, SvmModel>;

Family family_of(const ModelPayload& payload);

/// Trains a classifier on already-standardized rows with encoded labels.
ModelPayload train_model(Family family, const Matrix& x, std::span<const int> y, int n_classes,
                         const ModelParams& params = {});

int predict_payload(const ModelPayload& payload, std::span<const double> x);

inline constexpr int kModelSchemaVersion = 1;

struct ModelArtifact {
  int schema_version = kModelSchemaVersion;
  ModelPayload payload;
  LabelEncoding labels;
  std::optional<Standardizer> standardizer;
  MfccConfig mfcc;
  nlohmann::json provenance = nlohmann::json::object();

  Family family() const { return family_of(payload); }
  std::size_t n_features() const;

  /// Raw feature row in, class index out. The standardizer (if any) is
  /// applied first. Throws ShapeMismatch on a row of the wrong width.
  int predict(std::span<const double> features) const;
  std::string predict_label(std::span<const double> features) const;
  std::vector<int> predict_all(const Matrix& features) const;
};

nlohmann::json payload_to_json(const ModelPayload& payload);
ModelPayload payload_from_json(Family family, const nlohmann::json& j);

nlohmann::json artifact_to_json(const ModelArtifact& artifact);
/// Throws VersionMismatch on an unknown schema_version and SchemaViolation
/// on a structurally invalid document.
ModelArtifact artifact_from_json(const nlohmann::json& j);

void save_model(const ModelArtifact& artifact, const std::filesystem::path& path);
ModelArtifact load_model(const std::filesystem::path& path);

}  // namespace chitin
