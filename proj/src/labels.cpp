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

#include "chitin/labels.hpp"

#include <algorithm>

#include "chitin/error.hpp"

namespace chitin {

LabelEncoding::LabelEncoding(std::span<const std::string> names) : names_(names.begin(), names.end()) {
  std::sort(names_.begin(), names_.end());
  names_.erase(std::unique(names_.begin(), names_.end()), names_.end());
  if (names_.empty()) throw Error(ErrorCode::InvalidArgument, "label encoding needs at least one class");
}

int LabelEncoding::encode(std::string_view name) const {
  auto it = std::lower_bound(names_.begin(), names_.end(), name);
  if (it == names_.end() || *it != name) throw Error(ErrorCode::InvalidArgument, "unknown class '" + std::string(name) + "'");
  return static_cast<int>(it - names_.begin());
}

const std::string& LabelEncoding::decode(int index) const {
  if (index < 0 || static_cast<std::size_t>(index) >= names_.size()) {
    throw Error(ErrorCode::InvalidArgument, "class index " + std::to_string(index) + " out of range");
  }
  return names_[static_cast<std::size_t>(index)];
}

bool LabelEncoding::contains(std::string_view name) const {
  return std::binary_search(names_.begin(), names_.end(), name);
}

std::vector<int> LabelEncoding::encode_all(std::span<const std::string> names) const {
  std::vector<int> out;
  out.reserve(names.size());
  for (const auto& n : names) out.push_back(encode(n));
  return out;
}

LabelEncoding encode_labels(std::span<const std::string> names) { return LabelEncoding(names); }

}  // namespace chitin
