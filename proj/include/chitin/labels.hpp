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

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace chitin {

/// Bijection between class names and indices 0..k-1 in lexicographic order.
class LabelEncoding {
 public:
  LabelEncoding() = default;
  explicit LabelEncoding(std::span<const std::string> names);

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }

  /// Throws InvalidArgument for an unknown name.
  int encode(std::string_view name) const;
  const std::string& decode(int index) const;
  bool contains(std::string_view name) const;

  std::vector<int> encode_all(std::span<const std::string> names) const;

  bool operator==(const LabelEncoding&) const = default;

 private:
  std::vector<std::string> names_;
};

/// Sorted distinct names; duplicates in the input are collapsed.
LabelEncoding encode_labels(std::span<const std::string> names);

}  // namespace chitin
