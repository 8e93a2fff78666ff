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

#include <cstddef>
#include <functional>

namespace chitin {

/// Worker cap: CHITIN_THREADS if set (0 = hardware concurrency), otherwise
/// hardware concurrency. Always >= 1.
std::size_t worker_count();

/// Overrides the worker cap for the current process (0 restores the
/// environment/hardware default). Used by tests that compare serial and
/// parallel runs.
void set_worker_count(std::size_t n);

/// Runs body(i) for i in [0, n). Work items are claimed dynamically, so
/// bodies must write only to slots owned by their index. Nested calls run
/// serially on the calling worker. The first exception thrown by any body is
/// rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace chitin
