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

#include "chitin/error.hpp"

namespace chitin {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::UnsupportedEncoding: return "UnsupportedEncoding";
    case ErrorCode::TruncatedPayload: return "TruncatedPayload";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::EmptyClass: return "EmptyClass";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::DanglingInstanceReference: return "DanglingInstanceReference";
    case ErrorCode::ClipTooShort: return "ClipTooShort";
    case ErrorCode::WidthMismatch: return "WidthMismatch";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::DegenerateOutput: return "DegenerateOutput";
    case ErrorCode::EmptyNode: return "EmptyNode";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::UntrainedModel: return "UntrainedModel";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::DegenerateSplit: return "DegenerateSplit";
    case ErrorCode::TooFewClips: return "TooFewClips";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::DegenerateData: return "DegenerateData";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace chitin
