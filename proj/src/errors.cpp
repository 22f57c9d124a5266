// Copyright 2026 The fidelity-lab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fidlab/errors.hpp"

namespace fidlab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotHermitian: return "NotHermitian";
    case ErrorCode::kNotUnitary: return "NotUnitary";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kNormDrift: return "NormDrift";
    case ErrorCode::kDimMismatch: return "DimMismatch";
    case ErrorCode::kInvalidSpin: return "InvalidSpin";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kEmptyList: return "EmptyList";
    case ErrorCode::kWindowTooSmall: return "WindowTooSmall";
    case ErrorCode::kCurveTooShort: return "CurveTooShort";
    case ErrorCode::kTooFewLevels: return "TooFewLevels";
    case ErrorCode::kFitDiverged: return "FitDiverged";
    case ErrorCode::kConfig: return "ConfigError";
    case ErrorCode::kIo: return "IoError";
  }
  return "Unknown";
}

}  // namespace fidlab
