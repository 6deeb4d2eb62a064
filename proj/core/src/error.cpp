// Copyright 2026 The ASC Toolkit Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "asc/error.hpp"

namespace asc {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedHeader: return "MalformedHeader";
    case ErrorCode::kUnsupportedEncoding: return "UnsupportedEncoding";
    case ErrorCode::kEmptyAudio: return "EmptyAudio";
    case ErrorCode::kClipTooShort: return "ClipTooShort";
    case ErrorCode::kInvalidBandRange: return "InvalidBandRange";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kNyquistExceeded: return "NyquistExceeded";
    case ErrorCode::kTooFewFrames: return "TooFewFrames";
    case ErrorCode::kCropWiderThanInput: return "CropWiderThanInput";
    case ErrorCode::kMaskLongerThanAxis: return "MaskLongerThanAxis";
    case ErrorCode::kBatchTooSmall: return "BatchTooSmall";
    case ErrorCode::kConfigMismatch: return "ConfigMismatch";
    case ErrorCode::kUnknownVariant: return "UnknownVariant";
    case ErrorCode::kWeightsNotLoaded: return "WeightsNotLoaded";
    case ErrorCode::kNonPositivePrediction: return "NonPositivePrediction";
    case ErrorCode::kEpochOutOfRange: return "EpochOutOfRange";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kIOFailure: return "IOFailure";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kValidationError: return "ValidationError";
  }
  return "Unknown";
}

}  // namespace asc
