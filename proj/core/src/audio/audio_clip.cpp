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

#include "asc/audio/audio_clip.hpp"

#include <cmath>

#include "asc/error.hpp"

namespace asc::audio {

void validate(const AudioClip& clip) {
  if (clip.samples.empty()) fail(ErrorCode::kEmptyAudio, "clip has no samples");
  if (clip.sample_rate <= 0) fail(ErrorCode::kValidationError, "sample rate must be positive");
  if (clip.scene_label < 0 || clip.scene_label >= kNumScenes) {
    fail(ErrorCode::kValidationError, "scene label out of range");
  }
  for (float s : clip.samples) {
    if (!std::isfinite(s)) fail(ErrorCode::kValidationError, "non-finite sample");
  }
}

}  // namespace asc::audio
