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

#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace asc::audio {

inline constexpr int kPipelineRate = 32000;
inline constexpr std::size_t kSegmentSeconds = 10;
inline constexpr std::size_t kSegmentSamples = kSegmentSeconds * kPipelineRate;
inline constexpr int kNumScenes = 10;

/// Mono PCM audio scaled to [-1, 1] with its labels.
struct AudioClip {
  std::vector<float> samples;
  int sample_rate = kPipelineRate;
  int scene_label = 0;
  std::string device_id = "A";

  std::size_t size() const noexcept { return samples.size(); }
  double duration_seconds() const noexcept {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

/// Throws kEmptyAudio / kValidationError when the clip violates its invariants
/// (non-empty, finite samples, positive rate, label in [0, 10)).
void validate(const AudioClip& clip);

}  // namespace asc::audio
