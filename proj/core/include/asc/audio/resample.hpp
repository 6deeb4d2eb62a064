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

#include <vector>

#include "asc/audio/audio_clip.hpp"

namespace asc::audio {

struct ResamplerConfig {
  int taps_per_phase = 64;
  double kaiser_beta = 8.6;
  /// Cutoff as a fraction of the lower of the two Nyquist rates.
  double rolloff = 0.95;
};

/// Polyphase windowed-sinc (Kaiser) resampler for rational ratios.
/// Output length is round(n * target / source). Identity when rates match.
AudioClip resample(const AudioClip& clip, int target_rate, const ResamplerConfig& cfg = {});

inline AudioClip resample_to_32k(const AudioClip& clip) {
  return resample(clip, kPipelineRate);
}

}  // namespace asc::audio
