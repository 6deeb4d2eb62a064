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

#include "asc/audio/segment.hpp"

#include "asc/error.hpp"

namespace asc::audio {

std::vector<AudioClip> segment_10s(const AudioClip& clip) {
  if (clip.sample_rate != kPipelineRate) {
    fail(ErrorCode::kValidationError, "segmentation expects a 32 kHz clip");
  }
  if (clip.samples.size() < kSegmentSamples) {
    fail(ErrorCode::kClipTooShort, "clip shorter than one 10 s segment");
  }
  const std::size_t count = clip.samples.size() / kSegmentSamples;
  std::vector<AudioClip> segments;
  segments.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    AudioClip seg;
    seg.sample_rate = clip.sample_rate;
    seg.scene_label = clip.scene_label;
    seg.device_id = clip.device_id;
    const auto first = clip.samples.begin() + static_cast<std::ptrdiff_t>(s * kSegmentSamples);
    seg.samples.assign(first, first + static_cast<std::ptrdiff_t>(kSegmentSamples));
    segments.push_back(std::move(seg));
  }
  return segments;
}

}  // namespace asc::audio
