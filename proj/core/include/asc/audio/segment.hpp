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

/// Cuts consecutive non-overlapping 10 s windows from a 32 kHz clip. The
/// trailing remainder is dropped. Throws kClipTooShort below one window.
std::vector<AudioClip> segment_10s(const AudioClip& clip);

}  // namespace asc::audio
