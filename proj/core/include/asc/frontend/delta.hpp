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

#include "asc/frontend/spectrogram.hpp"

namespace asc::frontend {

inline constexpr std::size_t kDeltaWidth = 9;
inline constexpr std::size_t kTargetFrames = 305;

/// Regression delta along time: d_t = sum_k k (x_{t+k} - x_{t-k}) / (2 sum_k k^2)
/// for k = 1..width/2, replicate-padded at the edges. Applied per channel.
/// Throws kTooFewFrames when T < width, kValidationError for even width.
SpectrogramTensor delta(const SpectrogramTensor& feat, std::size_t width = kDeltaWidth);

/// Center-crops, or replicate-pads, the time axis to exactly `frames`.
SpectrogramTensor fit_frames(const SpectrogramTensor& feat, std::size_t frames);

/// [x, delta(x), delta(delta(x))] on the channel axis, then fit_frames.
SpectrogramTensor stack_3ch(const SpectrogramTensor& feat, std::size_t target_frames = kTargetFrames,
                            std::size_t width = kDeltaWidth);

}  // namespace asc::frontend
