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

#include "asc/audio/audio_clip.hpp"
#include "asc/frontend/spectrogram.hpp"

namespace asc::frontend {

struct StftConfig {
  std::size_t window_len = 2048;
  std::size_t hop = 1024;
  std::size_t fft_len = 2048;
  /// Reflect-pad window_len/2 samples on both ends before framing.
  bool center_pad = false;
};

/// Number of frames the STFT grid yields for n input samples.
std::size_t frame_count(std::size_t n, const StftConfig& cfg);

/// Periodic Hann window of length n.
std::vector<double> hann_window(std::size_t n);

/// |DFT|^2 of Hann-windowed frames; frame t covers samples
/// [t*hop, t*hop + window_len) of the (optionally padded) signal.
/// Output: F = fft_len/2 + 1 bins, T frames, C = 1.
SpectrogramTensor stft_power(const audio::AudioClip& clip, const StftConfig& cfg = {});

}  // namespace asc::frontend
