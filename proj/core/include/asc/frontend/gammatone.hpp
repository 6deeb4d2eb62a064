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

#include <complex>
#include <cstddef>
#include <vector>

#include "asc/audio/audio_clip.hpp"
#include "asc/frontend/spectrogram.hpp"

namespace asc::frontend {

struct GammatoneConfig {
  std::size_t n_bands = 128;
  double fmin = 50.0;
  double fmax = 16000.0;
  int sample_rate = audio::kPipelineRate;
  std::size_t hop = 1024;
  std::size_t frame_len = 2048;
};

/// Equivalent rectangular bandwidth, 24.7 * (4.37 f / 1000 + 1).
double erb_bandwidth(double hz);
/// ERB-rate scale used for center spacing.
double erb_rate(double hz);
double erb_rate_to_hz(double rate);

/// One band: four cascaded second-order sections sharing a denominator,
/// normalised to unit gain at the center frequency.
struct GammatoneBand {
  double center = 0.0;
  double a0 = 0.0;
  double a1[4] = {0, 0, 0, 0};
  double a2 = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
  double gain = 1.0;
};

class GammatoneBank {
 public:
  explicit GammatoneBank(const GammatoneConfig& cfg = {});

  const GammatoneConfig& config() const noexcept { return cfg_; }
  const std::vector<GammatoneBand>& bands() const noexcept { return bands_; }
  std::vector<double> centers() const;

  /// Complex frequency response of band b at frequency hz.
  std::complex<double> response(std::size_t b, double hz) const;

 private:
  GammatoneConfig cfg_;
  std::vector<GammatoneBand> bands_;
};

/// Log-compressed band energy: mean squared filter output over the hop
/// window centred on each STFT frame. n_bands x T x 1.
SpectrogramTensor gammatone(const audio::AudioClip& clip, const GammatoneBank& bank);
SpectrogramTensor gammatone(const audio::AudioClip& clip, const GammatoneConfig& cfg = {});

}  // namespace asc::frontend
