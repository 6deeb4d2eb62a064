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
#include "asc/frontend/cqt.hpp"
#include "asc/frontend/filterbank.hpp"
#include "asc/frontend/gammatone.hpp"
#include "asc/frontend/spectrogram.hpp"
#include "asc/frontend/stft.hpp"

namespace asc::frontend {

struct FrontendConfig {
  StftConfig stft;
  std::size_t n_bands = 128;
  double mel_fmin = 0.0;
  double mel_fmax = 16000.0;
  CqtConfig cqt;
  GammatoneConfig gammatone;
  std::size_t delta_width = 9;
  std::size_t target_frames = 305;
};

/// Holds the precomputed filterbanks for all three front-ends. The banks are
/// immutable after construction. extract() plans FFTs, and FFTW planning is
/// not thread-safe, so concurrent callers need their own serialisation.
class FeatureExtractor {
 public:
  explicit FeatureExtractor(const FrontendConfig& cfg = {});

  /// 128 x target_frames x 3 features of a 32 kHz clip.
  SpectrogramTensor extract(const audio::AudioClip& clip, FrontendKind kind) const;

  /// Single-channel log-compressed output before delta stacking.
  SpectrogramTensor raw(const audio::AudioClip& clip, FrontendKind kind) const;

  const FrontendConfig& config() const noexcept { return cfg_; }
  const FilterBank& mel_bank() const noexcept { return mel_; }
  const CqtKernelBank& cqt_bank() const noexcept { return cqt_; }
  const GammatoneBank& gammatone_bank() const noexcept { return gam_; }

 private:
  FrontendConfig cfg_;
  FilterBank mel_;
  CqtKernelBank cqt_;
  GammatoneBank gam_;
};

}  // namespace asc::frontend
