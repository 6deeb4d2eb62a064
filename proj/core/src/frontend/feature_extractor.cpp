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

#include "asc/frontend/feature_extractor.hpp"

#include "asc/error.hpp"
#include "asc/frontend/delta.hpp"

namespace asc::frontend {

FeatureExtractor::FeatureExtractor(const FrontendConfig& cfg)
    : cfg_(cfg),
      mel_(mel_filterbank(cfg.n_bands, audio::kPipelineRate, cfg.mel_fmin, cfg.mel_fmax,
                          cfg.stft.fft_len)),
      cqt_(cfg.cqt),
      gam_(cfg.gammatone) {
  if (cfg.cqt.n_bins != cfg.n_bands || cfg.gammatone.n_bands != cfg.n_bands) {
    fail(ErrorCode::kConfigMismatch, "all front-ends must produce the same number of bands");
  }
}

SpectrogramTensor FeatureExtractor::raw(const audio::AudioClip& clip, FrontendKind kind) const {
  if (clip.sample_rate != audio::kPipelineRate) {
    fail(ErrorCode::kValidationError, "features are computed on 32 kHz audio");
  }
  switch (kind) {
    case FrontendKind::kLogMel: return log_mel(stft_power(clip, cfg_.stft), mel_);
    case FrontendKind::kCqt: return cqt(clip, cqt_);
    case FrontendKind::kGammatone: return gammatone(clip, gam_);
    case FrontendKind::kPower: break;
  }
  fail(ErrorCode::kValidationError, "unsupported front-end");
}

SpectrogramTensor FeatureExtractor::extract(const audio::AudioClip& clip, FrontendKind kind) const {
  return stack_3ch(raw(clip, kind), cfg_.target_frames, cfg_.delta_width);
}

}  // namespace asc::frontend
