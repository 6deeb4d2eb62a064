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

#include "asc/frontend/delta.hpp"

#include <algorithm>

#include "asc/error.hpp"

namespace asc::frontend {

SpectrogramTensor delta(const SpectrogramTensor& feat, std::size_t width) {
  if (width < 3 || width % 2 == 0) fail(ErrorCode::kValidationError, "delta width must be odd and >= 3");
  const std::size_t frames = feat.time();
  if (frames < width) fail(ErrorCode::kTooFewFrames, "fewer frames than the delta width");

  const auto half = static_cast<std::int64_t>(width / 2);
  double denom = 0.0;
  for (std::int64_t k = 1; k <= half; ++k) denom += static_cast<double>(k * k);
  denom *= 2.0;

  const auto last = static_cast<std::int64_t>(frames) - 1;
  SpectrogramTensor out(feat.freq(), frames, feat.channels(), feat.kind());
  for (std::size_t f = 0; f < feat.freq(); ++f) {
    for (std::size_t c = 0; c < feat.channels(); ++c) {
      for (std::int64_t t = 0; t <= last; ++t) {
        double acc = 0.0;
        for (std::int64_t k = 1; k <= half; ++k) {
          const auto ahead = static_cast<std::size_t>(std::min(t + k, last));
          const auto behind = static_cast<std::size_t>(std::max<std::int64_t>(t - k, 0));
          acc += static_cast<double>(k) * (static_cast<double>(feat.at(f, ahead, c)) - feat.at(f, behind, c));
        }
        out.at(f, static_cast<std::size_t>(t), c) = static_cast<float>(acc / denom);
      }
    }
  }
  return out;
}

SpectrogramTensor fit_frames(const SpectrogramTensor& feat, std::size_t frames) {
  if (frames == 0) fail(ErrorCode::kValidationError, "target frame count must be positive");
  const std::size_t have = feat.time();
  SpectrogramTensor out(feat.freq(), frames, feat.channels(), feat.kind());
  // Signed offset of output frame 0 within the input: crop skips the leading
  // half of the excess, padding replicates the edge frames.
  const auto shift = (static_cast<std::int64_t>(have) - static_cast<std::int64_t>(frames)) / 2;
  const auto last = static_cast<std::int64_t>(have) - 1;
  for (std::size_t f = 0; f < feat.freq(); ++f) {
    for (std::size_t t = 0; t < frames; ++t) {
      const auto src = static_cast<std::size_t>(std::clamp<std::int64_t>(static_cast<std::int64_t>(t) + shift, 0, last));
      for (std::size_t c = 0; c < feat.channels(); ++c) out.at(f, t, c) = feat.at(f, src, c);
    }
  }
  return out;
}

SpectrogramTensor stack_3ch(const SpectrogramTensor& feat, std::size_t target_frames, std::size_t width) {
  if (feat.channels() != 1) fail(ErrorCode::kShapeMismatch, "stack_3ch expects a single-channel input");
  const auto d1 = delta(feat, width);
  const auto d2 = delta(d1, width);
  SpectrogramTensor stacked(feat.freq(), feat.time(), 3, feat.kind());
  for (std::size_t f = 0; f < feat.freq(); ++f) {
    for (std::size_t t = 0; t < feat.time(); ++t) {
      stacked.at(f, t, 0) = feat.at(f, t);
      stacked.at(f, t, 1) = d1.at(f, t);
      stacked.at(f, t, 2) = d2.at(f, t);
    }
  }
  return fit_frames(stacked, target_frames);
}

}  // namespace asc::frontend
