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

#include "asc/frontend/stft.hpp"

#include <cmath>
#include <numbers>

#include "../fft.hpp"
#include "asc/error.hpp"

namespace asc::frontend {
namespace {

std::vector<double> padded_signal(const audio::AudioClip& clip, const StftConfig& cfg) {
  const std::size_t n = clip.samples.size();
  if (!cfg.center_pad) return {clip.samples.begin(), clip.samples.end()};
  const std::size_t pad = cfg.window_len / 2;
  if (n <= pad) fail(ErrorCode::kClipTooShort, "clip too short for reflect padding");
  std::vector<double> x(n + 2 * pad);
  for (std::size_t i = 0; i < pad; ++i) {
    x[i] = clip.samples[pad - i];
    x[pad + n + i] = clip.samples[n - 2 - i];
  }
  for (std::size_t i = 0; i < n; ++i) x[pad + i] = clip.samples[i];
  return x;
}

}  // namespace

std::size_t frame_count(std::size_t n, const StftConfig& cfg) {
  if (n < cfg.window_len) return 0;
  return (n - cfg.window_len) / cfg.hop + 1;
}

std::vector<double> hann_window(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
  }
  return w;
}

SpectrogramTensor stft_power(const audio::AudioClip& clip, const StftConfig& cfg) {
  if (cfg.hop == 0 || cfg.hop > cfg.window_len || cfg.fft_len < cfg.window_len) {
    fail(ErrorCode::kValidationError, "invalid STFT configuration");
  }
  const auto x = padded_signal(clip, cfg);
  const std::size_t frames = frame_count(x.size(), cfg);
  if (frames == 0) fail(ErrorCode::kClipTooShort, "clip shorter than one STFT window");

  const auto window = hann_window(cfg.window_len);
  const std::size_t bins = cfg.fft_len / 2 + 1;
  SpectrogramTensor out(bins, frames, 1, FrontendKind::kPower);

  detail::RealFft fft(cfg.fft_len);
  auto in = fft.input();
  for (std::size_t t = 0; t < frames; ++t) {
    const double* frame = x.data() + t * cfg.hop;
    for (std::size_t i = 0; i < cfg.window_len; ++i) in[i] = frame[i] * window[i];
    for (std::size_t i = cfg.window_len; i < cfg.fft_len; ++i) in[i] = 0.0;
    fft.execute();
    auto spec = fft.output();
    for (std::size_t f = 0; f < bins; ++f) out.at(f, t) = static_cast<float>(std::norm(spec[f]));
  }
  return out;
}

}  // namespace asc::frontend
