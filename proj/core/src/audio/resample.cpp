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

#include "asc/audio/resample.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "asc/error.hpp"

namespace asc::audio {
namespace {

double sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

// Coefficient table [phase][tap]. Output sample j sits at input time
// tau = j * down / up; with base = floor(tau) and phase p = (j * down) mod up,
// tap k multiplies x[base - half + 1 + k].
std::vector<double> design_polyphase(int up, int down, const ResamplerConfig& cfg) {
  const int taps = cfg.taps_per_phase;
  const int half = taps / 2;
  const double cutoff = cfg.rolloff * std::min(1.0, static_cast<double>(up) / down);
  const double i0_beta = std::cyl_bessel_i(0.0, cfg.kaiser_beta);

  std::vector<double> table(static_cast<std::size_t>(up) * taps);
  for (int p = 0; p < up; ++p) {
    const double frac = static_cast<double>(p) / up;
    double sum = 0.0;
    for (int k = 0; k < taps; ++k) {
      const double t = frac + (half - 1) - k;  // tau - n
      const double r = t / half;
      double w = 0.0;
      if (std::abs(r) <= 1.0) {
        w = std::cyl_bessel_i(0.0, cfg.kaiser_beta * std::sqrt(1.0 - r * r)) / i0_beta;
      }
      const double h = cutoff * sinc(cutoff * t) * w;
      table[static_cast<std::size_t>(p) * taps + k] = h;
      sum += h;
    }
    // Unity DC gain for every phase.
    for (int k = 0; k < taps; ++k) table[static_cast<std::size_t>(p) * taps + k] /= sum;
  }
  return table;
}

}  // namespace

AudioClip resample(const AudioClip& clip, int target_rate, const ResamplerConfig& cfg) {
  validate(clip);
  if (target_rate <= 0) fail(ErrorCode::kValidationError, "target rate must be positive");
  if (clip.sample_rate == target_rate) return clip;

  const int g = std::gcd(clip.sample_rate, target_rate);
  const int up = target_rate / g;
  const int down = clip.sample_rate / g;
  const int taps = cfg.taps_per_phase;
  const int half = taps / 2;
  const auto table = design_polyphase(up, down, cfg);

  const auto n_in = static_cast<std::int64_t>(clip.samples.size());
  const auto n_out = static_cast<std::int64_t>(
      std::llround(static_cast<double>(n_in) * target_rate / clip.sample_rate));

  AudioClip out;
  out.sample_rate = target_rate;
  out.scene_label = clip.scene_label;
  out.device_id = clip.device_id;
  out.samples.resize(static_cast<std::size_t>(n_out));

  const float* x = clip.samples.data();
  for (std::int64_t j = 0; j < n_out; ++j) {
    const std::int64_t pos = j * down;
    const std::int64_t base = pos / up;
    const auto phase = static_cast<std::size_t>(pos % up);
    const double* h = table.data() + phase * taps;
    const std::int64_t first = base - half + 1;
    double acc = 0.0;
    if (first >= 0 && first + taps <= n_in) {
      for (int k = 0; k < taps; ++k) acc += h[k] * x[first + k];
    } else {
      for (int k = 0; k < taps; ++k) {
        const std::int64_t n = first + k;
        if (n >= 0 && n < n_in) acc += h[k] * x[n];
      }
    }
    out.samples[static_cast<std::size_t>(j)] = static_cast<float>(acc);
  }
  return out;
}

}  // namespace asc::audio
