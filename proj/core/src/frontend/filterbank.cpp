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

#include "asc/frontend/filterbank.hpp"

#include <algorithm>
#include <cmath>

#include "asc/error.hpp"

namespace asc::frontend {

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

FilterBank mel_filterbank(std::size_t n_bands, int sample_rate, double fmin, double fmax,
                          std::size_t fft_len) {
  if (n_bands == 0 || !(fmin >= 0.0) || !(fmin < fmax) || fmax > sample_rate / 2.0) {
    fail(ErrorCode::kInvalidBandRange, "mel filterbank requires 0 <= fmin < fmax <= sr/2");
  }
  FilterBank bank;
  bank.kind = FilterKind::kMel;
  bank.n_bands = n_bands;
  bank.n_bins = fft_len / 2 + 1;
  bank.weights.assign(bank.n_bands * bank.n_bins, 0.0f);

  const double mel_lo = hz_to_mel(fmin);
  const double mel_hi = hz_to_mel(fmax);
  std::vector<double> edges(n_bands + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) / (n_bands + 1));
  }
  edges.front() = fmin;
  edges.back() = fmax;

  const double bin_hz = static_cast<double>(sample_rate) / static_cast<double>(fft_len);
  for (std::size_t b = 0; b < n_bands; ++b) {
    const double lower = edges[b];
    const double center = edges[b + 1];
    const double upper = edges[b + 2];
    const double area_norm = 2.0 / (upper - lower);
    bank.band_centers.push_back(center);
    bank.lower_edges.push_back(lower);
    bank.upper_edges.push_back(upper);
    for (std::size_t k = 0; k < bank.n_bins; ++k) {
      const double f = static_cast<double>(k) * bin_hz;
      const double rise = (f - lower) / (center - lower);
      const double fall = (upper - f) / (upper - center);
      const double tri = std::max(0.0, std::min(rise, fall));
      bank.weights[b * bank.n_bins + k] = static_cast<float>(tri * area_norm);
    }
  }
  return bank;
}

SpectrogramTensor apply_filterbank(const SpectrogramTensor& power, const FilterBank& bank) {
  if (power.freq() != bank.n_bins || power.channels() != 1) {
    fail(ErrorCode::kShapeMismatch, "filterbank bins do not match the power spectrogram");
  }
  const std::size_t frames = power.time();
  SpectrogramTensor out(bank.n_bands, frames, 1, power.kind());
  std::vector<double> acc(frames);
  for (std::size_t b = 0; b < bank.n_bands; ++b) {
    std::fill(acc.begin(), acc.end(), 0.0);
    const float* w = bank.weights.data() + b * bank.n_bins;
    for (std::size_t k = 0; k < bank.n_bins; ++k) {
      if (w[k] == 0.0f) continue;
      const double wk = w[k];
      const float* row = power.data().data() + k * frames;
      for (std::size_t t = 0; t < frames; ++t) acc[t] += wk * row[t];
    }
    for (std::size_t t = 0; t < frames; ++t) out.at(b, t) = static_cast<float>(acc[t]);
  }
  return out;
}

void log_compress(SpectrogramTensor& energies, float floor) {
  for (float& v : energies.data()) v = 10.0f * std::log10(std::max(v, floor));
}

SpectrogramTensor log_mel(const SpectrogramTensor& power, const FilterBank& bank) {
  auto out = apply_filterbank(power, bank);
  log_compress(out);
  out.set_kind(FrontendKind::kLogMel);
  return out;
}

}  // namespace asc::frontend
