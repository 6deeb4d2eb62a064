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
#include <vector>

#include "asc/frontend/spectrogram.hpp"

namespace asc::frontend {

enum class FilterKind { kMel, kCqtKernel, kGammatone };

inline constexpr float kLogFloor = 1e-10f;

/// Band-by-bin weight matrix (row-major, n_bands x n_bins) plus the band
/// geometry it was built from.
struct FilterBank {
  std::size_t n_bands = 0;
  std::size_t n_bins = 0;
  FilterKind kind = FilterKind::kMel;
  std::vector<float> weights;
  std::vector<double> band_centers;
  std::vector<double> lower_edges;
  std::vector<double> upper_edges;

  float weight(std::size_t band, std::size_t bin) const { return weights[band * n_bins + bin]; }
};

double hz_to_mel(double hz);
double mel_to_hz(double mel);

/// Triangular filters with centers uniform on the HTK mel scale between fmin
/// and fmax, each scaled by 2 / (upper - lower). Throws kInvalidBandRange.
FilterBank mel_filterbank(std::size_t n_bands, int sample_rate, double fmin, double fmax,
                          std::size_t fft_len = 2048);

/// bank * power for every frame (no compression). Throws kShapeMismatch.
SpectrogramTensor apply_filterbank(const SpectrogramTensor& power, const FilterBank& bank);

/// 10*log10(max(x, floor)) elementwise.
void log_compress(SpectrogramTensor& energies, float floor = kLogFloor);

SpectrogramTensor log_mel(const SpectrogramTensor& power, const FilterBank& bank);

}  // namespace asc::frontend
