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
#include <span>
#include <vector>

#include "asc/audio/audio_clip.hpp"
#include "asc/frontend/spectrogram.hpp"

namespace asc::frontend {

struct CqtConfig {
  std::size_t n_bins = 128;
  std::size_t bins_per_octave = 24;
  double fmin = 32.7;
  int sample_rate = audio::kPipelineRate;
  std::size_t hop = 1024;
  /// Frames share the STFT grid: frame t is centred on t*hop + frame_len/2.
  std::size_t frame_len = 2048;
  /// Spectral-kernel entries below this fraction of the kernel peak are dropped.
  double sparsity = 1e-4;
};

double cqt_quality(std::size_t bins_per_octave);
double cqt_center_frequency(const CqtConfig& cfg, std::size_t k);

/// Time-domain kernel of bin k: Hann-windowed complex exponential at f_k of
/// length ceil(Q * sr / f_k), normalised by its length.
std::vector<std::complex<double>> cqt_time_kernel(const CqtConfig& cfg, std::size_t k);

/// Precomputed sparse spectral kernels (FFT of each time kernel), so a frame
/// costs one FFT plus a sparse inner product per bin.
class CqtKernelBank {
 public:
  explicit CqtKernelBank(const CqtConfig& cfg = {});

  const CqtConfig& config() const noexcept { return cfg_; }
  std::size_t fft_len() const noexcept { return fft_len_; }
  const std::vector<double>& centers() const noexcept { return centers_; }

  /// Complex CQT coefficients from the real FFT (fft_len()/2 + 1 bins) of an
  /// analysis segment of length fft_len() whose midpoint is the frame centre.
  void apply(std::span<const std::complex<double>> spectrum,
             std::vector<std::complex<double>>& out) const;

 private:
  struct SparseKernel {
    std::vector<std::size_t> bins;
    std::vector<std::complex<double>> values;  // conj(K[j]) / fft_len
  };

  CqtConfig cfg_;
  std::size_t fft_len_ = 0;
  std::vector<double> centers_;
  std::vector<SparseKernel> kernels_;
};

/// Log-compressed CQT power, n_bins x T x 1 on the STFT frame grid.
/// Throws kNyquistExceeded when fmin * 2^(n_bins/bpo) > sr/2.
SpectrogramTensor cqt(const audio::AudioClip& clip, const CqtKernelBank& bank);
SpectrogramTensor cqt(const audio::AudioClip& clip, const CqtConfig& cfg = {});

}  // namespace asc::frontend
