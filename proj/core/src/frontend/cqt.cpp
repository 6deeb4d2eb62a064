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

#include "asc/frontend/cqt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "../fft.hpp"
#include "asc/error.hpp"
#include "asc/frontend/filterbank.hpp"
#include "asc/frontend/stft.hpp"

namespace asc::frontend {
namespace {

void check_config(const CqtConfig& cfg) {
  if (cfg.n_bins == 0 || cfg.bins_per_octave == 0 || !(cfg.fmin > 0.0)) {
    fail(ErrorCode::kValidationError, "invalid CQT configuration");
  }
  const double top = cfg.fmin * std::pow(2.0, static_cast<double>(cfg.n_bins) / cfg.bins_per_octave);
  if (top > cfg.sample_rate / 2.0) {
    fail(ErrorCode::kNyquistExceeded, "CQT bins extend past the Nyquist frequency");
  }
}

std::size_t kernel_length(const CqtConfig& cfg, std::size_t k) {
  const double len = cqt_quality(cfg.bins_per_octave) * cfg.sample_rate / cqt_center_frequency(cfg, k);
  return static_cast<std::size_t>(std::ceil(len));
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

double cqt_quality(std::size_t bins_per_octave) {
  return 1.0 / (std::pow(2.0, 1.0 / static_cast<double>(bins_per_octave)) - 1.0);
}

double cqt_center_frequency(const CqtConfig& cfg, std::size_t k) {
  return cfg.fmin * std::pow(2.0, static_cast<double>(k) / static_cast<double>(cfg.bins_per_octave));
}

std::vector<std::complex<double>> cqt_time_kernel(const CqtConfig& cfg, std::size_t k) {
  const std::size_t len = kernel_length(cfg, k);
  const double fk = cqt_center_frequency(cfg, k);
  const auto half = static_cast<double>(len / 2);
  std::vector<std::complex<double>> kernel(len);
  for (std::size_t n = 0; n < len; ++n) {
    const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * (static_cast<double>(n) + 0.5) / len);
    const double phase = 2.0 * std::numbers::pi * fk * (static_cast<double>(n) - half) / cfg.sample_rate;
    kernel[n] = std::polar(w / static_cast<double>(len), phase);
  }
  return kernel;
}

CqtKernelBank::CqtKernelBank(const CqtConfig& cfg) : cfg_(cfg) {
  check_config(cfg_);
  fft_len_ = next_pow2(std::max(kernel_length(cfg_, 0), cfg_.frame_len));
  const std::size_t center = fft_len_ / 2;

  detail::ComplexFft fft(fft_len_);
  kernels_.resize(cfg_.n_bins);
  for (std::size_t k = 0; k < cfg_.n_bins; ++k) {
    centers_.push_back(cqt_center_frequency(cfg_, k));
    const auto kernel = cqt_time_kernel(cfg_, k);
    auto in = fft.input();
    std::fill(in.begin(), in.end(), std::complex<double>{});
    const std::size_t start = center - kernel.size() / 2;
    std::copy(kernel.begin(), kernel.end(), in.begin() + static_cast<std::ptrdiff_t>(start));
    fft.execute();
    auto spec = fft.output();
    double peak = 0.0;
    for (const auto& v : spec) peak = std::max(peak, std::abs(v));
    const double threshold = cfg_.sparsity * peak;
    auto& sk = kernels_[k];
    for (std::size_t j = 0; j < fft_len_; ++j) {
      if (std::abs(spec[j]) >= threshold) {
        sk.bins.push_back(j);
        sk.values.push_back(std::conj(spec[j]) / static_cast<double>(fft_len_));
      }
    }
  }
}

void CqtKernelBank::apply(std::span<const std::complex<double>> spec,
                          std::vector<std::complex<double>>& out) const {
  // Parseval: sum_m s[m] conj(k[m]) == (1/L) sum_j S[j] conj(K[j]).
  if (spec.size() != fft_len_ / 2 + 1) fail(ErrorCode::kShapeMismatch, "CQT spectrum length");
  const std::size_t half = fft_len_ / 2;
  out.assign(cfg_.n_bins, {});
  for (std::size_t k = 0; k < cfg_.n_bins; ++k) {
    const auto& sk = kernels_[k];
    std::complex<double> acc{};
    for (std::size_t i = 0; i < sk.bins.size(); ++i) {
      const std::size_t j = sk.bins[i];
      const std::complex<double> s = j <= half ? spec[j] : std::conj(spec[fft_len_ - j]);
      acc += s * sk.values[i];
    }
    out[k] = acc;
  }
}

SpectrogramTensor cqt(const audio::AudioClip& clip, const CqtKernelBank& bank) {
  const auto& cfg = bank.config();
  const StftConfig grid{cfg.frame_len, cfg.hop, cfg.frame_len, false};
  const std::size_t n = clip.samples.size();
  const std::size_t frames = frame_count(n, grid);
  if (frames == 0) fail(ErrorCode::kClipTooShort, "clip shorter than one CQT frame");

  const std::size_t len = bank.fft_len();
  SpectrogramTensor out(cfg.n_bins, frames, 1, FrontendKind::kCqt);
  detail::RealFft fft(len);
  auto segment = fft.input();
  std::vector<std::complex<double>> coeffs;
  for (std::size_t t = 0; t < frames; ++t) {
    const auto center = static_cast<std::int64_t>(t * cfg.hop + cfg.frame_len / 2);
    const std::int64_t start = center - static_cast<std::int64_t>(len / 2);
    for (std::size_t m = 0; m < len; ++m) {
      const std::int64_t i = start + static_cast<std::int64_t>(m);
      segment[m] = (i >= 0 && i < static_cast<std::int64_t>(n)) ? clip.samples[static_cast<std::size_t>(i)] : 0.0;
    }
    fft.execute();
    bank.apply(fft.output(), coeffs);
    for (std::size_t k = 0; k < cfg.n_bins; ++k) out.at(k, t) = static_cast<float>(std::norm(coeffs[k]));
  }
  log_compress(out);
  return out;
}

SpectrogramTensor cqt(const audio::AudioClip& clip, const CqtConfig& cfg) {
  return cqt(clip, CqtKernelBank(cfg));
}

}  // namespace asc::frontend
