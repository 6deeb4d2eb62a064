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

#include "asc/frontend/gammatone.hpp"

#include <cmath>
#include <numbers>

#include "asc/error.hpp"
#include "asc/frontend/filterbank.hpp"
#include "asc/frontend/stft.hpp"

namespace asc::frontend {
namespace {

// Four-section cascade of an impulse-invariant 4th-order gammatone
// (Slaney's ERB filterbank design). All sections share one denominator and
// differ only in the z^-1 numerator tap.
GammatoneBand design_band(double cf, int sample_rate) {
  const double T = 1.0 / sample_rate;
  const double B = 1.019 * 2.0 * std::numbers::pi * erb_bandwidth(cf);
  const double arg = 2.0 * std::numbers::pi * cf * T;
  const double decay = std::exp(-B * T);
  const double c = std::cos(arg);
  const double s = std::sin(arg);
  const double r_plus = std::sqrt(3.0 + std::pow(2.0, 1.5));
  const double r_minus = std::sqrt(3.0 - std::pow(2.0, 1.5));

  GammatoneBand band;
  band.center = cf;
  band.a0 = T;
  band.a2 = 0.0;
  band.b1 = -2.0 * c * decay;
  band.b2 = std::exp(-2.0 * B * T);
  band.a1[0] = -(T * c + r_plus * T * s) * decay;
  band.a1[1] = -(T * c - r_plus * T * s) * decay;
  band.a1[2] = -(T * c + r_minus * T * s) * decay;
  band.a1[3] = -(T * c - r_minus * T * s) * decay;
  return band;
}

std::complex<double> cascade_response(const GammatoneBand& band, double hz, int sample_rate) {
  const double w = 2.0 * std::numbers::pi * hz / sample_rate;
  const std::complex<double> z1 = std::polar(1.0, -w);
  const std::complex<double> z2 = z1 * z1;
  const std::complex<double> den = 1.0 + band.b1 * z1 + band.b2 * z2;
  std::complex<double> h = 1.0;
  for (double a1 : band.a1) h *= (band.a0 + a1 * z1 + band.a2 * z2) / den;
  return h;
}

}  // namespace

double erb_bandwidth(double hz) { return 24.7 * (4.37 * hz / 1000.0 + 1.0); }
double erb_rate(double hz) { return 21.4 * std::log10(1.0 + 4.37 * hz / 1000.0); }
double erb_rate_to_hz(double rate) { return (std::pow(10.0, rate / 21.4) - 1.0) * 1000.0 / 4.37; }

GammatoneBank::GammatoneBank(const GammatoneConfig& cfg) : cfg_(cfg) {
  if (cfg.n_bands == 0 || !(cfg.fmin > 0.0) || !(cfg.fmin < cfg.fmax) ||
      cfg.fmax > cfg.sample_rate / 2.0) {
    fail(ErrorCode::kInvalidBandRange, "gammatone bank requires 0 < fmin < fmax <= sr/2");
  }
  const double lo = erb_rate(cfg.fmin);
  const double hi = erb_rate(cfg.fmax);
  const double step = cfg.n_bands > 1 ? (hi - lo) / static_cast<double>(cfg.n_bands - 1) : 0.0;
  for (std::size_t b = 0; b < cfg.n_bands; ++b) {
    double cf = erb_rate_to_hz(lo + step * static_cast<double>(b));
    if (b == 0) cf = cfg.fmin;
    if (b + 1 == cfg.n_bands && cfg.n_bands > 1) cf = cfg.fmax;
    auto band = design_band(cf, cfg.sample_rate);
    band.gain = std::abs(cascade_response(band, cf, cfg.sample_rate));
    bands_.push_back(band);
  }
}

std::vector<double> GammatoneBank::centers() const {
  std::vector<double> out;
  out.reserve(bands_.size());
  for (const auto& b : bands_) out.push_back(b.center);
  return out;
}

std::complex<double> GammatoneBank::response(std::size_t b, double hz) const {
  const auto& band = bands_.at(b);
  return cascade_response(band, hz, cfg_.sample_rate) / band.gain;
}

SpectrogramTensor gammatone(const audio::AudioClip& clip, const GammatoneBank& bank) {
  const auto& cfg = bank.config();
  if (clip.sample_rate != cfg.sample_rate) {
    fail(ErrorCode::kValidationError, "gammatone bank designed for a different sample rate");
  }
  const StftConfig grid{cfg.frame_len, cfg.hop, cfg.frame_len, false};
  const std::size_t n = clip.samples.size();
  const std::size_t frames = frame_count(n, grid);
  if (frames == 0) fail(ErrorCode::kClipTooShort, "clip shorter than one gammatone frame");

  // Band-major coefficient arrays so the inner loops vectorise across bands.
  const std::size_t nb = bank.bands().size();
  std::vector<double> inv_gain(nb), b1(nb), b2(nb), a1(4 * nb);
  for (std::size_t b = 0; b < nb; ++b) {
    const auto& band = bank.bands()[b];
    inv_gain[b] = std::pow(band.a0, 4) / band.gain;  // every section's a0 folded into the input scale
    b1[b] = band.b1;
    b2[b] = band.b2;
    for (int k = 0; k < 4; ++k) a1[k * nb + b] = band.a1[k] / band.a0;
  }
  std::vector<double> s1(4 * nb, 0.0), s2(4 * nb, 0.0), v(nb), energy(nb);

  SpectrogramTensor out(nb, frames, 1, FrontendKind::kGammatone);
  // Frame t integrates the hop-long window centred on t*hop + frame_len/2.
  const std::size_t offset = (cfg.frame_len - cfg.hop) / 2;
  const std::size_t last = offset + frames * cfg.hop;
  const double inv_hop = 1.0 / static_cast<double>(cfg.hop);
  for (std::size_t i = 0; i < last; ++i) {
    const double x = clip.samples[i];
    for (std::size_t b = 0; b < nb; ++b) v[b] = x * inv_gain[b];
    for (int k = 0; k < 4; ++k) {
      double* st1 = s1.data() + k * nb;
      double* st2 = s2.data() + k * nb;
      const double* ak = a1.data() + k * nb;
      for (std::size_t b = 0; b < nb; ++b) {
        // Transposed direct form II with numerator (1, a1/a0, 0) after scaling.
        const double in = v[b];
        const double y = in + st1[b];
        st1[b] = ak[b] * in - b1[b] * y + st2[b];
        st2[b] = -b2[b] * y;
        v[b] = y;
      }
    }
    if (i >= offset) {
      for (std::size_t b = 0; b < nb; ++b) energy[b] += v[b] * v[b];
      if ((i - offset + 1) % cfg.hop == 0) {
        const std::size_t t = (i - offset) / cfg.hop;
        for (std::size_t b = 0; b < nb; ++b) {
          out.at(b, t) = static_cast<float>(energy[b] * inv_hop);
          energy[b] = 0.0;
        }
      }
    }
  }
  log_compress(out);
  return out;
}

SpectrogramTensor gammatone(const audio::AudioClip& clip, const GammatoneConfig& cfg) {
  return gammatone(clip, GammatoneBank(cfg));
}

}  // namespace asc::frontend
