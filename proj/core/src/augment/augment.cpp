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

#include "asc/augment/augment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "asc/error.hpp"
#include "asc/random.hpp"

namespace asc::augment {
namespace {

// Purpose tags keep the crop, mask and mixup streams independent.
constexpr std::uint64_t kCropTag = 0x43524f50;
constexpr std::uint64_t kMaskTag = 0x4d41534b;
constexpr std::uint64_t kMixTag = 0x4d495855;

Rng sample_rng(const AugmentStream& s, std::uint64_t tag, std::uint64_t key) {
  return make_rng(s.seed, {s.epoch, tag, key});
}

LabeledBatch crop_at(const LabeledBatch& in, std::size_t width, std::span<const std::size_t> offsets) {
  LabeledBatch out = in;
  out.time = width;
  out.features.assign(in.batch * in.freq * width * in.channels, 0.0f);
  const std::size_t row = width * in.channels;
  for (std::size_t b = 0; b < in.batch; ++b) {
    for (std::size_t f = 0; f < in.freq; ++f) {
      const float* src = &in.features[((b * in.freq + f) * in.time + offsets[b]) * in.channels];
      std::copy(src, src + row, &out.features[(b * in.freq + f) * row]);
    }
  }
  return out;
}

double draw_lambda(const AugmentConfig& cfg, Rng& rng) {
  if (cfg.mixup_dist == MixupDist::kUniform) return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  std::gamma_distribution<double> gamma(cfg.mixup_alpha, 1.0);
  const double x = gamma(rng);
  const double y = gamma(rng);
  return x + y > 0.0 ? x / (x + y) : 0.5;
}

}  // namespace

LabeledBatch::LabeledBatch(std::size_t b, std::size_t f, std::size_t t, std::size_t c, std::size_t m)
    : batch(b), freq(f), time(t), channels(c), n_classes(m),
      features(b * f * t * c, 0.0f), labels(b * m, 0.0f), device_tags(b), sample_keys(b) {
  std::iota(sample_keys.begin(), sample_keys.end(), std::uint64_t{0});
}

void LabeledBatch::validate() const {
  if (batch == 0) fail(ErrorCode::kValidationError, "empty batch");
  if (features.size() != batch * sample_size() || labels.size() != batch * n_classes ||
      device_tags.size() != batch || sample_keys.size() != batch) {
    fail(ErrorCode::kValidationError, "batch arrays disagree with the declared shape");
  }
  for (std::size_t b = 0; b < batch; ++b) {
    double sum = 0.0;
    for (float v : label(b)) {
      if (!(v >= 0.0f)) fail(ErrorCode::kValidationError, "negative label entry");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-6) fail(ErrorCode::kValidationError, "label row does not sum to 1");
  }
}

LabeledBatch random_crop(const LabeledBatch& batch, const AugmentConfig& cfg, const AugmentStream& stream) {
  if (cfg.crop_width > batch.time || cfg.crop_width == 0) {
    fail(ErrorCode::kCropWiderThanInput, "crop width " + std::to_string(cfg.crop_width) +
                                             " exceeds " + std::to_string(batch.time) + " frames");
  }
  std::vector<std::size_t> offsets(batch.batch);
  for (std::size_t b = 0; b < batch.batch; ++b) {
    auto rng = sample_rng(stream, kCropTag, batch.sample_keys[b]);
    offsets[b] = std::uniform_int_distribution<std::size_t>(0, batch.time - cfg.crop_width)(rng);
  }
  return crop_at(batch, cfg.crop_width, offsets);
}

LabeledBatch center_crop(const LabeledBatch& batch, std::size_t width) {
  if (width > batch.time || width == 0) fail(ErrorCode::kCropWiderThanInput, "crop wider than input");
  std::vector<std::size_t> offsets(batch.batch, (batch.time - width) / 2);
  return crop_at(batch, width, offsets);
}

LabeledBatch spec_augment(const LabeledBatch& batch, const AugmentConfig& cfg, const AugmentStream& stream) {
  if (cfg.mask_len == 0 || cfg.n_masks_per_axis == 0) return batch;
  if (cfg.mask_len > batch.freq || cfg.mask_len > batch.time) {
    fail(ErrorCode::kMaskLongerThanAxis, "mask length exceeds a spectrogram axis");
  }
  LabeledBatch out = batch;
  const std::size_t C = batch.channels;
  for (std::size_t b = 0; b < batch.batch; ++b) {
    auto rng = sample_rng(stream, kMaskTag, batch.sample_keys[b]);
    for (std::size_t m = 0; m < cfg.n_masks_per_axis; ++m) {
      const bool along_freq = std::bernoulli_distribution(0.5)(rng);
      const std::size_t axis_len = along_freq ? batch.freq : batch.time;
      const std::size_t start = std::uniform_int_distribution<std::size_t>(0, axis_len - cfg.mask_len)(rng);
      for (std::size_t f = 0; f < batch.freq; ++f) {
        if (along_freq) {
          if (f < start || f >= start + cfg.mask_len) continue;
          float* row = &out.feature(b, f, 0, 0);
          std::fill(row, row + batch.time * C, 0.0f);
        } else {
          float* run = &out.feature(b, f, start, 0);
          std::fill(run, run + cfg.mask_len * C, 0.0f);
        }
      }
    }
  }
  return out;
}

LabeledBatch mixup_with(const LabeledBatch& batch, std::span<const double> lambdas,
                        std::span<const std::size_t> partners) {
  if (batch.batch < 2) fail(ErrorCode::kBatchTooSmall, "mixup needs at least two samples");
  if (lambdas.size() != batch.batch || partners.size() != batch.batch) {
    fail(ErrorCode::kShapeMismatch, "one ratio and one partner per sample required");
  }
  LabeledBatch out = batch;
  const std::size_t n = batch.sample_size();
  for (std::size_t i = 0; i < batch.batch; ++i) {
    const std::size_t j = partners[i];
    if (j >= batch.batch) fail(ErrorCode::kShapeMismatch, "partner index out of range");
    const double lam = lambdas[i];
    const float* xi = batch.sample(i);
    const float* xj = batch.sample(j);
    float* dst = out.sample(i);
    for (std::size_t k = 0; k < n; ++k) {
      dst[k] = static_cast<float>(lam * xi[k] + (1.0 - lam) * xj[k]);
    }
    auto yi = batch.label(i);
    auto yj = batch.label(j);
    auto yo = out.label(i);
    for (std::size_t m = 0; m < batch.n_classes; ++m) {
      yo[m] = static_cast<float>(lam * yi[m] + (1.0 - lam) * yj[m]);
    }
  }
  return out;
}

LabeledBatch mixup(const LabeledBatch& batch, const AugmentConfig& cfg, const AugmentStream& stream) {
  if (batch.batch < 2) fail(ErrorCode::kBatchTooSmall, "mixup needs at least two samples");
  if (!(cfg.mixup_alpha > 0.0)) fail(ErrorCode::kValidationError, "mixup alpha must be positive");
  auto rng = make_rng(stream.seed, {stream.epoch, kMixTag, stream.step});
  std::vector<std::size_t> partners(batch.batch);
  std::iota(partners.begin(), partners.end(), std::size_t{0});
  std::shuffle(partners.begin(), partners.end(), rng);
  std::vector<double> lambdas(batch.batch);
  for (auto& l : lambdas) l = draw_lambda(cfg, rng);
  return mixup_with(batch, lambdas, partners);
}

LabeledBatch augment(const LabeledBatch& batch, const AugmentConfig& cfg, const AugmentStream& stream) {
  auto out = spec_augment(random_crop(batch, cfg, stream), cfg, stream);
  return out.batch >= 2 ? mixup(out, cfg, stream) : out;
}

}  // namespace asc::augment
