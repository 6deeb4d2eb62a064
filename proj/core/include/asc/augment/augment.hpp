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
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace asc::augment {

enum class MixupDist { kBeta, kUniform };

struct AugmentConfig {
  std::size_t crop_width = 256;
  std::size_t mask_len = 10;  // 0 disables masking
  std::size_t n_masks_per_axis = 1;
  double mixup_alpha = 0.4;
  MixupDist mixup_dist = MixupDist::kBeta;
  std::uint64_t rng_seed = 0;
};

/// Features [B, F, T, C] (channel fastest) with soft labels [B, M].
/// sample_keys identify each row for per-sample random substreams, so a
/// sample's crop offset and mask do not depend on its position in the batch.
struct LabeledBatch {
  std::size_t batch = 0, freq = 0, time = 0, channels = 0, n_classes = 0;
  std::vector<float> features;
  std::vector<float> labels;
  std::vector<std::string> device_tags;
  std::vector<std::uint64_t> sample_keys;

  LabeledBatch() = default;
  LabeledBatch(std::size_t b, std::size_t f, std::size_t t, std::size_t c, std::size_t m);

  std::size_t sample_size() const noexcept { return freq * time * channels; }
  float* sample(std::size_t b) noexcept { return features.data() + b * sample_size(); }
  const float* sample(std::size_t b) const noexcept { return features.data() + b * sample_size(); }
  float& feature(std::size_t b, std::size_t f, std::size_t t, std::size_t c) noexcept {
    return features[((b * freq + f) * time + t) * channels + c];
  }
  float feature(std::size_t b, std::size_t f, std::size_t t, std::size_t c) const noexcept {
    return features[((b * freq + f) * time + t) * channels + c];
  }
  std::span<float> label(std::size_t b) noexcept { return {labels.data() + b * n_classes, n_classes}; }
  std::span<const float> label(std::size_t b) const noexcept {
    return {labels.data() + b * n_classes, n_classes};
  }

  /// Throws ValidationError on shape inconsistencies or non-simplex labels.
  void validate() const;
};

/// Random-stream coordinates for one augmentation call. Per-sample draws are
/// keyed by (seed, epoch, sample key); batch-level draws by (seed, epoch, step).
struct AugmentStream {
  std::uint64_t seed = 0;
  std::uint64_t epoch = 0;
  std::uint64_t step = 0;
};

LabeledBatch random_crop(const LabeledBatch& batch, const AugmentConfig& cfg, const AugmentStream& stream);
LabeledBatch center_crop(const LabeledBatch& batch, std::size_t width);
LabeledBatch spec_augment(const LabeledBatch& batch, const AugmentConfig& cfg, const AugmentStream& stream);
LabeledBatch mixup(const LabeledBatch& batch, const AugmentConfig& cfg, const AugmentStream& stream);

/// Mixup with explicit ratios and partner indices.
LabeledBatch mixup_with(const LabeledBatch& batch, std::span<const double> lambdas,
                        std::span<const std::size_t> partners);

/// Crop, mask and mix in that order (the phase-1 training pipeline).
LabeledBatch augment(const LabeledBatch& batch, const AugmentConfig& cfg, const AugmentStream& stream);

}  // namespace asc::augment
