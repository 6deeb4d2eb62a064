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

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "asc/frontend/spectrogram.hpp"

namespace asc::frontend {

inline constexpr std::uint16_t kFeatureCacheVersion = 1;

struct FeatureRecord {
  int label = 0;
  std::string device_id;
  SpectrogramTensor features;
};

/// "ASCF" container: magic, version u16, frontend u8, F/T/C u32, then per
/// record a label u8, a u16-length-prefixed UTF-8 device tag and F*T*C
/// little-endian float32 values (row-major). Records run to end of file.
struct FeatureCache {
  FrontendKind kind = FrontendKind::kLogMel;
  std::uint32_t freq = 0;
  std::uint32_t time = 0;
  std::uint32_t channels = 0;
  std::vector<FeatureRecord> records;
};

std::vector<std::uint8_t> encode_feature_cache(const FeatureCache& cache);
FeatureCache decode_feature_cache(std::span<const std::uint8_t> bytes);

void write_feature_cache(const std::filesystem::path& path, const FeatureCache& cache);
FeatureCache read_feature_cache(const std::filesystem::path& path);

}  // namespace asc::frontend
