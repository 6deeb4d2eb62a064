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

#include "asc/frontend/feature_cache.hpp"

#include "../binary_io.hpp"
#include "asc/error.hpp"

namespace asc::frontend {

std::vector<std::uint8_t> encode_feature_cache(const FeatureCache& cache) {
  const std::size_t cells = static_cast<std::size_t>(cache.freq) * cache.time * cache.channels;
  detail::ByteWriter w;
  w.raw("ASCF");
  w.u16(kFeatureCacheVersion);
  w.u8(static_cast<std::uint8_t>(cache.kind));
  w.u32(cache.freq);
  w.u32(cache.time);
  w.u32(cache.channels);
  for (const auto& rec : cache.records) {
    const auto& f = rec.features;
    if (f.freq() != cache.freq || f.time() != cache.time || f.channels() != cache.channels ||
        f.data().size() != cells) {
      fail(ErrorCode::kShapeMismatch, "record dimensions differ from the cache header");
    }
    if (rec.label < 0 || rec.label > 255) fail(ErrorCode::kValidationError, "label does not fit in u8");
    if (rec.device_id.size() > 0xFFFF) fail(ErrorCode::kValidationError, "device tag too long");
    w.u8(static_cast<std::uint8_t>(rec.label));
    w.u16(static_cast<std::uint16_t>(rec.device_id.size()));
    w.raw(rec.device_id);
    w.f32_array(f.data());
  }
  return std::move(w.bytes());
}

FeatureCache decode_feature_cache(std::span<const std::uint8_t> bytes) {
  detail::ByteReader r(bytes, ErrorCode::kValidationError);
  if (r.str(4) != "ASCF") fail(ErrorCode::kValidationError, "not an ASCF feature cache");
  const auto version = r.u16();
  if (version != kFeatureCacheVersion) {
    fail(ErrorCode::kValidationError, "unsupported feature cache version " + std::to_string(version));
  }
  FeatureCache cache;
  const auto kind = r.u8();
  if (kind > 2) fail(ErrorCode::kValidationError, "unknown front-end id");
  cache.kind = static_cast<FrontendKind>(kind);
  cache.freq = r.u32();
  cache.time = r.u32();
  cache.channels = r.u32();
  while (!r.at_end()) {
    FeatureRecord rec;
    rec.label = r.u8();
    rec.device_id = r.str(r.u16());
    rec.features = SpectrogramTensor(cache.freq, cache.time, cache.channels, cache.kind);
    r.f32_array(rec.features.data());
    cache.records.push_back(std::move(rec));
  }
  return cache;
}

void write_feature_cache(const std::filesystem::path& path, const FeatureCache& cache) {
  detail::write_file(path.string(), encode_feature_cache(cache));
}

FeatureCache read_feature_cache(const std::filesystem::path& path) {
  return decode_feature_cache(detail::read_file(path.string()));
}

}  // namespace asc::frontend
