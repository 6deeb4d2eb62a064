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

#include "asc/tensor/weights_io.hpp"

#include <set>

#include "../binary_io.hpp"
#include "asc/error.hpp"

namespace asc::nn {

std::vector<std::uint8_t> encode_weights(const std::vector<NamedTensor>& entries) {
  detail::ByteWriter w;
  w.raw("ASCW");
  w.u16(kWeightFileVersion);
  w.u32(static_cast<std::uint32_t>(entries.size()));
  std::set<std::string> seen;
  for (const auto& e : entries) {
    if (!seen.insert(e.name).second) fail(ErrorCode::kValidationError, "duplicate weight name " + e.name);
    if (e.name.size() > 0xFFFF) fail(ErrorCode::kValidationError, "weight name too long");
    w.u16(static_cast<std::uint16_t>(e.name.size()));
    w.raw(e.name);
    w.u8(static_cast<std::uint8_t>(e.tensor.rank()));
    for (std::size_t d : e.tensor.shape()) w.u32(static_cast<std::uint32_t>(d));
    w.f32_array(e.tensor.span());
  }
  return std::move(w.bytes());
}

std::vector<NamedTensor> decode_weights(std::span<const std::uint8_t> bytes) {
  detail::ByteReader r(bytes, ErrorCode::kValidationError);
  if (r.str(4) != "ASCW") fail(ErrorCode::kValidationError, "not an ASCW weight file");
  const auto version = r.u16();
  if (version != kWeightFileVersion) {
    fail(ErrorCode::kValidationError, "unsupported weight file version " + std::to_string(version));
  }
  const auto count = r.u32();
  std::vector<NamedTensor> out;
  out.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    NamedTensor e;
    e.name = r.str(r.u16());
    const auto rank = r.u8();
    if (rank > 4) fail(ErrorCode::kValidationError, "weight tensor rank above 4");
    Shape shape(rank);
    for (auto& d : shape) d = r.u32();
    e.tensor = Tensor<float>(shape);
    r.f32_array(e.tensor.span());
    out.push_back(std::move(e));
  }
  if (!r.at_end()) fail(ErrorCode::kValidationError, "trailing bytes after the last weight");
  return out;
}

void save_weights(const std::filesystem::path& path, const std::vector<NamedTensor>& entries) {
  detail::write_file(path.string(), encode_weights(entries));
}

std::vector<NamedTensor> load_weights(const std::filesystem::path& path) {
  return decode_weights(detail::read_file(path.string()));
}

}  // namespace asc::nn
