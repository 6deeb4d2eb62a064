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

#include "asc/tensor/tensor.hpp"

namespace asc::nn {

inline constexpr std::uint16_t kWeightFileVersion = 1;

struct NamedTensor {
  std::string name;
  Tensor<float> tensor;
};

/// "ASCW" container: u16 version, u32 count, then per entry a u16-length
/// name, u8 rank, u32 dims and little-endian float32 values.
std::vector<std::uint8_t> encode_weights(const std::vector<NamedTensor>& entries);
std::vector<NamedTensor> decode_weights(std::span<const std::uint8_t> bytes);

void save_weights(const std::filesystem::path& path, const std::vector<NamedTensor>& entries);
std::vector<NamedTensor> load_weights(const std::filesystem::path& path);

}  // namespace asc::nn
