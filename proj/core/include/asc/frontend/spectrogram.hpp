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
#include <optional>
#include <string_view>
#include <vector>

namespace asc::frontend {

enum class FrontendKind : std::uint8_t { kLogMel = 0, kCqt = 1, kGammatone = 2, kPower = 255 };

std::string_view to_string(FrontendKind kind);
/// Accepts "logmel", "cqt", "gam" (and "gammatone").
std::optional<FrontendKind> parse_frontend(std::string_view name);

/// Real-valued feature block indexed (frequency, time, channel), stored
/// row-major with channel fastest.
class SpectrogramTensor {
 public:
  SpectrogramTensor() = default;
  SpectrogramTensor(std::size_t freq, std::size_t time, std::size_t channels,
                    FrontendKind kind, float fill = 0.0f)
      : freq_(freq), time_(time), channels_(channels), kind_(kind),
        data_(freq * time * channels, fill) {}

  std::size_t freq() const noexcept { return freq_; }
  std::size_t time() const noexcept { return time_; }
  std::size_t channels() const noexcept { return channels_; }
  FrontendKind kind() const noexcept { return kind_; }
  void set_kind(FrontendKind kind) noexcept { kind_ = kind; }

  float& at(std::size_t f, std::size_t t, std::size_t c = 0) noexcept {
    return data_[(f * time_ + t) * channels_ + c];
  }
  float at(std::size_t f, std::size_t t, std::size_t c = 0) const noexcept {
    return data_[(f * time_ + t) * channels_ + c];
  }

  std::vector<float>& data() noexcept { return data_; }
  const std::vector<float>& data() const noexcept { return data_; }

  /// Copies channel c out as a single-channel tensor.
  SpectrogramTensor channel(std::size_t c) const;

  bool all_finite() const noexcept;

 private:
  std::size_t freq_ = 0;
  std::size_t time_ = 0;
  std::size_t channels_ = 0;
  FrontendKind kind_ = FrontendKind::kLogMel;
  std::vector<float> data_;
};

}  // namespace asc::frontend
