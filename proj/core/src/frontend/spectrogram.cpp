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

#include "asc/frontend/spectrogram.hpp"

#include <cmath>

namespace asc::frontend {

std::string_view to_string(FrontendKind kind) {
  switch (kind) {
    case FrontendKind::kLogMel: return "logmel";
    case FrontendKind::kCqt: return "cqt";
    case FrontendKind::kGammatone: return "gam";
    case FrontendKind::kPower: return "power";
  }
  return "unknown";
}

std::optional<FrontendKind> parse_frontend(std::string_view name) {
  if (name == "logmel" || name == "mel") return FrontendKind::kLogMel;
  if (name == "cqt") return FrontendKind::kCqt;
  if (name == "gam" || name == "gammatone") return FrontendKind::kGammatone;
  return std::nullopt;
}

SpectrogramTensor SpectrogramTensor::channel(std::size_t c) const {
  SpectrogramTensor out(freq_, time_, 1, kind_);
  for (std::size_t f = 0; f < freq_; ++f) {
    for (std::size_t t = 0; t < time_; ++t) out.at(f, t) = at(f, t, c);
  }
  return out;
}

bool SpectrogramTensor::all_finite() const noexcept {
  for (float v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace asc::frontend
