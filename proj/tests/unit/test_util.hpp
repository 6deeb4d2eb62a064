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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "asc/audio/audio_clip.hpp"
#include "asc/error.hpp"

// Fails unless stmt throws asc::Error carrying the given code.
#define EXPECT_ASC_ERROR(stmt, expected_code)                                        \
  do {                                                                               \
    try {                                                                            \
      stmt;                                                                          \
      ADD_FAILURE() << #stmt " did not throw";                                       \
    } catch (const ::asc::Error& asc_err_) {                                         \
      EXPECT_EQ(asc_err_.code(), expected_code) << asc_err_.what();                  \
    }                                                                                \
  } while (0)

namespace asc::test {

inline audio::AudioClip tone(double hz, double seconds, int rate = audio::kPipelineRate, double amp = 1.0) {
  audio::AudioClip c;
  c.sample_rate = rate;
  c.samples.resize(static_cast<std::size_t>(seconds * rate));
  for (std::size_t i = 0; i < c.samples.size(); ++i) {
    c.samples[i] = static_cast<float>(amp * std::sin(2 * std::numbers::pi * hz * static_cast<double>(i) / rate));
  }
  return c;
}

}  // namespace asc::test
