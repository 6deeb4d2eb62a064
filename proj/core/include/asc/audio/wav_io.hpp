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
#include <vector>

#include "asc/audio/audio_clip.hpp"

namespace asc::audio {

/// Decodes an in-memory RIFF/WAVE image. Accepts PCM 16-bit and IEEE float
/// 32-bit (plain or WAVE_FORMAT_EXTENSIBLE); multi-channel input is averaged
/// to mono. PCM16 is scaled by 1/32768.
AudioClip decode_wav(std::span<const std::uint8_t> bytes);

AudioClip load_wav(const std::filesystem::path& path);

/// Encodes a mono clip as 16-bit PCM. Samples are clamped to [-1, 1) and
/// rounded to the nearest integer code.
std::vector<std::uint8_t> encode_wav_pcm16(const AudioClip& clip);

void save_wav_pcm16(const std::filesystem::path& path, const AudioClip& clip);

}  // namespace asc::audio
