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

#include "asc/audio/wav_io.hpp"

#include <algorithm>
#include <cmath>

#include "../binary_io.hpp"
#include "asc/error.hpp"

namespace asc::audio {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

struct FormatChunk {
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t rate = 0;
  std::uint16_t block_align = 0;
  std::uint16_t bits = 0;
};

FormatChunk parse_fmt(std::span<const std::uint8_t> body) {
  detail::ByteReader r(body, ErrorCode::kMalformedHeader);
  FormatChunk fmt;
  fmt.format = r.u16();
  fmt.channels = r.u16();
  fmt.rate = r.u32();
  r.u32();  // byte rate
  fmt.block_align = r.u16();
  fmt.bits = r.u16();
  if (fmt.format == kFormatExtensible) {
    const std::uint16_t cb_size = r.u16();
    if (cb_size < 22) fail(ErrorCode::kMalformedHeader, "short WAVE_FORMAT_EXTENSIBLE block");
    r.u16();  // valid bits
    r.u32();  // channel mask
    fmt.format = r.u16();  // first two bytes of the subformat GUID
  }
  return fmt;
}

}  // namespace

AudioClip decode_wav(std::span<const std::uint8_t> bytes) {
  detail::ByteReader r(bytes, ErrorCode::kMalformedHeader);
  if (r.str(4) != "RIFF") fail(ErrorCode::kMalformedHeader, "missing RIFF tag");
  r.u32();
  if (r.str(4) != "WAVE") fail(ErrorCode::kMalformedHeader, "missing WAVE tag");

  FormatChunk fmt;
  bool have_fmt = false;
  std::span<const std::uint8_t> data;
  bool have_data = false;
  while (r.remaining() >= 8) {
    const std::string id = r.str(4);
    std::uint32_t size = r.u32();
    if (id == "data") {
      // Some writers leave the size unset when streaming; clamp to the file.
      size = static_cast<std::uint32_t>(std::min<std::size_t>(size, r.remaining()));
    }
    auto body = r.take(size);
    if (size % 2 == 1 && r.remaining() > 0) r.skip(1);
    if (id == "fmt ") {
      fmt = parse_fmt(body);
      have_fmt = true;
    } else if (id == "data") {
      data = body;
      have_data = true;
    }
  }
  if (!have_fmt) fail(ErrorCode::kMalformedHeader, "missing fmt chunk");
  if (!have_data) fail(ErrorCode::kMalformedHeader, "missing data chunk");
  if (fmt.channels == 0 || fmt.rate == 0) fail(ErrorCode::kMalformedHeader, "zero channels or rate");

  const bool pcm16 = fmt.format == kFormatPcm && fmt.bits == 16;
  const bool float32 = fmt.format == kFormatFloat && fmt.bits == 32;
  if (!pcm16 && !float32) {
    fail(ErrorCode::kUnsupportedEncoding, "unsupported encoding: format " +
                                              std::to_string(fmt.format) + ", " +
                                              std::to_string(fmt.bits) + " bits");
  }
  const std::size_t sample_bytes = fmt.bits / 8;
  const std::size_t frame_bytes = sample_bytes * fmt.channels;
  const std::size_t frames = data.size() / frame_bytes;
  if (frames == 0) fail(ErrorCode::kEmptyAudio, "data chunk holds no samples");

  AudioClip clip;
  clip.sample_rate = static_cast<int>(fmt.rate);
  clip.samples.resize(frames);
  detail::ByteReader d(data, ErrorCode::kMalformedHeader);
  const double inv_channels = 1.0 / fmt.channels;
  for (std::size_t i = 0; i < frames; ++i) {
    double acc = 0.0;
    for (std::uint16_t c = 0; c < fmt.channels; ++c) {
      acc += pcm16 ? d.i16() / 32768.0 : static_cast<double>(d.f32());
    }
    clip.samples[i] = static_cast<float>(acc * inv_channels);
  }
  return clip;
}

AudioClip load_wav(const std::filesystem::path& path) {
  const auto bytes = detail::read_file(path.string());
  return decode_wav(bytes);
}

std::vector<std::uint8_t> encode_wav_pcm16(const AudioClip& clip) {
  const auto n = static_cast<std::uint32_t>(clip.samples.size());
  detail::ByteWriter w;
  w.raw("RIFF");
  w.u32(36 + n * 2);
  w.raw("WAVE");
  w.raw("fmt ");
  w.u32(16);
  w.u16(kFormatPcm);
  w.u16(1);
  w.u32(static_cast<std::uint32_t>(clip.sample_rate));
  w.u32(static_cast<std::uint32_t>(clip.sample_rate) * 2);
  w.u16(2);
  w.u16(16);
  w.raw("data");
  w.u32(n * 2);
  for (float s : clip.samples) {
    const double scaled = std::round(static_cast<double>(s) * 32768.0);
    w.i16(static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0)));
  }
  return std::move(w.bytes());
}

void save_wav_pcm16(const std::filesystem::path& path, const AudioClip& clip) {
  detail::write_file(path.string(), encode_wav_pcm16(clip));
}

}  // namespace asc::audio
