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

#include "asc/synth/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "../fft.hpp"
#include "asc/audio/wav_io.hpp"
#include "asc/error.hpp"

namespace asc::synth {
namespace {

constexpr double kPeak = 0.9;
constexpr double kTopHz = 16000.0;

std::uint64_t tag_of(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) h = (h ^ c) * 1099511628211ULL;
  return h;
}

// White Gaussian noise shaped to slope dB/octave (0 dB at 1 kHz) and scaled to
// unit RMS.
std::vector<double> coloured_noise(std::size_t n, double slope, int sample_rate, Rng& rng) {
  detail::RealFft fwd(n);
  std::normal_distribution<double> gauss;
  for (auto& v : fwd.input()) v = gauss(rng);
  fwd.execute();
  detail::InverseRealFft inv(n);
  auto spec = fwd.output();
  auto dst = inv.input();
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const double hz = std::max(static_cast<double>(k) * sample_rate / static_cast<double>(n), 20.0);
    dst[k] = spec[k] * std::pow(10.0, slope * std::log2(hz / 1000.0) / 20.0);
  }
  dst[0] = 0.0;
  inv.execute();
  std::vector<double> out(inv.output().begin(), inv.output().end());
  double ss = 0.0;
  for (double v : out) ss += v * v;
  const double rms = std::sqrt(ss / static_cast<double>(n));
  if (rms > 0.0) {
    for (double& v : out) v /= rms;
  }
  return out;
}

}  // namespace

void SceneSpec::validate() const {
  if (tones.empty()) fail(ErrorCode::kValidationError, "a scene needs at least one tonal component");
  for (const auto& t : tones) {
    if (!(t.freq_hz > 0.0 && t.freq_hz < kTopHz)) fail(ErrorCode::kValidationError, "tone frequency outside (0, 16 kHz)");
  }
  if (noise_gain < 0.0 || event_rate < 0.0 || event_gain < 0.0) {
    fail(ErrorCode::kValidationError, "scene gains and rates must be non-negative");
  }
}

const std::vector<SceneSpec>& scene_presets() {
  // Every class has a fundamental below 1.2 kHz plus one higher partial, and
  // its own noise colour and event density.
  static const std::vector<SceneSpec> presets = {
      {0, {{110.0, 0.5}, {2500.0, 0.1}}, -3.0, 0.2, 0.2, 0.5},
      {1, {{165.0, 0.5}, {5000.0, 0.15}}, -6.0, 0.3, 1.0, 0.6},
      {2, {{247.0, 0.4}, {740.0, 0.2}}, 0.0, 0.15, 0.0, 0.0},
      {3, {{330.0, 0.5}, {8000.0, 0.1}}, -3.0, 0.25, 3.0, 0.5},
      {4, {{440.0, 0.4}, {1200.0, 0.2}}, -9.0, 0.4, 0.5, 0.8},
      {5, {{587.0, 0.4}, {3500.0, 0.2}}, -3.0, 0.1, 0.0, 0.0},
      {6, {{698.0, 0.3}, {11000.0, 0.1}}, 3.0, 0.2, 1.5, 0.4},
      {7, {{880.0, 0.4}, {262.0, 0.2}}, -6.0, 0.2, 5.0, 0.5},
      {8, {{1047.0, 0.4}, {6500.0, 0.15}}, 0.0, 0.3, 0.3, 0.7},
      {9, {{196.0, 0.3}, {1568.0, 0.3}}, -12.0, 0.5, 2.0, 0.6},
  };
  return presets;
}

void DeviceProfile::validate() const {
  if (device_id.empty()) fail(ErrorCode::kValidationError, "device id must not be empty");
  if (response_db.empty()) fail(ErrorCode::kValidationError, "device response needs at least one knot");
  double prev = -1.0;
  for (const auto& [hz, db] : response_db) {
    if (hz < prev) fail(ErrorCode::kValidationError, "device response knots must be sorted by frequency");
    if (hz < 0.0 || hz > kTopHz) fail(ErrorCode::kValidationError, "device response knot outside [0, 16 kHz]");
    if (db < -40.0 || db > 12.0) fail(ErrorCode::kValidationError, "device gain outside [-40, +12] dB");
    prev = hz;
  }
}

double DeviceProfile::gain_db(double hz) const {
  if (hz <= response_db.front().first) return response_db.front().second;
  if (hz >= response_db.back().first) return response_db.back().second;
  auto hi = std::upper_bound(response_db.begin(), response_db.end(), hz,
                             [](double f, const auto& knot) { return f < knot.first; });
  auto lo = hi - 1;
  const double span = hi->first - lo->first;
  if (span <= 0.0) return hi->second;
  const double w = (hz - lo->first) / span;
  return lo->second + w * (hi->second - lo->second);
}

const std::vector<DeviceProfile>& device_presets() {
  static const std::vector<DeviceProfile> presets = [] {
    std::vector<DeviceProfile> p = {
        {"A", {{0.0, 0.0}, {16000.0, 0.0}}, -90.0},
        {"B", {{0.0, 0.0}, {16000.0, -8.0}}, -75.0},
        {"C", {{0.0, -8.0}, {1000.0, 0.0}, {16000.0, 0.0}}, -75.0},
        {"S1", {{0.0, 0.0}, {3800.0, 0.0}, {4000.0, -40.0}, {16000.0, -40.0}}, -60.0},
        {"S2", {{0.0, -30.0}, {300.0, -30.0}, {600.0, 0.0}, {6000.0, 0.0}, {8000.0, -20.0}, {16000.0, -20.0}}, -60.0},
        {"S3", {{0.0, -35.0}, {250.0, -35.0}, {500.0, 0.0}, {3400.0, 0.0}, {4000.0, -35.0}, {16000.0, -35.0}}, -55.0},
    };
    for (const auto& d : p) d.validate();
    return p;
  }();
  return presets;
}

const DeviceProfile& device_preset(const std::string& id) {
  for (const auto& d : device_presets()) {
    if (d.device_id == id) return d;
  }
  fail(ErrorCode::kValidationError, "unknown device preset '" + id + "'");
}

audio::AudioClip synth_clip(const SceneSpec& spec, double duration_s, Rng& rng, int sample_rate) {
  spec.validate();
  if (!(duration_s > 0.0)) fail(ErrorCode::kValidationError, "duration must be positive");
  const auto n = static_cast<std::size_t>(std::llround(duration_s * sample_rate));
  std::vector<double> x(n, 0.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  for (const auto& t : spec.tones) {
    const double phi = phase(rng);
    const double w = 2.0 * std::numbers::pi * t.freq_hz / sample_rate;
    for (std::size_t i = 0; i < n; ++i) x[i] += t.amplitude * std::sin(w * static_cast<double>(i) + phi);
  }
  if (spec.noise_gain > 0.0) {
    const auto noise = coloured_noise(n, spec.noise_slope_db_per_octave, sample_rate, rng);
    const double scale = spec.noise_gain / std::numbers::sqrt2;
    for (std::size_t i = 0; i < n; ++i) x[i] += scale * noise[i];
  }
  if (spec.event_rate > 0.0 && spec.event_gain > 0.0) {
    std::exponential_distribution<double> gap(spec.event_rate);
    std::normal_distribution<double> gauss;
    const auto burst = static_cast<std::size_t>(0.05 * sample_rate);
    const double tau = 0.01 * sample_rate;
    for (double t = gap(rng); t < duration_s; t += gap(rng)) {
      const auto start = static_cast<std::size_t>(t * sample_rate);
      for (std::size_t k = 0; k < burst && start + k < n; ++k) {
        x[start + k] += spec.event_gain * std::exp(-static_cast<double>(k) / tau) * gauss(rng);
      }
    }
  }
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::abs(v));
  audio::AudioClip clip;
  clip.sample_rate = sample_rate;
  clip.scene_label = spec.class_id;
  clip.samples.resize(n);
  const double g = peak > 0.0 ? kPeak / peak : 0.0;
  for (std::size_t i = 0; i < n; ++i) clip.samples[i] = static_cast<float>(x[i] * g);
  return clip;
}

audio::AudioClip apply_device(const audio::AudioClip& clip, const DeviceProfile& profile, Rng& rng) {
  profile.validate();
  if (clip.sample_rate != audio::kPipelineRate) fail(ErrorCode::kValidationError, "device simulation runs at 32 kHz");
  const std::size_t n = clip.samples.size();
  if (n == 0) fail(ErrorCode::kEmptyAudio, "cannot record an empty clip");
  detail::RealFft fwd(n);
  std::copy(clip.samples.begin(), clip.samples.end(), fwd.input().begin());
  fwd.execute();
  detail::InverseRealFft inv(n);
  auto spec = fwd.output();
  auto dst = inv.input();
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const double hz = static_cast<double>(k) * clip.sample_rate / static_cast<double>(n);
    dst[k] = spec[k] * std::pow(10.0, profile.gain_db(hz) / 20.0) / static_cast<double>(n);
  }
  inv.execute();
  audio::AudioClip out = clip;
  out.device_id = profile.device_id;
  const auto y = inv.output();
  const bool noisy = std::isfinite(profile.noise_floor_db);
  const double sigma = noisy ? std::pow(10.0, profile.noise_floor_db / 20.0) : 0.0;
  std::normal_distribution<double> gauss;
  for (std::size_t i = 0; i < n; ++i) {
    out.samples[i] = static_cast<float>(y[i] + (noisy ? sigma * gauss(rng) : 0.0));
  }
  return out;
}

void write_manifest(const std::filesystem::path& path, const std::vector<ManifestRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIOFailure, "cannot write " + path.string());
  out << "path,scene_label,device_id,split\n";
  for (const auto& r : rows) out << r.path << ',' << r.scene_label << ',' << r.device_id << ',' << r.split << "\n";
  if (!out) fail(ErrorCode::kIOFailure, "write failed for " + path.string());
}

std::vector<ManifestRow> read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIOFailure, "cannot open manifest " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("path,scene_label,device_id,split", 0) != 0) {
    fail(ErrorCode::kValidationError, "manifest header must be path,scene_label,device_id,split");
  }
  std::vector<ManifestRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cols.push_back(cell);
    if (cols.size() != 4) fail(ErrorCode::kValidationError, "manifest line " + std::to_string(line_no) + ": expected 4 columns");
    ManifestRow r;
    r.path = cols[0];
    try {
      r.scene_label = std::stoi(cols[1]);
    } catch (const std::exception&) {
      fail(ErrorCode::kValidationError, "manifest line " + std::to_string(line_no) + ": bad scene label");
    }
    r.device_id = cols[2];
    r.split = cols[3];
    if (r.split != "train" && r.split != "eval") {
      fail(ErrorCode::kValidationError, "manifest line " + std::to_string(line_no) + ": split must be train or eval");
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<ManifestRow> make_dataset(const DatasetConfig& cfg, const std::filesystem::path& out_dir) {
  if (cfg.train_devices.empty() || cfg.eval_devices.empty()) {
    fail(ErrorCode::kValidationError, "train and eval device sets must be non-empty");
  }
  for (const auto& d : cfg.train_devices) device_preset(d);
  for (const auto& d : cfg.eval_devices) device_preset(d);
  std::error_code ec;
  std::filesystem::create_directories(out_dir / "train", ec);
  std::filesystem::create_directories(out_dir / "eval", ec);
  if (ec) fail(ErrorCode::kIOFailure, "cannot create " + out_dir.string() + ": " + ec.message());

  std::vector<ManifestRow> rows;
  const auto& scenes = scene_presets();
  auto emit = [&](const std::string& split, std::size_t per_class, const std::vector<std::string>& devices) {
    const std::uint64_t split_tag = tag_of(split);
    for (const auto& scene : scenes) {
      for (std::size_t i = 0; i < per_class; ++i) {
        auto src_rng = make_rng(cfg.seed, {split_tag, static_cast<std::uint64_t>(scene.class_id), i});
        const auto source = synth_clip(scene, cfg.duration_s, src_rng);
        for (const auto& dev : devices) {
          auto dev_rng = make_rng(cfg.seed, {split_tag, static_cast<std::uint64_t>(scene.class_id), i, tag_of(dev)});
          const auto rec = apply_device(source, device_preset(dev), dev_rng);
          char name[64];
          std::snprintf(name, sizeof(name), "%02d_%03zu_%s.wav", scene.class_id, i, dev.c_str());
          const std::string rel = split + "/" + name;
          audio::save_wav_pcm16(out_dir / rel, rec);
          rows.push_back({rel, scene.class_id, dev, split});
        }
      }
    }
  };
  emit("train", cfg.n_per_class, cfg.train_devices);
  emit("eval", cfg.n_eval_per_class, cfg.eval_devices);
  write_manifest(out_dir / "manifest.csv", rows);
  return rows;
}

}  // namespace asc::synth
