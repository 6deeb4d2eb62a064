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
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "asc/audio/audio_clip.hpp"
#include "asc/random.hpp"

namespace asc::synth {

struct Tone {
  double freq_hz;
  double amplitude;
};

/// Recipe for one scene class: tones, coloured noise and transient bursts.
struct SceneSpec {
  int class_id = 0;
  std::vector<Tone> tones;
  double noise_slope_db_per_octave = 0.0;
  double noise_gain = 0.0;  // noise RMS relative to a unit sine's RMS
  double event_rate = 0.0;  // bursts per second (Poisson)
  double event_gain = 0.0;

  void validate() const;
};

/// One preset per class (10 total); randomness only moves phases and timings.
const std::vector<SceneSpec>& scene_presets();

struct DeviceProfile {
  std::string device_id;
  std::vector<std::pair<double, double>> response_db;  // (Hz, dB) knots, linear between
  double noise_floor_db = -std::numeric_limits<double>::infinity();

  void validate() const;
  /// Gain in dB at hz, held flat beyond the outer knots.
  double gain_db(double hz) const;
};

/// A flat, B and C mild tilts, S1-S3 aggressive shelves.
const std::vector<DeviceProfile>& device_presets();
const DeviceProfile& device_preset(const std::string& id);

/// Sum of tones + coloured noise + bursts, peak-normalised to 0.9.
audio::AudioClip synth_clip(const SceneSpec& spec, double duration_s, Rng& rng,
                            int sample_rate = audio::kPipelineRate);

/// Frequency-domain gain curve plus white noise at the noise floor (dBFS).
audio::AudioClip apply_device(const audio::AudioClip& clip, const DeviceProfile& profile, Rng& rng);

struct ManifestRow {
  std::string path;  // relative to the manifest's directory
  int scene_label = 0;
  std::string device_id;
  std::string split;  // "train" or "eval"
};

void write_manifest(const std::filesystem::path& path, const std::vector<ManifestRow>& rows);
std::vector<ManifestRow> read_manifest(const std::filesystem::path& path);

struct DatasetConfig {
  std::size_t n_per_class = 2;       // train sources per class, each recorded on every train device
  std::size_t n_eval_per_class = 2;  // eval sources per class, each recorded on every eval device
  std::vector<std::string> train_devices{"A", "B", "C"};
  std::vector<std::string> eval_devices{"A", "B", "C", "S1", "S2", "S3"};
  double duration_s = 10.0;
  std::uint64_t seed = 0;
};

/// Writes WAVs under out_dir/{train,eval}/ and out_dir/manifest.csv.
std::vector<ManifestRow> make_dataset(const DatasetConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace asc::synth
