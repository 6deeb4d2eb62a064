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

#include <charconv>
#include <fstream>
#include <sstream>

#include "asc/cli/cli.hpp"

namespace asc::cli {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || v.empty()) {
    fail(ErrorCode::kConfigError, key + ": expected a non-negative integer, got '" + v + "'");
  }
  return out;
}

}  // namespace

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfigError:
    case ErrorCode::kUnknownVariant: return kExitConfig;
    case ErrorCode::kIOFailure: return kExitIo;
    default: return kExitValidation;
  }
}

const std::vector<KeySpec>& config_keys() {
  static const std::vector<KeySpec> keys{
      {"seed", "0", "master seed for every random stream"},
      // synth
      {"n_per_class", "2", "training sources per scene class"},
      {"n_eval_per_class", "2", "evaluation sources per scene class"},
      {"train_devices", "A,B,C", "devices that record the training sources"},
      {"eval_devices", "A,B,C,S1,S2,S3", "devices that record the evaluation sources"},
      {"duration_s", "10", "clip length in seconds"},
      // features
      {"frontend", "logmel", "logmel, cqt or gam"},
      {"split", "all", "manifest rows to use: train, eval or all"},
      // model
      {"variant", "baseline", "baseline, red01, red02, red03 or custom"},
      {"widths", "8,16,32,64", "custom variant channel widths (inception, block1..3)"},
      {"pooling", "per_channel", "pooling block layout: per_channel or flatten"},
      // training
      {"batch_size", "100", "mini-batch size"},
      {"epochs", "100", "total epochs"},
      {"phase1_epochs", "80", "epochs with augmentation and the phase-1 rate"},
      {"lr_phase1", "1e-4", "learning rate in phase 1"},
      {"lr_phase2", "1e-6", "learning rate in phase 2"},
      {"l2_lambda", "1e-4", "L2 coefficient on convolution and dense kernels"},
      {"max_steps", "0", "stop after this many optimiser steps (0: no limit)"},
      {"checkpoint_every", "0", "save weights every N epochs (0: off)"},
      {"checkpoint_dir", "", "directory for checkpoints"},
      {"recalibrate_bn", "false", "re-estimate BN statistics on the training set after training"},
      {"mask_len", "10", "SpecAugment mask length in bins or frames (0: off)"},
      {"masks_per_axis", "1", "SpecAugment masks per sample"},
      {"mixup_alpha", "0.4", "mixup Beta(alpha, alpha) parameter"},
      {"mixup_dist", "beta", "mixup ratio distribution: beta or uniform"},
      // evaluation
      {"eval_batch", "32", "batch size for inference"},
  };
  return keys;
}

RunConfig::RunConfig() {
  for (const auto& k : config_keys()) values_[k.key] = k.default_value;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  auto it = values_.find(key);
  if (it == values_.end()) fail(ErrorCode::kConfigError, "unknown config key '" + key + "'");
  it->second = value;
}

const std::string& RunConfig::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) fail(ErrorCode::kConfigError, "unknown config key '" + key + "'");
  return it->second;
}

std::uint64_t RunConfig::get_u64(const std::string& key) const { return parse_u64(key, get(key)); }

std::size_t RunConfig::get_size(const std::string& key) const { return static_cast<std::size_t>(get_u64(key)); }

double RunConfig::get_double(const std::string& key) const {
  const auto& v = get(key);
  double out = 0.0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || v.empty()) {
    fail(ErrorCode::kConfigError, key + ": expected a number, got '" + v + "'");
  }
  return out;
}

bool RunConfig::get_bool(const std::string& key) const {
  const auto& v = get(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  fail(ErrorCode::kConfigError, key + ": expected true or false, got '" + v + "'");
}

std::vector<std::string> RunConfig::get_list(const std::string& key) const {
  std::vector<std::string> out;
  std::stringstream ss(get(key));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<std::size_t> RunConfig::get_size_list(const std::string& key) const {
  std::vector<std::size_t> out;
  for (const auto& item : get_list(key)) out.push_back(static_cast<std::size_t>(parse_u64(key, item)));
  return out;
}

std::string RunConfig::dump(const std::vector<std::string>& keys) const {
  std::string out;
  for (const auto& k : keys) out += k + " = " + get(k) + "\n";
  return out;
}

void apply_config_text(RunConfig& cfg, std::string_view text, const std::string& source) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      fail(ErrorCode::kConfigError, source + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    try {
      cfg.set(key, trim(std::string_view(body).substr(eq + 1)));
    } catch (const Error& e) {
      fail(ErrorCode::kConfigError, source + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void apply_config_file(RunConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIOFailure, "cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  apply_config_text(cfg, ss.str(), path.string());
}

}  // namespace asc::cli
