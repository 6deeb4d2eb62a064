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

#include "asc/model/arch.hpp"

#include "asc/error.hpp"

namespace asc::model {

void ArchConfig::validate() const {
  auto bad = [](const std::string& why) { fail(ErrorCode::kConfigMismatch, why); };
  if (n_classes < 2) bad("at least two classes are required");
  if (!(dropout_fc >= 0.0 && dropout_fc < 1.0) || !(dropout_block >= 0.0 && dropout_block < 1.0)) {
    bad("dropout ratios must lie in [0, 1)");
  }
  if (head_hidden && *head_hidden == 0) bad("hidden FC width must be positive");
  if (variant == Variant::kEmbedding) {
    if (embedding_dim == 0) bad("embedding dimension must be positive");
    return;
  }
  if (inception_channels.empty()) bad("the inception block needs at least one unit");
  for (auto c : inception_channels) {
    if (c < 3) bad("Inc01 width must cover its three branches");
  }
  if (incres_channels.size() != 3 || incres_K.size() != 3) bad("exactly three Inc-Res blocks are expected");
  for (std::size_t b = 0; b < 3; ++b) {
    if (incres_channels[b].empty()) bad("every Inc-Res block needs at least one unit");
    for (auto c : incres_channels[b]) {
      if (c == 0) bad("Inc-Res width must be positive");
    }
    if (incres_K[b] < 2) bad("Inc-Res kernel size must be at least 2 (K = 1 collapses the three branches)");
  }
  if (in_channels == 0) bad("input needs at least one channel");
  // Four 2x2 max pools follow the blocks.
  if (in_freq < 16 || in_time < 16) bad("input must be at least 16x16 to survive four 2x2 pools");
}

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::kBaseline: return "baseline";
    case Variant::kRed01: return "red01";
    case Variant::kRed02: return "red02";
    case Variant::kRed03: return "red03";
    case Variant::kCustom: return "custom";
    case Variant::kEmbedding: return "embedding";
  }
  return "unknown";
}

ArchConfig make_reduced_arch(const std::vector<std::size_t>& widths) {
  if (widths.size() != 4) fail(ErrorCode::kConfigMismatch, "a reduced plan lists four widths");
  ArchConfig cfg;
  cfg.variant = Variant::kCustom;
  cfg.inception_channels = {widths[0]};
  cfg.incres_channels = {{widths[1]}, {widths[2]}, {widths[3]}};
  cfg.head_hidden.reset();
  return cfg;
}

ArchConfig make_arch(Variant v) {
  ArchConfig cfg;
  switch (v) {
    case Variant::kBaseline: break;
    case Variant::kRed01: cfg = make_reduced_arch({64, 128, 256, 512}); break;
    case Variant::kRed02: cfg = make_reduced_arch({32, 64, 128, 256}); break;
    case Variant::kRed03: cfg = make_reduced_arch({16, 32, 64, 128}); break;
    default: fail(ErrorCode::kUnknownVariant, "no preset for variant " + std::string(to_string(v)));
  }
  cfg.variant = v;
  return cfg;
}

ArchConfig make_arch(std::string_view name) {
  if (name == "baseline") return make_arch(Variant::kBaseline);
  if (name == "red01") return make_arch(Variant::kRed01);
  if (name == "red02") return make_arch(Variant::kRed02);
  if (name == "red03") return make_arch(Variant::kRed03);
  fail(ErrorCode::kUnknownVariant, "unknown variant '" + std::string(name) + "'");
}

ArchConfig make_embedding_arch(std::size_t dim, std::size_t n_classes) {
  ArchConfig cfg;
  cfg.variant = Variant::kEmbedding;
  cfg.embedding_dim = dim;
  cfg.n_classes = n_classes;
  cfg.head_hidden = 1024;
  cfg.inception_channels.clear();
  cfg.incres_channels.clear();
  cfg.incres_K.clear();
  return cfg;
}

std::optional<double> published_param_count(Variant v) {
  switch (v) {
    case Variant::kBaseline: return 9.6e6;
    case Variant::kRed01: return 3.2e6;
    case Variant::kRed02: return 0.8e6;
    case Variant::kRed03: return 0.2e6;
    default: return std::nullopt;
  }
}

}  // namespace asc::model
