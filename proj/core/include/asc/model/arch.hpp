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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace asc::model {

enum class Variant { kBaseline, kRed01, kRed02, kRed03, kCustom, kEmbedding };

/// How the Pooling Block collapses the backbone output [B,F,T,C].
enum class PoolingLayout {
  /// Three C-vectors: mean over (F,T); max over T of the F-mean; F-mean of
  /// the max over T. Head input 3*C.
  kPerChannel,
  /// avg over C -> F*T, max over T -> F*C, avg over F -> T*C, concatenated.
  kFlatten,
};

struct ArchConfig {
  Variant variant = Variant::kBaseline;
  std::vector<std::size_t> inception_channels{64, 64};  // one entry per Inc01 unit
  std::vector<std::vector<std::size_t>> incres_channels{{128, 128}, {256, 256}, {512, 512}};
  std::vector<std::size_t> incres_K{3, 3, 3};
  std::optional<std::size_t> head_hidden = 1024;
  std::size_t n_classes = 10;
  double dropout_fc = 0.2;
  double dropout_block = 0.1;
  double rn_lambda = 0.4;
  PoolingLayout pooling = PoolingLayout::kPerChannel;
  std::size_t in_freq = 128;
  std::size_t in_time = 256;
  std::size_t in_channels = 3;
  std::size_t embedding_dim = 0;  // kEmbedding only

  /// Throws ConfigMismatch on an inconsistent plan.
  void validate() const;
};

std::string_view to_string(Variant v);
/// "baseline", "red01", "red02", "red03" (UnknownVariant otherwise).
ArchConfig make_arch(std::string_view name);
ArchConfig make_arch(Variant v);

/// Single-unit blocks with the given widths [inception, block1, block2, block3]
/// and no hidden FC layer.
ArchConfig make_reduced_arch(const std::vector<std::size_t>& widths);

/// FC[1024] -> ReLU -> Dr(0.2) -> FC[n_classes] over raw embedding vectors.
ArchConfig make_embedding_arch(std::size_t dim, std::size_t n_classes = 10);

/// Published trainable-parameter totals for the four named variants.
std::optional<double> published_param_count(Variant v);

}  // namespace asc::model
