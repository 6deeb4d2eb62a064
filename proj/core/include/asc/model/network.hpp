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
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "asc/model/arch.hpp"
#include "asc/tensor/graph.hpp"
#include "asc/tensor/weights_io.hpp"

namespace asc::model {

struct LayerDesc {
  std::string name;
  std::string kind;
  nn::Shape input;  // batch axis omitted
  nn::Shape output;
  std::size_t params = 0;
};

struct NetworkSpec {
  std::vector<LayerDesc> layers;
  nn::Shape input;
  nn::Shape output;
  std::size_t total_params = 0;
};

/// Trainable tensor count (kernels, biases, BN gamma/beta, FC weights).
/// BN moving statistics are not counted.
std::size_t count_parameters(const NetworkSpec& spec);

std::string summary_text(const NetworkSpec& spec);
std::string summary_csv(const NetworkSpec& spec);

/// A built network: parameters, BN moving statistics and the static layer
/// table. Parameter addresses are stable for the lifetime of the object.
class Network {
 public:
  /// Builds the network and He-uniform initialises it from seed.
  Network(const ArchConfig& cfg, std::uint64_t seed);

  /// Builds the layer table only; predict() throws WeightsNotLoaded until
  /// load_state() or load() succeeds.
  static Network uninitialized(const ArchConfig& cfg);

  Network(Network&&) noexcept = default;
  Network& operator=(Network&&) noexcept = default;

  const ArchConfig& config() const noexcept { return cfg_; }
  const NetworkSpec& spec() const noexcept { return spec_; }
  bool weights_loaded() const noexcept { return loaded_; }

  std::vector<nn::Parameter<float>*> parameters();
  std::vector<const nn::Parameter<float>*> parameters() const;

  /// Logits [B, n_classes]. Train-mode graphs update the BN moving stats.
  nn::Var forward(nn::Graph<float>& g, nn::Var x);

  /// Statistics-only train-mode pass (dropout off): folds the batch's BN
  /// statistics into the moving averages with weight 1/(batch_index+1), so
  /// calling it for batches 0..K-1 leaves the mean over those batches.
  void accumulate_bn_stats(const nn::Tensor<float>& batch, std::size_t batch_index);

  /// Eval-mode softmax probabilities [B, n_classes].
  nn::Tensor<float> predict(const nn::Tensor<float>& batch);

  /// Parameters followed by BN moving statistics, in build order.
  std::vector<nn::NamedTensor> state() const;
  /// Every name must be present with a matching shape (ConfigMismatch).
  void load_state(const std::vector<nn::NamedTensor>& entries);

  void save(const std::filesystem::path& path) const;
  void load(const std::filesystem::path& path);

 private:
  friend struct ShapeEmitter;
  friend struct GraphEmitter;
  Network(const ArchConfig& cfg, std::uint64_t seed, bool init);

  ArchConfig cfg_;
  NetworkSpec spec_;
  std::vector<std::unique_ptr<nn::Parameter<float>>> params_;
  std::map<std::string, std::size_t> param_index_;
  std::vector<std::string> stats_order_;
  std::map<std::string, nn::RunningStats<float>> stats_;
  bool loaded_ = false;
};

}  // namespace asc::model
