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
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "asc/augment/augment.hpp"
#include "asc/frontend/feature_cache.hpp"
#include "asc/model/network.hpp"
#include "asc/tensor/graph.hpp"

namespace asc::train {

enum class L2Scope { kWeightsOnly, kAllParameters };

struct TrainConfig {
  std::size_t batch_size = 100;
  std::size_t epochs = 100;
  std::size_t phase1_epochs = 80;
  double lr_phase1 = 1e-4;
  double lr_phase2 = 1e-6;
  double l2_lambda = 1e-4;
  L2Scope l2_scope = L2Scope::kWeightsOnly;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  std::uint64_t seed = 0;
  std::size_t checkpoint_every = 0;  // epochs; 0 disables
  // After the last epoch, replace the BN moving statistics by their average
  // over centre-cropped training batches. Off by default.
  bool recalibrate_bn = false;
  std::filesystem::path checkpoint_dir;

  void validate() const;
};

/// Summed KL(y || y_hat) over rows plus (lambda/2) * theta_sq_norm.
/// y_hat must be strictly positive (NonPositivePrediction).
double kl_loss(std::span<const double> y, std::span<const double> y_hat, std::size_t n_classes,
               double lambda, double theta_sq_norm);

/// Sum of squared entries over the parameters selected by scope.
double l2_norm_sq(std::span<nn::Parameter<float>* const> params, L2Scope scope);

template <typename T>
struct OptimizerState {
  std::vector<nn::Tensor<T>> m;
  std::vector<nn::Tensor<T>> v;
  std::uint64_t t = 0;
};

/// One bias-corrected Adam update from each parameter's grad field.
template <typename T>
void adam_step(std::span<nn::Parameter<T>* const> params, OptimizerState<T>& state, double lr,
               double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

struct Schedule {
  double lr;
  bool augment;
};

/// Phase 1 (augmented, lr_phase1) for epochs [0, phase1_epochs), then
/// phase 2. EpochOutOfRange outside [0, epochs).
Schedule lr_schedule(std::size_t epoch, const TrainConfig& cfg = {});

/// Features [N, F, T, C] with integer labels.
struct TrainingSet {
  std::size_t freq = 0, time = 0, channels = 0, n_classes = 10;
  std::vector<float> features;
  std::vector<int> labels;
  std::vector<std::string> devices;

  std::size_t size() const noexcept { return labels.size(); }
  std::size_t sample_size() const noexcept { return freq * time * channels; }
  void validate() const;
};

TrainingSet from_cache(const frontend::FeatureCache& cache, std::size_t n_classes = 10);

struct HistoryRow {
  std::size_t epoch = 0;
  int phase = 1;
  double lr = 0.0;
  double loss = 0.0;       // mean over steps of (batch KL + L2 term) / batch size
  double train_acc = 0.0;  // on the (augmented) training batches, train-mode forward
};

struct StepInfo {
  std::size_t epoch;
  std::size_t step;  // global, counting from 0
  double loss;
  double accuracy;
  double lr;
};

/// Return false to stop training after the current step.
using StepCallback = std::function<bool(const StepInfo&)>;

struct FitResult {
  std::vector<HistoryRow> history;
  std::size_t steps = 0;
  bool stopped_early = false;
};

/// Trains net in place. Phase-1 batches go through crop, mask and mixup;
/// phase-2 batches are centre-cropped only.
FitResult fit(model::Network& net, const TrainingSet& data, const TrainConfig& cfg,
              const augment::AugmentConfig& aug, const StepCallback& on_step = {});

/// Re-estimates every BN moving mean/variance as the average of per-batch
/// statistics over the centre-cropped set, in dataset order.
void recalibrate_bn(model::Network& net, const TrainingSet& data, std::size_t batch_size);

/// Eval-mode probabilities [N, n_classes] for every sample, centre-cropped
/// to the network's input width and run in batches.
std::vector<float> predict_set(model::Network& net, const TrainingSet& data, std::size_t batch_size = 32);

void write_history_csv(const std::filesystem::path& path, const std::vector<HistoryRow>& history);

}  // namespace asc::train
