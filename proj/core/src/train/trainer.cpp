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

#include "asc/train/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "asc/error.hpp"
#include "asc/random.hpp"
#include "asc/tensor/ops.hpp"

namespace asc::train {
namespace {

constexpr std::uint64_t kShuffleTag = 0x5348;
constexpr std::uint64_t kDropoutTag = 0x4452;
constexpr std::uint64_t kAugmentTag = 0x4147;

std::size_t argmax(const float* row, std::size_t n) {
  return static_cast<std::size_t>(std::max_element(row, row + n) - row);
}

}  // namespace

void TrainConfig::validate() const {
  auto bad = [](const std::string& why) { fail(ErrorCode::kValidationError, why); };
  if (batch_size == 0) bad("batch size must be positive");
  if (epochs == 0) bad("at least one epoch is required");
  if (phase1_epochs > epochs) bad("phase-1 epochs exceed the total epoch count");
  if (!(lr_phase1 >= 0.0) || !(lr_phase2 >= 0.0)) bad("learning rates must be non-negative");
  if (!(l2_lambda >= 0.0)) bad("L2 weight must be non-negative");
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) || !(adam_beta2 >= 0.0 && adam_beta2 < 1.0)) {
    bad("Adam betas must lie in [0, 1)");
  }
  if (!(adam_eps > 0.0)) bad("Adam epsilon must be positive");
}

double kl_loss(std::span<const double> y, std::span<const double> y_hat, std::size_t n_classes,
               double lambda, double theta_sq_norm) {
  if (y.size() != y_hat.size() || n_classes == 0 || y.size() % n_classes != 0) {
    fail(ErrorCode::kShapeMismatch, "kl_loss: label and prediction arrays disagree");
  }
  double loss = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!(y_hat[i] > 0.0)) fail(ErrorCode::kNonPositivePrediction, "prediction entries must be strictly positive");
    if (y[i] > 0.0) loss += y[i] * std::log(y[i] / y_hat[i]);
  }
  return loss + 0.5 * lambda * theta_sq_norm;
}

double l2_norm_sq(std::span<nn::Parameter<float>* const> params, L2Scope scope) {
  double acc = 0.0;
  for (const auto* p : params) {
    if (scope == L2Scope::kWeightsOnly && !p->l2_included) continue;
    for (float v : p->value.values()) acc += static_cast<double>(v) * v;
  }
  return acc;
}

template <typename T>
void adam_step(std::span<nn::Parameter<T>* const> params, OptimizerState<T>& state, double lr,
               double beta1, double beta2, double eps) {
  if (state.m.empty()) {
    for (const auto* p : params) {
      state.m.emplace_back(p->value.shape());
      state.v.emplace_back(p->value.shape());
    }
  }
  if (state.m.size() != params.size()) fail(ErrorCode::kShapeMismatch, "optimizer state belongs to other parameters");
  ++state.t;
  const double c1 = 1.0 - std::pow(beta1, static_cast<double>(state.t));
  const double c2 = 1.0 - std::pow(beta2, static_cast<double>(state.t));
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto& p = *params[k];
    auto& m = state.m[k];
    auto& v = state.v[k];
    if (p.grad.shape() != p.value.shape() || m.shape() != p.value.shape()) {
      fail(ErrorCode::kShapeMismatch, "Adam: gradient or moment shape differs for " + p.name);
    }
    for (std::size_t i = 0; i < p.value.size(); ++i) {
      const double g = p.grad[i];
      const double mi = beta1 * m[i] + (1.0 - beta1) * g;
      const double vi = beta2 * v[i] + (1.0 - beta2) * g * g;
      m[i] = static_cast<T>(mi);
      v[i] = static_cast<T>(vi);
      p.value[i] = static_cast<T>(p.value[i] - lr * (mi / c1) / (std::sqrt(vi / c2) + eps));
    }
  }
}

template void adam_step<float>(std::span<nn::Parameter<float>* const>, OptimizerState<float>&, double, double, double, double);
template void adam_step<double>(std::span<nn::Parameter<double>* const>, OptimizerState<double>&, double, double, double, double);

Schedule lr_schedule(std::size_t epoch, const TrainConfig& cfg) {
  if (epoch >= cfg.epochs) {
    fail(ErrorCode::kEpochOutOfRange, "epoch " + std::to_string(epoch) + " outside [0, " +
                                          std::to_string(cfg.epochs) + ")");
  }
  if (epoch < cfg.phase1_epochs) return {cfg.lr_phase1, true};
  return {cfg.lr_phase2, false};
}

void TrainingSet::validate() const {
  if (labels.empty()) fail(ErrorCode::kValidationError, "training set is empty");
  if (features.size() != labels.size() * sample_size()) fail(ErrorCode::kValidationError, "feature array size mismatch");
  if (!devices.empty() && devices.size() != labels.size()) fail(ErrorCode::kValidationError, "device tag count mismatch");
  for (int l : labels) {
    if (l < 0 || static_cast<std::size_t>(l) >= n_classes) {
      fail(ErrorCode::kValidationError, "label " + std::to_string(l) + " outside the class range");
    }
  }
}

TrainingSet from_cache(const frontend::FeatureCache& cache, std::size_t n_classes) {
  TrainingSet set;
  set.freq = cache.freq;
  set.time = cache.time;
  set.channels = cache.channels;
  set.n_classes = n_classes;
  set.features.reserve(cache.records.size() * set.sample_size());
  for (const auto& r : cache.records) {
    set.features.insert(set.features.end(), r.features.data().begin(), r.features.data().end());
    set.labels.push_back(r.label);
    set.devices.push_back(r.device_id);
  }
  set.validate();
  return set;
}

FitResult fit(model::Network& net, const TrainingSet& data, const TrainConfig& cfg,
              const augment::AugmentConfig& aug, const StepCallback& on_step) {
  cfg.validate();
  data.validate();
  const auto& arch = net.config();
  if (data.freq != arch.in_freq || data.channels != arch.in_channels || data.n_classes != arch.n_classes) {
    fail(ErrorCode::kConfigMismatch, "training data does not match the network input");
  }
  if (data.time < arch.in_time) fail(ErrorCode::kCropWiderThanInput, "features are shorter than the network input");
  if (cfg.checkpoint_every > 0) std::filesystem::create_directories(cfg.checkpoint_dir);

  augment::AugmentConfig crop_cfg = aug;
  crop_cfg.crop_width = arch.in_time;
  auto params = net.parameters();
  for (auto* p : params) p->zero_grad();
  OptimizerState<float> opt;
  FitResult result;
  const std::size_t n = data.size();
  const std::size_t M = data.n_classes;

  for (std::size_t epoch = 0; epoch < cfg.epochs && !result.stopped_early; ++epoch) {
    const Schedule sched = lr_schedule(epoch, cfg);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto shuffle_rng = make_rng(cfg.seed, {kShuffleTag, epoch});
    std::shuffle(order.begin(), order.end(), shuffle_rng);

    double loss_sum = 0.0;
    std::size_t correct = 0, seen = 0, batches = 0;
    for (std::size_t start = 0; start < n; start += cfg.batch_size) {
      const std::size_t B = std::min(cfg.batch_size, n - start);
      augment::LabeledBatch batch(B, data.freq, data.time, data.channels, M);
      for (std::size_t i = 0; i < B; ++i) {
        const std::size_t idx = order[start + i];
        std::copy_n(data.features.data() + idx * data.sample_size(), data.sample_size(), batch.sample(i));
        batch.label(i)[static_cast<std::size_t>(data.labels[idx])] = 1.0f;
        batch.sample_keys[i] = idx;
        if (!data.devices.empty()) batch.device_tags[i] = data.devices[idx];
      }
      const augment::AugmentStream stream{substream_seed(cfg.seed, {kAugmentTag}), epoch, result.steps};
      batch = sched.augment ? augment::augment(batch, crop_cfg, stream) : augment::center_crop(batch, arch.in_time);

      nn::Graph<float> g(nn::Mode::kTrain, substream_seed(cfg.seed, {kDropoutTag, result.steps}));
      const nn::Var x = g.constant(nn::Tensor<float>({B, batch.freq, batch.time, batch.channels}, std::move(batch.features)));
      const nn::Var logits = net.forward(g, x);
      const nn::Tensor<float> targets({B, M}, batch.labels);
      const nn::Var kl = nn::softmax_kl(g, logits, targets);
      // The summed loss is divided by the batch size before differentiation.
      g.backward(nn::scale(g, kl, 1.0 / static_cast<double>(B)));

      const double l2 = l2_norm_sq(params, cfg.l2_scope);
      if (cfg.l2_lambda > 0.0) {
        const float k = static_cast<float>(cfg.l2_lambda / static_cast<double>(B));
        for (auto* p : params) {
          if (cfg.l2_scope == L2Scope::kWeightsOnly && !p->l2_included) continue;
          for (std::size_t i = 0; i < p->value.size(); ++i) p->grad[i] += k * p->value[i];
        }
      }
      const double step_loss = (g.value(kl)[0] + 0.5 * cfg.l2_lambda * l2) / static_cast<double>(B);

      std::size_t step_correct = 0;
      const auto& Z = g.value(logits);
      for (std::size_t i = 0; i < B; ++i) {
        step_correct += argmax(Z.data() + i * M, M) == argmax(targets.data() + i * M, M);
      }
      adam_step<float>(params, opt, sched.lr, cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps);
      for (auto* p : params) p->zero_grad();

      loss_sum += step_loss;
      correct += step_correct;
      seen += B;
      ++batches;
      const StepInfo info{epoch, result.steps, step_loss, static_cast<double>(step_correct) / B, sched.lr};
      ++result.steps;
      if (on_step && !on_step(info)) {
        result.stopped_early = true;
        break;
      }
    }
    result.history.push_back({epoch, sched.augment ? 1 : 2, sched.lr, loss_sum / static_cast<double>(batches),
                              static_cast<double>(correct) / static_cast<double>(seen)});
    if (cfg.checkpoint_every > 0 && (epoch + 1) % cfg.checkpoint_every == 0) {
      char name[32];
      std::snprintf(name, sizeof(name), "epoch_%03zu.ascw", epoch + 1);
      net.save(cfg.checkpoint_dir / name);
    }
  }
  if (cfg.recalibrate_bn) recalibrate_bn(net, data, cfg.batch_size);
  return result;
}

void recalibrate_bn(model::Network& net, const TrainingSet& data, std::size_t batch_size) {
  data.validate();
  if (batch_size == 0) fail(ErrorCode::kValidationError, "batch size must be positive");
  const auto& arch = net.config();
  std::size_t k = 0;
  for (std::size_t start = 0; start < data.size(); start += batch_size, ++k) {
    const std::size_t B = std::min(batch_size, data.size() - start);
    augment::LabeledBatch batch(B, data.freq, data.time, data.channels, arch.n_classes);
    std::copy_n(data.features.data() + start * data.sample_size(), B * data.sample_size(), batch.features.data());
    batch = augment::center_crop(batch, arch.in_time);
    net.accumulate_bn_stats(nn::Tensor<float>({B, batch.freq, batch.time, batch.channels}, std::move(batch.features)), k);
  }
}

std::vector<float> predict_set(model::Network& net, const TrainingSet& data, std::size_t batch_size) {
  data.validate();
  if (batch_size == 0) fail(ErrorCode::kValidationError, "batch size must be positive");
  const auto& arch = net.config();
  if (data.freq != arch.in_freq || data.channels != arch.in_channels) {
    fail(ErrorCode::kConfigMismatch, "features do not match the network input");
  }
  const std::size_t M = arch.n_classes;
  std::vector<float> probs;
  probs.reserve(data.size() * M);
  for (std::size_t start = 0; start < data.size(); start += batch_size) {
    const std::size_t B = std::min(batch_size, data.size() - start);
    augment::LabeledBatch batch(B, data.freq, data.time, data.channels, M);
    std::copy_n(data.features.data() + start * data.sample_size(), B * data.sample_size(), batch.features.data());
    batch = augment::center_crop(batch, arch.in_time);
    const auto p = net.predict(nn::Tensor<float>({B, batch.freq, batch.time, batch.channels}, std::move(batch.features)));
    probs.insert(probs.end(), p.values().begin(), p.values().end());
  }
  return probs;
}

void write_history_csv(const std::filesystem::path& path, const std::vector<HistoryRow>& history) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::kIOFailure, "cannot write " + path.string());
  out << "epoch,phase,lr,loss,train_acc\n";
  out.precision(9);
  for (const auto& r : history) {
    out << r.epoch << ',' << r.phase << ',' << r.lr << ',' << r.loss << ',' << r.train_acc << "\n";
  }
  if (!out) fail(ErrorCode::kIOFailure, "write failed for " + path.string());
}

}  // namespace asc::train
