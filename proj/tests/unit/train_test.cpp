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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "asc/model/network.hpp"
#include "asc/train/trainer.hpp"
#include "test_util.hpp"

using namespace asc;
using namespace asc::train;

namespace {

TrainingSet toy_set(std::size_t n, std::uint64_t seed) {
  TrainingSet s;
  s.freq = 128;
  s.time = 260;
  s.channels = 3;
  s.features.resize(n * s.sample_size());
  auto rng = make_rng(seed, {});
  std::normal_distribution<float> nd(0.0f, 1.0f);
  for (auto& v : s.features) v = nd(rng);
  for (std::size_t i = 0; i < n; ++i) {
    s.labels.push_back(static_cast<int>(i % 3));
    s.devices.push_back(i % 2 ? "B" : "A");
  }
  return s;
}

model::ArchConfig small_arch() { return model::make_reduced_arch({8, 8, 8, 8}); }

std::vector<std::vector<float>> param_values(model::Network& n) {
  std::vector<std::vector<float>> out;
  for (auto* p : n.parameters()) out.push_back(p->value.values());
  return out;
}

}  // namespace

TEST(KlLoss, Identities) {
  const std::vector<double> p{0.2, 0.3, 0.5, 0.1, 0.1, 0.8};
  EXPECT_DOUBLE_EQ(kl_loss(p, p, 3, 1e-4, 0.0), 0.0);
  EXPECT_NEAR(kl_loss(std::vector<double>{0.5, 0.5}, std::vector<double>{0.25, 0.75}, 2, 0.0, 0.0),
              0.5 * std::log(2.0) + 0.5 * std::log(2.0 / 3.0), 1e-15);
  EXPECT_NEAR(kl_loss(std::vector<double>{0.5, 0.5}, std::vector<double>{0.25, 0.75}, 2, 0.0, 0.0), 0.143841036, 1e-9);
}

TEST(KlLoss, OneHotIsCrossEntropyPlusL2) {
  const std::vector<double> y{0, 1, 0, 1, 0, 0}, yh{0.2, 0.7, 0.1, 0.4, 0.4, 0.2};
  const double ce = -std::log(0.7) - std::log(0.4);
  EXPECT_NEAR(kl_loss(y, yh, 3, 1e-3, 50.0), ce + 0.5 * 1e-3 * 50.0, 1e-12);
}

TEST(KlLoss, Errors) {
  EXPECT_ASC_ERROR(kl_loss(std::vector<double>{1, 0}, std::vector<double>{0, 1}, 2, 0, 0),
                   ErrorCode::kNonPositivePrediction);
  EXPECT_THROW(kl_loss(std::vector<double>{1, 0}, std::vector<double>{0.5, 0.25, 0.25}, 2, 0, 0), Error);
}

TEST(Adam, FirstStepAndZeroGradient) {
  nn::Parameter<double> p("w", nn::Tensor<double>({3}, std::vector<double>{1.0, -2.0, 0.5}));
  p.grad = nn::Tensor<double>({3}, std::vector<double>{0.3, -5.0, 1e-3});
  OptimizerState<double> st;
  std::vector<nn::Parameter<double>*> ps{&p};
  adam_step<double>(ps, st, 0.01);
  EXPECT_NEAR(p.value[0], 1.0 - 0.01, 1e-6);
  EXPECT_NEAR(p.value[1], -2.0 + 0.01, 1e-6);
  EXPECT_NEAR(p.value[2], 0.5 - 0.01 * 1e-3 / (1e-3 + 1e-8), 1e-9);

  nn::Parameter<double> q("z", nn::Tensor<double>({2}, 4.0));
  q.grad = nn::Tensor<double>({2}, 0.0);
  OptimizerState<double> s2;
  std::vector<nn::Parameter<double>*> qs{&q};
  adam_step<double>(qs, s2, 0.1);
  EXPECT_EQ(q.value[0], 4.0);
}

TEST(Adam, ScalarQuadraticMatchesIndependentSimulation) {
  nn::Parameter<double> p("t", nn::Tensor<double>({1}, 1.0));
  OptimizerState<double> st;
  std::vector<nn::Parameter<double>*> ps{&p};
  double theta = 1.0, m = 0.0, v = 0.0;
  bool converged = false;
  for (int t = 1; t <= 200; ++t) {
    p.grad = nn::Tensor<double>({1}, 2.0 * p.value[0]);
    adam_step<double>(ps, st, 0.1);
    const double g = 2.0 * theta;
    m = 0.9 * m + 0.1 * g;
    v = 0.999 * v + 0.001 * g * g;
    theta -= 0.1 * (m / (1 - std::pow(0.9, t))) / (std::sqrt(v / (1 - std::pow(0.999, t))) + 1e-8);
    EXPECT_NEAR(p.value[0], theta, 1e-9) << "step " << t;
    converged = converged || std::abs(p.value[0]) < 0.01;
  }
  EXPECT_TRUE(converged);
}

TEST(Schedule, Boundaries) {
  const TrainConfig cfg;
  EXPECT_EQ(lr_schedule(0, cfg).lr, 1e-4);
  EXPECT_TRUE(lr_schedule(0, cfg).augment);
  EXPECT_EQ(lr_schedule(79, cfg).lr, 1e-4);
  EXPECT_TRUE(lr_schedule(79, cfg).augment);
  EXPECT_EQ(lr_schedule(80, cfg).lr, 1e-6);
  EXPECT_FALSE(lr_schedule(80, cfg).augment);
  EXPECT_EQ(lr_schedule(99, cfg).lr, 1e-6);
  EXPECT_ASC_ERROR(lr_schedule(100, cfg), ErrorCode::kEpochOutOfRange);
}

TEST(TrainConfig, Validate) {
  TrainConfig c;
  c.phase1_epochs = 120;
  EXPECT_ASC_ERROR(c.validate(), ErrorCode::kValidationError);
  c = TrainConfig{};
  c.batch_size = 0;
  EXPECT_ASC_ERROR(c.validate(), ErrorCode::kValidationError);
}

TEST(L2, WeightsOnlyExcludesBiasAndBn) {
  model::Network n(small_arch(), 1);
  auto ps = n.parameters();
  double all = 0, weights = 0;
  for (auto* p : ps) {
    double s = 0;
    for (float v : p->value.values()) s += double(v) * v;
    all += s;
    if (p->l2_included) weights += s;
  }
  EXPECT_NEAR(l2_norm_sq(ps, L2Scope::kAllParameters), all, 1e-6 * all);
  EXPECT_NEAR(l2_norm_sq(ps, L2Scope::kWeightsOnly), weights, 1e-6 * weights);
  EXPECT_LT(weights, all);
}

TEST(Fit, ZeroRateKeepsWeights) {
  const auto data = toy_set(4, 1);
  model::Network n(small_arch(), 2);
  const auto before = param_values(n);
  TrainConfig cfg;
  cfg.batch_size = 4;
  cfg.epochs = cfg.phase1_epochs = 1;
  cfg.lr_phase1 = 0.0;
  const auto r = fit(n, data, cfg, augment::AugmentConfig{});
  EXPECT_EQ(r.history.size(), 1u);
  EXPECT_EQ(r.steps, 1u);
  EXPECT_EQ(param_values(n), before);
}

TEST(Fit, PhaseTwoIsDeterministicAndLearns) {
  const auto data = toy_set(6, 3);
  TrainConfig cfg;
  cfg.batch_size = 3;
  cfg.epochs = 3;
  cfg.phase1_epochs = 1;
  cfg.lr_phase1 = 1e-3;
  cfg.lr_phase2 = 1e-3;
  model::Network a(small_arch(), 5), b(small_arch(), 5);
  const auto ra = fit(a, data, cfg, augment::AugmentConfig{});
  const auto rb = fit(b, data, cfg, augment::AugmentConfig{});
  EXPECT_EQ(param_values(a), param_values(b));
  ASSERT_EQ(ra.history.size(), 3u);
  EXPECT_EQ(ra.history[0].phase, 1);
  EXPECT_EQ(ra.history[2].phase, 2);
  EXPECT_EQ(ra.history[2].loss, rb.history[2].loss);
}

TEST(Fit, CallbackStopsEarly) {
  const auto data = toy_set(6, 4);
  TrainConfig cfg;
  cfg.batch_size = 2;
  cfg.epochs = cfg.phase1_epochs = 2;
  model::Network n(small_arch(), 1);
  std::size_t calls = 0;
  const auto r = fit(n, data, cfg, augment::AugmentConfig{}, [&](const StepInfo&) { return ++calls < 2; });
  EXPECT_TRUE(r.stopped_early);
  EXPECT_EQ(r.steps, 2u);
}

TEST(Recalibrate, IndependentOfPriorStatistics) {
  const auto data = toy_set(5, 6);
  model::Network a(small_arch(), 7), b(small_arch(), 7);
  // Disturb b's moving statistics with a few train-mode passes.
  TrainConfig cfg;
  cfg.batch_size = 5;
  cfg.epochs = cfg.phase1_epochs = 1;
  cfg.lr_phase1 = 0.0;
  fit(b, data, cfg, augment::AugmentConfig{});
  recalibrate_bn(a, data, 2);
  recalibrate_bn(b, data, 2);
  const auto sa = a.state(), sb = b.state();
  ASSERT_EQ(sa.size(), sb.size());
  for (std::size_t i = 0; i < sa.size(); ++i) {
    for (std::size_t k = 0; k < sa[i].tensor.size(); ++k) {
      EXPECT_NEAR(sa[i].tensor[k], sb[i].tensor[k], 1e-5) << sa[i].name;
    }
  }
}

TEST(PredictSet, RowsOnSimplex) {
  const auto data = toy_set(5, 8);
  model::Network n(small_arch(), 9);
  const auto p = predict_set(n, data, 2);
  ASSERT_EQ(p.size(), 50u);
  for (std::size_t r = 0; r < 5; ++r) {
    double s = 0;
    for (std::size_t m = 0; m < 10; ++m) s += p[r * 10 + m];
    EXPECT_NEAR(s, 1.0, 1e-5);
  }
  const auto q = predict_set(n, data, 5);
  for (std::size_t i = 0; i < p.size(); ++i) EXPECT_NEAR(p[i], q[i], 1e-6);
}

TEST(TrainingSet, Validate) {
  auto s = toy_set(2, 1);
  s.labels[1] = 10;
  EXPECT_ASC_ERROR(s.validate(), ErrorCode::kValidationError);
  s = toy_set(2, 1);
  s.features.pop_back();
  EXPECT_ASC_ERROR(s.validate(), ErrorCode::kValidationError);
}
