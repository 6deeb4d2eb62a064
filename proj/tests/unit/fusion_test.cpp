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

#include <algorithm>
#include <filesystem>
#include <random>

#include "asc/eval/fusion.hpp"
#include "asc/random.hpp"
#include "test_util.hpp"

using namespace asc;
using namespace asc::eval;

namespace {

ProbMatrix matrix(const std::vector<std::vector<std::vector<double>>>& sys) {
  ProbMatrix pm(sys.size(), sys[0].size(), sys[0][0].size());
  for (std::size_t s = 0; s < sys.size(); ++s)
    for (std::size_t n = 0; n < sys[s].size(); ++n)
      for (std::size_t m = 0; m < sys[s][n].size(); ++m) pm.at(s, n, m) = sys[s][n][m];
  return pm;
}

ProbMatrix random_matrix(std::size_t S, std::size_t N, std::size_t M, std::uint64_t seed) {
  auto rng = make_rng(seed, {});
  std::gamma_distribution<double> g(0.7, 1.0);
  ProbMatrix pm(S, N, M);
  for (std::size_t s = 0; s < S; ++s)
    for (std::size_t n = 0; n < N; ++n) {
      double z = 0;
      for (std::size_t m = 0; m < M; ++m) z += (pm.at(s, n, m) = g(rng) + 1e-9);
      for (std::size_t m = 0; m < M; ++m) pm.at(s, n, m) /= z;
    }
  return pm;
}

std::vector<PredictionRow> rows(std::initializer_list<std::tuple<std::string, std::string, int, double>> spec) {
  std::vector<PredictionRow> out;
  for (const auto& [id, dev, label, p0] : spec) out.push_back({id, dev, label, {p0, 1.0 - p0}});
  return out;
}

}  // namespace

TEST(ProdFusion, SingleSystemIdentity) {
  const auto pm = random_matrix(1, 20, 10, 1);
  EXPECT_EQ(prod_fusion(pm), pm.probs);
}

TEST(ProdFusion, TwoSystemRationalExample) {
  const auto f = prod_fusion(matrix({{{0.6, 0.4}}, {{0.5, 0.5}}}));
  EXPECT_NEAR(f[0], 0.15, 1e-15);
  EXPECT_NEAR(f[1], 0.10, 1e-15);
  EXPECT_EQ(predict_label(f, 2)[0], 0);
}

TEST(ProdFusion, UniformSystems) {
  const auto f = prod_fusion(matrix({{std::vector<double>(10, 0.1)}, {std::vector<double>(10, 0.1)}}));
  for (double v : f) EXPECT_NEAR(v, 0.005, 1e-15);
}

TEST(ProdFusion, MatchesDirectProduct) {
  const auto pm = random_matrix(4, 50, 10, 2);
  const auto f = prod_fusion(pm);
  for (std::size_t n = 0; n < 50; ++n)
    for (std::size_t m = 0; m < 10; ++m) {
      double p = 0.25;
      for (std::size_t s = 0; s < 4; ++s) p *= pm.at(s, n, m);
      EXPECT_NEAR(f[n * 10 + m], p, 1e-12 * std::max(p, 1e-300) + 1e-300);
    }
}

TEST(ProdFusion, SystemPermutationInvariance) {
  const auto pm = random_matrix(3, 40, 10, 3);
  ProbMatrix rev = pm;
  const std::size_t block = 40 * 10;
  for (std::size_t s = 0; s < 3; ++s) {
    std::copy_n(pm.probs.begin() + (2 - s) * block, block, rev.probs.begin() + s * block);
  }
  EXPECT_EQ(predict_label(prod_fusion(pm), 10), predict_label(prod_fusion(rev), 10));
}

TEST(ProdFusion, IdenticalCopiesKeepDecisions) {
  const auto one = random_matrix(1, 100, 10, 4);
  ProbMatrix three(3, 100, 10);
  for (std::size_t s = 0; s < 3; ++s) std::copy(one.probs.begin(), one.probs.end(), three.probs.begin() + s * 1000);
  EXPECT_EQ(predict_label(prod_fusion(three), 10), predict_label(one.probs, 10));
}

TEST(ProdFusion, ZeroIsFloored) {
  const auto f = prod_fusion(matrix({{{0.0, 1.0}}, {{1.0, 0.0}}, {{0.0, 1.0}}}));
  EXPECT_GT(f[0], 0.0);
  EXPECT_GT(f[1], f[0]);
}

TEST(ProdFusion, RejectsBadRows) {
  EXPECT_ASC_ERROR(prod_fusion(matrix({{{0.6, 0.6}}})), ErrorCode::kValidationError);
  EXPECT_ASC_ERROR(prod_fusion(matrix({{{1.2, -0.2}}})), ErrorCode::kValidationError);
  EXPECT_ASC_ERROR(prod_fusion(ProbMatrix{}), ErrorCode::kValidationError);
}

TEST(PredictLabel, TiesAndScaleInvariance) {
  const std::vector<double> tie{0.2, 0.2, 0.1};
  EXPECT_EQ(predict_label(tie, 3)[0], 0);
  const std::vector<double> later{0.1, 0.3, 0.3};
  EXPECT_EQ(predict_label(later, 3)[0], 1);
  const auto pm = random_matrix(3, 60, 10, 5);
  auto f = prod_fusion(pm);
  const auto base = predict_label(f, 10);
  for (std::size_t n = 0; n < 60; ++n)
    for (std::size_t m = 0; m < 10; ++m) f[n * 10 + m] *= 3.0 * (1.0 + n);
  EXPECT_EQ(predict_label(f, 10), base);
  EXPECT_ASC_ERROR(predict_label(tie, 2), ErrorCode::kLengthMismatch);
}

TEST(Accuracy, PerDeviceRows) {
  const std::vector<int> truth{0, 1, 2, 3, 4, 5};
  const std::vector<int> preds{0, 1, 2, 9, 4, 9};
  const std::vector<std::string> dev{"A", "A", "A", "A", "B", "B"};
  const auto rep = accuracy_by_device(preds, truth, dev);
  EXPECT_DOUBLE_EQ(rep.device_accuracy("A"), 75.0);
  EXPECT_DOUBLE_EQ(rep.device_accuracy("B"), 50.0);
  EXPECT_DOUBLE_EQ(rep.average_acc, 62.5);
  EXPECT_EQ(rep.confusion_at(3, 9), 1u);
  const auto all = accuracy_by_device(truth, truth, dev);
  EXPECT_DOUBLE_EQ(all.average_acc, 100.0);
  for (const auto& r : all.rows) EXPECT_DOUBLE_EQ(r.accuracy, 100.0);
  EXPECT_ASC_ERROR(accuracy_by_device(preds, std::vector<int>{1}, dev), ErrorCode::kLengthMismatch);
  EXPECT_ASC_ERROR(rep.device_accuracy("S1"), ErrorCode::kValidationError);
}

TEST(Accuracy, RowOrder) {
  const std::vector<std::string> dev{"S6", "x", "S1", "C", "A", "S10", "B", "S3"};
  const std::vector<int> z(dev.size(), 0);
  const auto rep = accuracy_by_device(z, z, dev);
  std::vector<std::string> order;
  for (const auto& r : rep.rows) order.push_back(r.device);
  EXPECT_EQ(order, (std::vector<std::string>{"A", "B", "C", "S1", "S3", "S6", "S10", "x"}));
  const auto text = report_text(rep, "t");
  EXPECT_NE(text.find("Average"), std::string::npos);
  EXPECT_LT(text.find("\nA "), text.find("\nB "));
  const auto csv = report_csv(rep);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "device,correct,total,accuracy");
  EXPECT_NE(csv.find("\nAverage,,,100.0000"), std::string::npos);
}

TEST(Predictions, RoundTripIsExact) {
  const auto path = std::filesystem::temp_directory_path() / "asc_fusion_test.csv";
  const auto pm = random_matrix(1, 5, 10, 6);
  std::vector<PredictionRow> in;
  for (std::size_t n = 0; n < 5; ++n) {
    in.push_back({std::to_string(n), n % 2 ? "S2" : "A", static_cast<int>(n),
                  std::vector<double>(pm.probs.begin() + n * 10, pm.probs.begin() + n * 10 + 10)});
  }
  write_predictions(path, in);
  const auto out = read_predictions(path);
  ASSERT_EQ(out.size(), 5u);
  for (std::size_t n = 0; n < 5; ++n) {
    EXPECT_EQ(out[n].sample_id, in[n].sample_id);
    EXPECT_EQ(out[n].device_id, in[n].device_id);
    EXPECT_EQ(out[n].true_label, in[n].true_label);
    EXPECT_EQ(out[n].probs, in[n].probs);
  }
  std::filesystem::remove(path);
  EXPECT_ASC_ERROR(read_predictions(path), ErrorCode::kIOFailure);
}

TEST(Align, ReordersToFirstSystem) {
  const auto a = rows({{"1", "A", 0, 0.9}, {"2", "B", 1, 0.2}});
  const auto b = rows({{"2", "B", 1, 0.4}, {"1", "A", 0, 0.7}});
  const auto al = align_systems({a, b}, {"a", "b"});
  EXPECT_EQ(al.pm.sample_ids, (std::vector<std::string>{"1", "2"}));
  EXPECT_DOUBLE_EQ(al.pm.at(1, 0, 0), 0.7);
  EXPECT_EQ(al.truth, (std::vector<int>{0, 1}));
}

TEST(Align, Errors) {
  const auto a = rows({{"1", "A", 0, 0.9}, {"2", "B", 1, 0.2}});
  EXPECT_ASC_ERROR(align_systems({a, rows({{"7", "A", 0, 0.5}})}, {"a", "b"}), ErrorCode::kLengthMismatch);
  EXPECT_ASC_ERROR(align_systems({a, rows({{"1", "A", 0, 0.5}})}, {"a", "b"}), ErrorCode::kValidationError);
  EXPECT_ASC_ERROR(align_systems({a, rows({{"1", "C", 0, 0.5}, {"2", "B", 1, 0.5}})}, {"a", "b"}),
                   ErrorCode::kValidationError);
  EXPECT_ASC_ERROR(align_systems({rows({{"1", "A", 0, 0.5}, {"1", "A", 0, 0.5}})}, {"a"}), ErrorCode::kValidationError);
}
