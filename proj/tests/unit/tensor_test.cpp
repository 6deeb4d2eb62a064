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
#include <numeric>

#include "asc/tensor/graph.hpp"
#include "asc/tensor/ops.hpp"
#include "asc/tensor/weights_io.hpp"
#include "gradcheck.hpp"
#include "test_util.hpp"

using namespace asc;
using namespace asc::nn;
using asc::testing::random_tensor;

namespace {

using DT = Tensor<double>;

DT conv_reference(const DT& x, const DT& w, const DT& b, std::size_t sf, std::size_t st, Padding pad) {
  const std::size_t B = x.dim(0), F = x.dim(1), T = x.dim(2), Ci = x.dim(3);
  const std::size_t kF = w.dim(0), kT = w.dim(1), Co = w.dim(3);
  const std::size_t Fo = pooled_length(F, kF, sf, pad), To = pooled_length(T, kT, st, pad);
  const long pf = static_cast<long>(leading_pad(F, kF, sf, pad)), pt = static_cast<long>(leading_pad(T, kT, st, pad));
  DT y({B, Fo, To, Co});
  for (std::size_t n = 0; n < B; ++n)
    for (std::size_t fo = 0; fo < Fo; ++fo)
      for (std::size_t to = 0; to < To; ++to)
        for (std::size_t co = 0; co < Co; ++co) {
          double acc = b.empty() ? 0.0 : b[co];
          for (std::size_t i = 0; i < kF; ++i)
            for (std::size_t j = 0; j < kT; ++j)
              for (std::size_t ci = 0; ci < Ci; ++ci) {
                const long f = static_cast<long>(fo * sf + i) - pf, t = static_cast<long>(to * st + j) - pt;
                if (f < 0 || t < 0 || f >= static_cast<long>(F) || t >= static_cast<long>(T)) continue;
                acc += x.at(n, f, t, ci) * w[((i * kT + j) * Ci + ci) * Co + co];
              }
          y.at(n, fo, to, co) = acc;
        }
  return y;
}

DT run_conv(const DT& x, const DT& w, const DT& b, const Conv2dOptions& opt) {
  Graph<double> g(Mode::kEval);
  const Var bv = b.empty() ? Var{} : g.constant(b);
  return g.value(conv2d(g, g.constant(x), g.constant(w), bv, opt));
}

}  // namespace

TEST(Tensor, ShapeAndReshape) {
  Tensor<float> t({2, 3, 4, 5}, 1.5f);
  EXPECT_EQ(t.size(), 120u);
  EXPECT_EQ(shape_string(t.shape()), "[2x3x4x5]");
  EXPECT_EQ(t.reshaped({6, 20}).dim(1), 20u);
  EXPECT_ASC_ERROR(t.reshaped({7, 20}), ErrorCode::kShapeMismatch);
  EXPECT_ASC_ERROR((Tensor<float>({2, 2}, std::vector<float>{1, 2, 3})), ErrorCode::kShapeMismatch);
}

TEST(Conv2d, IdentityKernel) {
  const auto x = random_tensor({1, 4, 5, 1}, 3);
  EXPECT_EQ(run_conv(x, DT({1, 1, 1, 1}, 1.0), DT({1}, 0.0), {}).values(), x.values());
}

TEST(Conv2d, SumOfFour) {
  const DT x({1, 2, 2, 1}, std::vector<double>{1, 2, 3, 4});
  const auto y = run_conv(x, DT({2, 2, 1, 1}, 1.0), DT({1}, 0.0), {1, 1, Padding::kValid});
  ASSERT_EQ(y.size(), 1u);
  EXPECT_EQ(y[0], 10.0);
}

TEST(Conv2d, MatchesNestedLoops) {
  const auto x = random_tensor({2, 5, 5, 3}, 11);
  const auto w = random_tensor({3, 3, 3, 4}, 12);
  const auto b = random_tensor({4}, 13);
  for (auto pad : {Padding::kSame, Padding::kValid}) {
    for (std::size_t s : {1u, 2u}) {
      const auto got = run_conv(x, w, b, {s, s, pad});
      const auto want = conv_reference(x, w, b, s, s, pad);
      ASSERT_EQ(got.shape(), want.shape());
      for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-6);
    }
  }
  const auto w2 = random_tensor({4, 1, 3, 2}, 14);
  const auto got = run_conv(x, w2, DT{}, {});
  const auto want = conv_reference(x, w2, DT{}, 1, 1, Padding::kSame);
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-6);
}

TEST(BatchNorm, StandardisesBatch) {
  // Per-channel mean 5, variance 4.
  DT x({4, 2, 2, 2});
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = (i / 2) % 2 == 0 ? 3.0 : 7.0;
  Parameter<double> gamma("g", DT({2}, 1.0)), beta("b", DT({2}, 0.0));
  RunningStats<double> stats(2);
  Graph<double> g(Mode::kTrain);
  const auto y = g.value(batch_norm(g, g.constant(x), g.param(gamma), g.param(beta), stats));
  for (std::size_t c = 0; c < 2; ++c) {
    double m = 0, v = 0;
    for (std::size_t i = c; i < y.size(); i += 2) m += y[i];
    m /= 16;
    for (std::size_t i = c; i < y.size(); i += 2) v += (y[i] - m) * (y[i] - m);
    EXPECT_NEAR(m, 0.0, 1e-12);
    EXPECT_NEAR(v / 16, 1.0, 1e-3);
  }
  // Moving mean moved 1% of the way towards 5.
  EXPECT_NEAR(stats.mean[0], 0.05, 1e-12);
}

TEST(BatchNorm, AffineAndEval) {
  const auto x = random_tensor({3, 2, 2, 2}, 8);
  Parameter<double> gamma("g", DT({2}, 2.0)), beta("b", DT({2}, 3.0));
  RunningStats<double> stats(2);
  Graph<double> g(Mode::kTrain);
  const auto y = g.value(batch_norm(g, g.constant(x), g.param(gamma), g.param(beta), stats));
  double m = 0, v = 0;
  for (std::size_t i = 0; i < y.size(); i += 2) m += y[i];
  m /= 12;
  for (std::size_t i = 0; i < y.size(); i += 2) v += (y[i] - m) * (y[i] - m);
  EXPECT_NEAR(m, 3.0, 1e-9);
  EXPECT_NEAR(std::sqrt(v / 12), 2.0, 0.02);

  RunningStats<double> unit(2);
  Graph<double> e(Mode::kEval);
  const auto z = e.value(batch_norm(e, e.constant(x), e.param(gamma), e.param(beta), unit));
  for (std::size_t i = 0; i < z.size(); ++i) EXPECT_NEAR(z[i], 2.0 * x[i] / std::sqrt(1.0 + 1e-3) + 3.0, 1e-12);
}

TEST(Activations, SoftmaxUniformAndRelu) {
  Graph<double> g(Mode::kEval);
  const auto s = g.value(softmax(g, g.constant(DT({2, 10}, 3.0))));
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_NEAR(s[i], 0.1, 1e-15);
  const auto x = random_tensor({50}, 4, -5, 5);
  DT neg = x;
  for (auto& v : neg.values()) v = -v;
  const auto a = g.value(relu(g, g.constant(x))), b = g.value(relu(g, g.constant(neg)));
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i] * b[i], 0.0);
}

TEST(Activations, DropoutExpectation) {
  Graph<double> g(Mode::kTrain, 77);
  const auto y = g.value(dropout(g, g.constant(DT({10000}, 1.0)), 0.2));
  EXPECT_NEAR(std::accumulate(y.values().begin(), y.values().end(), 0.0) / 10000.0, 1.0, 0.02);
  Graph<double> e(Mode::kEval, 77);
  const auto z = e.value(dropout(e, e.constant(DT({100}, 1.0)), 0.2));
  for (double v : z.values()) EXPECT_EQ(v, 1.0);
}

TEST(Pooling, MaxAvgAndSameCorner) {
  Graph<double> g(Mode::kEval);
  const auto x = g.constant(DT({1, 2, 2, 1}, std::vector<double>{1, 2, 3, 4}));
  EXPECT_EQ(g.value(max_pool(g, x, 2, 2, 2, 2))[0], 4.0);
  EXPECT_EQ(g.value(avg_pool(g, x, 2, 2, 2, 2, Padding::kValid))[0], 2.5);
  const auto ones = g.value(avg_pool(g, g.constant(DT({1, 4, 4, 1}, 1.0)), 3, 3, 1, 1, Padding::kSame));
  EXPECT_EQ(ones.at(0, 0, 0, 0), 1.0);
  for (double v : ones.values()) EXPECT_EQ(v, 1.0);
}

TEST(ResidualNorm, Properties) {
  const double lambda = 0.4;
  // Slices already standardised over (time, channel).
  DT x({1, 2, 4, 1}, std::vector<double>{1, -1, 1, -1, 2, 0, -2, 0});
  const double sd2 = std::sqrt(2.0);
  for (std::size_t i = 4; i < 8; ++i) x[i] /= sd2;
  Graph<double> g(Mode::kEval);
  const auto y = g.value(residual_norm(g, g.constant(x), lambda));
  for (std::size_t i = 0; i < 8; ++i) EXPECT_NEAR(y[i], (1 + lambda) * x[i], 1e-4);

  const auto c = g.value(residual_norm(g, g.constant(DT({1, 2, 4, 3}, 5.0)), lambda));
  for (double v : c.values()) EXPECT_NEAR(v, lambda * 5.0, 1e-9);

  const auto r = random_tensor({2, 8, 16, 3}, 21, -3, 7);
  const auto z = g.value(residual_norm(g, g.constant(r), lambda));
  for (std::size_t b = 0; b < 2; ++b)
    for (std::size_t f = 0; f < 8; ++f) {
      double mi = 0, mo = 0;
      for (std::size_t t = 0; t < 16; ++t)
        for (std::size_t ch = 0; ch < 3; ++ch) {
          mi += r.at(b, f, t, ch);
          mo += z.at(b, f, t, ch);
        }
      EXPECT_NEAR(mo / 48, lambda * mi / 48, 1e-5);
    }
}

TEST(DenseConcatPool, Shapes) {
  Graph<double> g(Mode::kEval);
  DT eye({3, 3});
  for (std::size_t i = 0; i < 3; ++i) eye[i * 4] = 1.0;
  const auto x = random_tensor({2, 3}, 5);
  EXPECT_EQ(g.value(dense(g, g.constant(x), g.constant(eye), g.constant(DT({3}, 0.0)))).values(), x.values());

  const auto cat = concat(g, {g.constant(DT({2, 3})), g.constant(DT({2, 5}))}, 1);
  EXPECT_EQ(g.value(cat).shape(), (Shape{2, 8}));

  const auto seven = g.constant(DT({2, 4, 6, 3}, 7.0));
  const auto p = g.value(global_pool(g, seven, GlobalPool::kAvgFreq));
  EXPECT_EQ(p.shape(), (Shape{2, 18}));
  for (double v : p.values()) EXPECT_EQ(v, 7.0);
  EXPECT_EQ(g.value(global_pool(g, seven, GlobalPool::kAvgChannel)).shape(), (Shape{2, 24}));
  EXPECT_EQ(g.value(global_pool(g, seven, GlobalPool::kMaxTime)).shape(), (Shape{2, 12}));
}

TEST(Autodiff, LinearAndDeadUnits) {
  const auto x = random_tensor({3, 4}, 6);
  Parameter<double> w("w", random_tensor({3, 4}, 7));
  Graph<double> g;
  g.backward(dot(g, g.param(w), x));
  EXPECT_EQ(w.grad.values(), x.values());

  Graph<double> h;
  const auto in = h.input(random_tensor({20}, 8));
  DT neg_abs = h.value(in);
  for (auto& v : neg_abs.values()) v = -std::abs(v) - 0.1;
  const auto xin = h.input(neg_abs);
  h.backward(sum(h, relu(h, xin)));
  for (double v : h.grad(xin).values()) EXPECT_EQ(v, 0.0);
}

TEST(Autodiff, KlRejectsZeroPrediction) {
  Graph<double> g;
  const auto p = g.input(DT({1, 2}, std::vector<double>{1.0, 0.0}));
  EXPECT_ASC_ERROR(kl_divergence(g, p, DT({1, 2}, std::vector<double>{0.5, 0.5})), ErrorCode::kNonPositivePrediction);
}

// Module-level tolerance: h = 1e-4, 1e-6 relative.
TEST(GradCheck, EveryOpMatchesFiniteDifferences) {
  for (const auto& c : asc::testing::standard_grad_cases()) {
    const auto r = asc::testing::check_gradients(c, 1, 1e-4);
    EXPECT_LT(r.max_rel_err, 1e-6) << r.name;
    EXPECT_GT(r.checked, 0u) << r.name;
  }
}

TEST(WeightsIo, RoundTripAndErrors) {
  std::vector<NamedTensor> entries{{"conv/kernel", Tensor<float>({2, 1, 3, 4}, 0.25f)},
                                   {"bn/moving_mean", Tensor<float>({4}, std::vector<float>{1, -2, 3.5f, 0})}};
  const auto bytes = encode_weights(entries);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "ASCW");
  const auto back = decode_weights(bytes);
  ASSERT_EQ(back.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(back[i].name, entries[i].name);
    EXPECT_EQ(back[i].tensor.shape(), entries[i].tensor.shape());
    EXPECT_EQ(back[i].tensor.values(), entries[i].tensor.values());
  }
  auto cut = bytes;
  cut.resize(cut.size() - 1);
  EXPECT_THROW(decode_weights(cut), Error);
  EXPECT_ASC_ERROR(load_weights("/nonexistent/w.ascw"), ErrorCode::kIOFailure);
}
