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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "asc/error.hpp"
#include "asc/tensor/ops.hpp"

namespace asc::nn {

namespace {

// Per-channel statistics over a row-major [N, C] array. Rows are processed in
// blocks of L = lcm(C, 16) entries so the inner loops run over contiguous,
// vectorisable spans even when C is small; per-channel constants are
// replicated to length L.
struct ChannelBlocks {
  std::size_t C, L, blocks, tail_start;
  ChannelBlocks(std::size_t n, std::size_t c) : C(c), L(std::lcm(c, std::size_t{16})) {
    blocks = (n * c) / L;
    tail_start = blocks * L;
  }
  template <typename T>
  std::vector<T> replicate(const std::vector<T>& per_channel) const {
    std::vector<T> out(L);
    for (std::size_t i = 0; i < L; ++i) out[i] = per_channel[i % C];
    return out;
  }
};

// Block accumulators are flushed into double every kFlush blocks.
constexpr std::size_t kFlush = 64;

// out[c] += sum over rows of f(index, value) where f sees replicated lanes.
template <typename T, typename Fn>
void channel_sums(const ChannelBlocks& cb, std::size_t total, Fn fn, std::vector<double>& out) {
  std::vector<T> acc(cb.L, T(0));
  auto flush = [&] {
    for (std::size_t i = 0; i < cb.L; ++i) {
      out[i % cb.C] += acc[i];
      acc[i] = T(0);
    }
  };
  for (std::size_t b = 0; b < cb.blocks; ++b) {
    const std::size_t base = b * cb.L;
    for (std::size_t i = 0; i < cb.L; ++i) acc[i] += fn(base + i, i);
    if ((b + 1) % kFlush == 0) flush();
  }
  flush();
  for (std::size_t k = cb.tail_start; k < total; ++k) out[k % cb.C] += fn(k, k % cb.L);
}

}  // namespace

template <typename T>
Var batch_norm(Graph<T>& g, Var x, Var gamma, Var beta, RunningStats<T>& stats,
               const BatchNormOptions<T>& opt) {
  const auto& X = g.value(x);
  if (X.rank() < 2) fail(ErrorCode::kShapeMismatch, "batch_norm needs a channel axis");
  const std::size_t C = X.shape().back();
  const std::size_t N = X.size() / C;
  if (g.value(gamma).size() != C || g.value(beta).size() != C || stats.mean.size() != C) {
    fail(ErrorCode::kShapeMismatch, "batch_norm: per-channel parameters do not match " +
                                        shape_string(X.shape()));
  }
  const bool train = g.mode() == Mode::kTrain;
  const ChannelBlocks cb(N, C);
  const T* xd = X.data();
  std::vector<T> mean(C), inv_std(C);
  if (train) {
    std::vector<double> s(C, 0.0), s2(C, 0.0);
    channel_sums<T>(cb, X.size(), [xd](std::size_t k, std::size_t) { return xd[k]; }, s);
    for (std::size_t c = 0; c < C; ++c) {
      s[c] /= static_cast<double>(N);
      mean[c] = static_cast<T>(s[c]);
    }
    const auto mean_rep = cb.replicate(mean);
    channel_sums<T>(cb, X.size(), [xd, &mean_rep](std::size_t k, std::size_t lane) {
      const T d = xd[k] - mean_rep[lane];
      return d * d;
    }, s2);
    for (std::size_t c = 0; c < C; ++c) {
      // Centre on the rounded mean actually used, then correct for its offset.
      const double shift = s[c] - static_cast<double>(mean[c]);
      const double var = std::max(s2[c] / static_cast<double>(N) - shift * shift, 0.0);
      inv_std[c] = static_cast<T>(1.0 / std::sqrt(var + static_cast<double>(opt.eps)));
      if (opt.update_stats) {
        // Moving variance tracks the unbiased estimate.
        const double unbiased = N > 1 ? var * static_cast<double>(N) / static_cast<double>(N - 1) : var;
        const double m = static_cast<double>(opt.momentum);
        stats.mean[c] = static_cast<T>(m * stats.mean[c] + (1.0 - m) * s[c]);
        stats.var[c] = static_cast<T>(m * stats.var[c] + (1.0 - m) * unbiased);
      }
    }
  } else {
    for (std::size_t c = 0; c < C; ++c) {
      mean[c] = stats.mean[c];
      inv_std[c] = static_cast<T>(1.0 / std::sqrt(static_cast<double>(stats.var[c]) + opt.eps));
    }
  }

  // y = x * a + b per channel.
  const T* ga = g.value(gamma).data();
  const T* be = g.value(beta).data();
  std::vector<T> a(C), b(C);
  for (std::size_t c = 0; c < C; ++c) {
    a[c] = ga[c] * inv_std[c];
    b[c] = be[c] - mean[c] * a[c];
  }
  Tensor<T> Y(X.shape());
  {
    const auto a_rep = cb.replicate(a);
    const auto b_rep = cb.replicate(b);
    T* yd = Y.data();
    for (std::size_t blk = 0; blk < cb.blocks; ++blk) {
      const std::size_t base = blk * cb.L;
      for (std::size_t i = 0; i < cb.L; ++i) yd[base + i] = xd[base + i] * a_rep[i] + b_rep[i];
    }
    for (std::size_t k = cb.tail_start; k < X.size(); ++k) yd[k] = xd[k] * a[k % C] + b[k % C];
  }

  return g.record(std::move(Y), {x, gamma, beta},
                  [cb, C, N, train, mean = std::move(mean), inv_std = std::move(inv_std)](Graph<T>& g, std::size_t node) {
    const auto& ins = g.inputs(node);
    const auto& X = g.value(ins[0]);
    const T* ga = g.value(ins[1]).data();
    const T* xd = X.data();
    const T* dy = g.output_grad(node).data();
    const auto mean_rep = cb.replicate(mean);
    const auto inv_rep = cb.replicate(inv_std);
    std::vector<double> sum_dy(C, 0.0), sum_dy_xhat(C, 0.0);
    channel_sums<T>(cb, X.size(), [dy](std::size_t k, std::size_t) { return dy[k]; }, sum_dy);
    channel_sums<T>(cb, X.size(), [dy, xd, &mean_rep, &inv_rep](std::size_t k, std::size_t lane) {
      return dy[k] * (xd[k] - mean_rep[lane]) * inv_rep[lane];
    }, sum_dy_xhat);
    if (g.wants_grad(ins[1])) {
      auto& dg = g.grad(ins[1]);
      for (std::size_t c = 0; c < C; ++c) dg[c] += static_cast<T>(sum_dy_xhat[c]);
    }
    if (g.wants_grad(ins[2])) {
      auto& db = g.grad(ins[2]);
      for (std::size_t c = 0; c < C; ++c) db[c] += static_cast<T>(sum_dy[c]);
    }
    if (!g.wants_grad(ins[0])) return;
    // dx = k*(dy - mean(dy) - xhat*mean(dy*xhat)) with k = gamma/sigma; batch
    // statistics depend on x only in train mode. Expanded as dy*p + x*q + r.
    std::vector<T> p(C), q(C), r(C);
    for (std::size_t c = 0; c < C; ++c) {
      const double k = static_cast<double>(ga[c]) * inv_std[c];
      const double m_dy = train ? sum_dy[c] / static_cast<double>(N) : 0.0;
      const double m_dyx = train ? sum_dy_xhat[c] / static_cast<double>(N) : 0.0;
      p[c] = static_cast<T>(k);
      q[c] = static_cast<T>(-k * m_dyx * inv_std[c]);
      r[c] = static_cast<T>(-k * m_dy + k * m_dyx * mean[c] * inv_std[c]);
    }
    const auto p_rep = cb.replicate(p);
    const auto q_rep = cb.replicate(q);
    const auto r_rep = cb.replicate(r);
    T* dx = g.grad(ins[0]).data();
    for (std::size_t blk = 0; blk < cb.blocks; ++blk) {
      const std::size_t base = blk * cb.L;
      for (std::size_t i = 0; i < cb.L; ++i) {
        dx[base + i] += dy[base + i] * p_rep[i] + xd[base + i] * q_rep[i] + r_rep[i];
      }
    }
    for (std::size_t k = cb.tail_start; k < X.size(); ++k) {
      const std::size_t c = k % C;
      dx[k] += dy[k] * p[c] + xd[k] * q[c] + r[c];
    }
  });
}

template <typename T>
Var relu(Graph<T>& g, Var x) {
  Tensor<T> Y = g.value(x);
  for (auto& v : Y.values()) v = std::max(v, T(0));
  return g.record(std::move(Y), {x}, [](Graph<T>& g, std::size_t node) {
    const auto& Y = g.value(Var{node});
    const auto& dY = g.output_grad(node);
    auto& dX = g.grad(g.inputs(node)[0]);
    for (std::size_t i = 0; i < dX.size(); ++i) dX[i] += Y[i] > T(0) ? dY[i] : T(0);
  });
}

template <typename T>
Var softmax(Graph<T>& g, Var x) {
  const auto& X = g.value(x);
  if (X.rank() == 0) fail(ErrorCode::kShapeMismatch, "softmax of a scalar");
  const std::size_t M = X.shape().back();
  const std::size_t rows = X.size() / M;
  Tensor<T> Y(X.shape());
  for (std::size_t r = 0; r < rows; ++r) {
    const T* xr = X.data() + r * M;
    T* yr = Y.data() + r * M;
    const T mx = *std::max_element(xr, xr + M);
    double z = 0.0;
    for (std::size_t m = 0; m < M; ++m) z += std::exp(static_cast<double>(xr[m] - mx));
    for (std::size_t m = 0; m < M; ++m) yr[m] = static_cast<T>(std::exp(static_cast<double>(xr[m] - mx)) / z);
  }
  return g.record(std::move(Y), {x}, [M, rows](Graph<T>& g, std::size_t node) {
    const auto& Y = g.value(Var{node});
    const auto& dY = g.output_grad(node);
    auto& dX = g.grad(g.inputs(node)[0]);
    for (std::size_t r = 0; r < rows; ++r) {
      const T* yr = Y.data() + r * M;
      const T* dr = dY.data() + r * M;
      double dot = 0.0;
      for (std::size_t m = 0; m < M; ++m) dot += static_cast<double>(dr[m]) * yr[m];
      for (std::size_t m = 0; m < M; ++m) dX[r * M + m] += static_cast<T>(yr[m] * (dr[m] - dot));
    }
  });
}

template <typename T>
Var dropout(Graph<T>& g, Var x, double p) {
  if (!(p >= 0.0 && p < 1.0)) fail(ErrorCode::kValidationError, "dropout ratio must lie in [0, 1)");
  if (g.mode() == Mode::kEval || p == 0.0) return x;
  const auto& X = g.value(x);
  const T keep_scale = static_cast<T>(1.0 / (1.0 - p));
  std::bernoulli_distribution keep(1.0 - p);
  std::vector<T> mask(X.size());
  Tensor<T> Y(X.shape());
  for (std::size_t i = 0; i < X.size(); ++i) {
    mask[i] = keep(g.rng()) ? keep_scale : T(0);
    Y[i] = X[i] * mask[i];
  }
  return g.record(std::move(Y), {x}, [mask = std::move(mask)](Graph<T>& g, std::size_t node) {
    const auto& dY = g.output_grad(node);
    auto& dX = g.grad(g.inputs(node)[0]);
    for (std::size_t i = 0; i < dX.size(); ++i) dX[i] += dY[i] * mask[i];
  });
}

template <typename T>
Var residual_norm(Graph<T>& g, Var x, double lambda, double eps) {
  const auto& X = g.value(x);
  if (X.rank() != 4) fail(ErrorCode::kShapeMismatch, "residual_norm expects [B,F,T,C]");
  const std::size_t slices = X.dim(0) * X.dim(1);
  const std::size_t L = X.dim(2) * X.dim(3);
  std::vector<T> mean(slices), inv_std(slices);
  Tensor<T> Y(X.shape());
  for (std::size_t s = 0; s < slices; ++s) {
    const T* xs = X.data() + s * L;
    double mu = 0.0;
    for (std::size_t i = 0; i < L; ++i) mu += xs[i];
    mu /= static_cast<double>(L);
    double var = 0.0;
    for (std::size_t i = 0; i < L; ++i) var += (xs[i] - mu) * (xs[i] - mu);
    var /= static_cast<double>(L);
    const double inv = 1.0 / std::sqrt(var + eps);
    mean[s] = static_cast<T>(mu);
    inv_std[s] = static_cast<T>(inv);
    T* ys = Y.data() + s * L;
    for (std::size_t i = 0; i < L; ++i) ys[i] = static_cast<T>(lambda * xs[i] + (xs[i] - mu) * inv);
  }
  return g.record(std::move(Y), {x},
                  [L, slices, lambda, mean = std::move(mean), inv_std = std::move(inv_std)](Graph<T>& g, std::size_t node) {
    const auto& X = g.value(g.inputs(node)[0]);
    const auto& dY = g.output_grad(node);
    auto& dX = g.grad(g.inputs(node)[0]);
    for (std::size_t s = 0; s < slices; ++s) {
      const T* xs = X.data() + s * L;
      const T* ds = dY.data() + s * L;
      double m_dy = 0.0, m_dyx = 0.0;
      for (std::size_t i = 0; i < L; ++i) {
        m_dy += ds[i];
        m_dyx += static_cast<double>(ds[i]) * (xs[i] - mean[s]) * inv_std[s];
      }
      m_dy /= static_cast<double>(L);
      m_dyx /= static_cast<double>(L);
      T* out = dX.data() + s * L;
      for (std::size_t i = 0; i < L; ++i) {
        const double xhat = static_cast<double>(xs[i] - mean[s]) * inv_std[s];
        out[i] += static_cast<T>(lambda * ds[i] + inv_std[s] * (ds[i] - m_dy - xhat * m_dyx));
      }
    }
  });
}

#define ASC_INSTANTIATE(T)                                                                       \
  template Var batch_norm<T>(Graph<T>&, Var, Var, Var, RunningStats<T>&, const BatchNormOptions<T>&); \
  template Var relu<T>(Graph<T>&, Var);                                                          \
  template Var softmax<T>(Graph<T>&, Var);                                                       \
  template Var dropout<T>(Graph<T>&, Var, double);                                               \
  template Var residual_norm<T>(Graph<T>&, Var, double, double);
ASC_INSTANTIATE(float)
ASC_INSTANTIATE(double)
#undef ASC_INSTANTIATE

}  // namespace asc::nn
