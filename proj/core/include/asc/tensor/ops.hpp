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
#include <vector>

#include "asc/tensor/graph.hpp"

namespace asc::nn {

enum class Padding { kSame, kValid };

struct Conv2dOptions {
  std::size_t stride_f = 1;
  std::size_t stride_t = 1;
  Padding padding = Padding::kSame;
};

/// Output length of a strided window along one axis. 'same' pads with zeros,
/// splitting the padding evenly and putting any odd cell at the far end.
std::size_t pooled_length(std::size_t in, std::size_t kernel, std::size_t stride, Padding padding);
std::size_t leading_pad(std::size_t in, std::size_t kernel, std::size_t stride, Padding padding);

/// x [B,F,T,Cin], w [kF,kT,Cin,Cout], b [Cout] (pass Var{} for no bias).
template <typename T>
Var conv2d(Graph<T>& g, Var x, Var w, Var b, const Conv2dOptions& opt = {});

template <typename T>
struct BatchNormOptions {
  T eps = T(1e-3);
  T momentum = T(0.99);
  bool update_stats = true;  // train mode only
};

/// Normalises over every axis except the last (channel) one. Train mode uses
/// batch statistics; eval mode uses stats.
template <typename T>
Var batch_norm(Graph<T>& g, Var x, Var gamma, Var beta, RunningStats<T>& stats,
               const BatchNormOptions<T>& opt = {});

template <typename T>
Var relu(Graph<T>& g, Var x);

/// Softmax along the last axis with max subtraction.
template <typename T>
Var softmax(Graph<T>& g, Var x);

/// Inverted dropout in train mode; identity in eval mode or when p == 0.
template <typename T>
Var dropout(Graph<T>& g, Var x, double p);

/// Valid-padding max pool over (F, T) of a [B,F,T,C] tensor.
template <typename T>
Var max_pool(Graph<T>& g, Var x, std::size_t kf, std::size_t kt, std::size_t sf, std::size_t st);

/// Average pool; windows clipped by padding divide by the in-bounds count.
template <typename T>
Var avg_pool(Graph<T>& g, Var x, std::size_t kf, std::size_t kt, std::size_t sf, std::size_t st,
             Padding padding);

/// lambda * x + instance-normalised x, where each (sample, frequency) slice
/// is standardised over (time, channel).
template <typename T>
Var residual_norm(Graph<T>& g, Var x, double lambda = 0.4, double eps = 1e-5);

/// x [B,D], w [D,U], b [U] (Var{} for none).
template <typename T>
Var dense(Graph<T>& g, Var x, Var w, Var b);

template <typename T>
Var concat(Graph<T>& g, const std::vector<Var>& xs, std::size_t axis);

template <typename T>
Var add(Graph<T>& g, Var a, Var b);

template <typename T>
Var add_n(Graph<T>& g, const std::vector<Var>& xs);

template <typename T>
Var scale(Graph<T>& g, Var x, double s);

template <typename T>
Var reshape(Graph<T>& g, Var x, Shape shape);

enum class Reduction { kMean, kMax };

/// Removes one axis by mean or max (max ties go to the first index).
template <typename T>
Var reduce(Graph<T>& g, Var x, std::size_t axis, Reduction kind);

enum class GlobalPool {
  kAvgChannel,  // [B,F,T,C] -> [B, F*T]
  kMaxTime,     // -> [B, F*C]
  kAvgFreq,     // -> [B, T*C]
};

template <typename T>
Var global_pool(Graph<T>& g, Var x, GlobalPool kind);

/// Scalar sum of all entries.
template <typename T>
Var sum(Graph<T>& g, Var x);

/// Scalar sum(x * c) for a constant c of the same shape.
template <typename T>
Var dot(Graph<T>& g, Var x, const Tensor<T>& c);

/// Summed KL(y || p) over rows; p must be strictly positive
/// (NonPositivePrediction otherwise). Entries with y == 0 contribute 0.
template <typename T>
Var kl_divergence(Graph<T>& g, Var probs, const Tensor<T>& targets);

/// Summed KL(y || softmax(logits)) over rows, computed from log-softmax so it
/// never sees a zero probability.
template <typename T>
Var softmax_kl(Graph<T>& g, Var logits, const Tensor<T>& targets);

}  // namespace asc::nn
