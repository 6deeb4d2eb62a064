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
#include <functional>
#include <string>
#include <vector>

#include "asc/random.hpp"
#include "asc/tensor/tensor.hpp"

namespace asc::nn {

enum class Mode { kTrain, kEval };

/// A trainable tensor. grad is accumulated by Graph::backward and cleared by
/// the optimizer (or zero_grad).
template <typename T>
struct Parameter {
  std::string name;
  Tensor<T> value;
  Tensor<T> grad;
  bool l2_included = true;

  Parameter() = default;
  Parameter(std::string n, Tensor<T> v, bool l2 = true)
      : name(std::move(n)), value(std::move(v)), grad(value.shape()), l2_included(l2) {}
  void zero_grad() { grad = Tensor<T>(value.shape()); }
};

/// Batch-norm moving averages; not trainable.
template <typename T>
struct RunningStats {
  Tensor<T> mean;
  Tensor<T> var;
  explicit RunningStats(std::size_t channels = 0)
      : mean(Shape{channels}, T(0)), var(Shape{channels}, T(1)) {}
};

struct Var {
  std::size_t id = static_cast<std::size_t>(-1);
};

/// Reverse-mode tape. Nodes are appended in execution order, which is a
/// topological order, and backward() walks it in reverse.
template <typename T>
class Graph {
 public:
  using BackwardFn = std::function<void(Graph&, std::size_t node)>;

  explicit Graph(Mode mode = Mode::kTrain, std::uint64_t seed = 0) : mode_(mode), rng_(seed) {}

  Mode mode() const noexcept { return mode_; }
  Rng& rng() noexcept { return rng_; }

  /// Leaf that never receives a gradient.
  Var constant(Tensor<T> value);
  /// Leaf whose gradient is kept (readable through grad() after backward).
  Var input(Tensor<T> value);
  /// Leaf bound to a parameter; backward() adds into param.grad.
  Var param(Parameter<T>& p);

  /// Appends an op node. fn is skipped when no input requires a gradient.
  Var record(Tensor<T> value, std::vector<Var> inputs, BackwardFn fn);

  const Tensor<T>& value(Var v) const { return nodes_.at(v.id).value; }
  Tensor<T>& mutable_value(Var v) { return nodes_.at(v.id).value; }
  bool requires_grad(Var v) const { return nodes_.at(v.id).requires_grad; }
  const std::vector<Var>& inputs(std::size_t node) const { return nodes_[node].inputs; }

  /// Gradient buffer of node (allocated on first use).
  Tensor<T>& grad(std::size_t node);
  Tensor<T>& grad(Var v) { return grad(v.id); }
  const Tensor<T>& output_grad(std::size_t node) const { return nodes_[node].grad; }
  /// True when v needs a gradient contribution from its consumer.
  bool wants_grad(Var v) const { return nodes_.at(v.id).requires_grad; }

  /// Seeds d(loss)/d(loss) = 1 for a scalar loss and propagates.
  void backward(Var loss);

  std::size_t size() const noexcept { return nodes_.size(); }

 private:
  struct Node {
    Tensor<T> value;
    Tensor<T> grad;
    std::vector<Var> inputs;
    BackwardFn fn;
    Parameter<T>* param = nullptr;
    bool requires_grad = false;
    bool keep_grad = false;
  };
  std::vector<Node> nodes_;
  // Buffers of released gradients, reused by later grad() allocations.
  std::vector<std::vector<T>> spare_;
  Mode mode_;
  Rng rng_;
};

extern template class Graph<float>;
extern template class Graph<double>;

}  // namespace asc::nn
