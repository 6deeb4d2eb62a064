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

#include "asc/tensor/graph.hpp"

#include "asc/error.hpp"

namespace asc::nn {

template <typename T>
Var Graph<T>::constant(Tensor<T> value) {
  Node n;
  n.value = std::move(value);
  nodes_.push_back(std::move(n));
  return Var{nodes_.size() - 1};
}

template <typename T>
Var Graph<T>::input(Tensor<T> value) {
  Node n;
  n.value = std::move(value);
  n.requires_grad = true;
  n.keep_grad = true;
  nodes_.push_back(std::move(n));
  return Var{nodes_.size() - 1};
}

template <typename T>
Var Graph<T>::param(Parameter<T>& p) {
  Node n;
  n.value = p.value;
  n.param = &p;
  n.requires_grad = true;
  nodes_.push_back(std::move(n));
  return Var{nodes_.size() - 1};
}

template <typename T>
Var Graph<T>::record(Tensor<T> value, std::vector<Var> inputs, BackwardFn fn) {
  Node n;
  n.value = std::move(value);
  for (Var v : inputs) {
    if (v.id >= nodes_.size()) fail(ErrorCode::kValidationError, "op input is not a node of this graph");
    n.requires_grad = n.requires_grad || nodes_[v.id].requires_grad;
  }
  n.inputs = std::move(inputs);
  if (n.requires_grad) n.fn = std::move(fn);
  nodes_.push_back(std::move(n));
  return Var{nodes_.size() - 1};
}

template <typename T>
Tensor<T>& Graph<T>::grad(std::size_t node) {
  auto& n = nodes_.at(node);
  if (n.grad.size() == n.value.size()) return n.grad;
  const std::size_t want = n.value.size();
  auto it = spare_.end();
  for (auto c = spare_.begin(); c != spare_.end(); ++c) {
    if (c->capacity() >= want && (it == spare_.end() || c->capacity() < it->capacity())) it = c;
  }
  if (it == spare_.end()) {
    n.grad = Tensor<T>(n.value.shape());
  } else {
    std::vector<T> buf = std::move(*it);
    spare_.erase(it);
    buf.assign(want, T(0));
    n.grad = Tensor<T>(n.value.shape(), std::move(buf));
  }
  return n.grad;
}

template <typename T>
void Graph<T>::backward(Var loss) {
  if (value(loss).size() != 1) fail(ErrorCode::kShapeMismatch, "backward needs a scalar loss");
  // A loss that does not depend on any parameter yields zero gradients.
  if (!nodes_[loss.id].requires_grad) return;
  grad(loss).fill(T(1));
  for (std::size_t i = loss.id + 1; i-- > 0;) {
    auto& n = nodes_[i];
    if (!n.requires_grad || n.grad.empty()) continue;
    if (n.fn) n.fn(*this, i);
    if (n.param) {
      auto& pg = n.param->grad;
      if (pg.size() != n.grad.size()) pg = Tensor<T>(n.param->value.shape());
      for (std::size_t k = 0; k < pg.size(); ++k) pg[k] += n.grad[k];
    }
    if (!n.keep_grad) {
      spare_.push_back(std::move(n.grad.values()));
      n.grad = Tensor<T>();
    }
  }
}

template class Graph<float>;
template class Graph<double>;

}  // namespace asc::nn
