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
#include <cstdint>

#include "asc/error.hpp"
#include "asc/tensor/ops.hpp"

namespace asc::nn {
namespace {

void require_rank4(const Shape& s, const char* op) {
  if (s.size() != 4) fail(ErrorCode::kShapeMismatch, std::string(op) + " expects [B,F,T,C]");
}

}  // namespace

template <typename T>
Var max_pool(Graph<T>& g, Var x, std::size_t kf, std::size_t kt, std::size_t sf, std::size_t st) {
  const auto& X = g.value(x);
  require_rank4(X.shape(), "max_pool");
  const std::size_t B = X.dim(0), F = X.dim(1), Tn = X.dim(2), C = X.dim(3);
  const std::size_t Fo = pooled_length(F, kf, sf, Padding::kValid);
  const std::size_t To = pooled_length(Tn, kt, st, Padding::kValid);
  Tensor<T> Y({B, Fo, To, C});
  std::vector<std::uint32_t> arg(Y.size());
  for (std::size_t b = 0; b < B; ++b) {
    for (std::size_t fo = 0; fo < Fo; ++fo) {
      for (std::size_t to = 0; to < To; ++to) {
        const std::size_t out = ((b * Fo + fo) * To + to) * C;
        for (std::size_t c = 0; c < C; ++c) {
          std::size_t best = ((b * F + fo * sf) * Tn + to * st) * C + c;
          for (std::size_t i = 0; i < kf; ++i) {
            for (std::size_t j = 0; j < kt; ++j) {
              const std::size_t idx = ((b * F + fo * sf + i) * Tn + to * st + j) * C + c;
              if (X[idx] > X[best]) best = idx;
            }
          }
          Y[out + c] = X[best];
          arg[out + c] = static_cast<std::uint32_t>(best);
        }
      }
    }
  }
  return g.record(std::move(Y), {x}, [arg = std::move(arg)](Graph<T>& g, std::size_t node) {
    const auto& dY = g.output_grad(node);
    auto& dX = g.grad(g.inputs(node)[0]);
    for (std::size_t i = 0; i < arg.size(); ++i) dX[arg[i]] += dY[i];
  });
}

template <typename T>
Var avg_pool(Graph<T>& g, Var x, std::size_t kf, std::size_t kt, std::size_t sf, std::size_t st,
             Padding padding) {
  const auto& X = g.value(x);
  require_rank4(X.shape(), "avg_pool");
  const std::size_t B = X.dim(0), F = X.dim(1), Tn = X.dim(2), C = X.dim(3);
  const std::size_t Fo = pooled_length(F, kf, sf, padding);
  const std::size_t To = pooled_length(Tn, kt, st, padding);
  const std::size_t pf = leading_pad(F, kf, sf, padding);
  const std::size_t pt = leading_pad(Tn, kt, st, padding);

  // Window bounds along one axis, clipped to the input.
  struct Span {
    std::size_t lo, hi;
  };
  auto spans = [](std::size_t out, std::size_t in, std::size_t k, std::size_t s, std::size_t pad) {
    std::vector<Span> v(out);
    for (std::size_t o = 0; o < out; ++o) {
      const auto start = static_cast<std::ptrdiff_t>(o * s) - static_cast<std::ptrdiff_t>(pad);
      const auto lo = std::max<std::ptrdiff_t>(start, 0);
      const auto hi = std::min<std::ptrdiff_t>(start + static_cast<std::ptrdiff_t>(k), static_cast<std::ptrdiff_t>(in));
      v[o] = {static_cast<std::size_t>(lo), static_cast<std::size_t>(std::max(hi, lo))};
    }
    return v;
  };
  auto fs = spans(Fo, F, kf, sf, pf);
  auto ts = spans(To, Tn, kt, st, pt);

  Tensor<T> Y({B, Fo, To, C});
  std::vector<double> acc(C);
  for (std::size_t b = 0; b < B; ++b) {
    for (std::size_t fo = 0; fo < Fo; ++fo) {
      for (std::size_t to = 0; to < To; ++to) {
        std::fill(acc.begin(), acc.end(), 0.0);
        for (std::size_t f = fs[fo].lo; f < fs[fo].hi; ++f) {
          for (std::size_t t = ts[to].lo; t < ts[to].hi; ++t) {
            const T* src = X.data() + ((b * F + f) * Tn + t) * C;
            for (std::size_t c = 0; c < C; ++c) acc[c] += src[c];
          }
        }
        const double count = static_cast<double>((fs[fo].hi - fs[fo].lo) * (ts[to].hi - ts[to].lo));
        T* dst = Y.data() + ((b * Fo + fo) * To + to) * C;
        for (std::size_t c = 0; c < C; ++c) dst[c] = static_cast<T>(count > 0 ? acc[c] / count : 0.0);
      }
    }
  }
  return g.record(std::move(Y), {x},
                  [B, F, Tn, C, Fo, To, fs = std::move(fs), ts = std::move(ts)](Graph<T>& g, std::size_t node) {
    const auto& dY = g.output_grad(node);
    auto& dX = g.grad(g.inputs(node)[0]);
    for (std::size_t b = 0; b < B; ++b) {
      for (std::size_t fo = 0; fo < Fo; ++fo) {
        for (std::size_t to = 0; to < To; ++to) {
          const std::size_t count = (fs[fo].hi - fs[fo].lo) * (ts[to].hi - ts[to].lo);
          if (count == 0) continue;
          const T inv = T(1) / static_cast<T>(count);
          const T* src = dY.data() + ((b * Fo + fo) * To + to) * C;
          for (std::size_t f = fs[fo].lo; f < fs[fo].hi; ++f) {
            for (std::size_t t = ts[to].lo; t < ts[to].hi; ++t) {
              T* dst = dX.data() + ((b * F + f) * Tn + t) * C;
              for (std::size_t c = 0; c < C; ++c) dst[c] += src[c] * inv;
            }
          }
        }
      }
    }
  });
}

template <typename T>
Var concat(Graph<T>& g, const std::vector<Var>& xs, std::size_t axis) {
  if (xs.empty()) fail(ErrorCode::kShapeMismatch, "concat of nothing");
  const Shape& first = g.value(xs[0]).shape();
  if (axis >= first.size()) fail(ErrorCode::kShapeMismatch, "concat axis out of range");
  Shape out_shape = first;
  out_shape[axis] = 0;
  std::vector<std::size_t> widths;
  for (Var v : xs) {
    const Shape& s = g.value(v).shape();
    if (s.size() != first.size()) fail(ErrorCode::kShapeMismatch, "concat rank mismatch");
    for (std::size_t d = 0; d < s.size(); ++d) {
      if (d != axis && s[d] != first[d]) {
        fail(ErrorCode::kShapeMismatch, "concat: " + shape_string(s) + " vs " + shape_string(first));
      }
    }
    out_shape[axis] += s[axis];
    widths.push_back(s[axis]);
  }
  std::size_t outer = 1, inner = 1;
  for (std::size_t d = 0; d < axis; ++d) outer *= first[d];
  for (std::size_t d = axis + 1; d < first.size(); ++d) inner *= first[d];
  const std::size_t out_row = out_shape[axis] * inner;

  Tensor<T> Y(out_shape);
  std::size_t offset = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const T* src = g.value(xs[k]).data();
    const std::size_t row = widths[k] * inner;
    for (std::size_t o = 0; o < outer; ++o) std::copy(src + o * row, src + (o + 1) * row, Y.data() + o * out_row + offset);
    offset += row;
  }
  return g.record(std::move(Y), xs, [outer, inner, out_row, widths](Graph<T>& g, std::size_t node) {
    const auto& dY = g.output_grad(node);
    const auto& ins = g.inputs(node);
    std::size_t offset = 0;
    for (std::size_t k = 0; k < ins.size(); ++k) {
      const std::size_t row = widths[k] * inner;
      if (g.wants_grad(ins[k])) {
        auto& dX = g.grad(ins[k]);
        for (std::size_t o = 0; o < outer; ++o) {
          for (std::size_t i = 0; i < row; ++i) dX[o * row + i] += dY[o * out_row + offset + i];
        }
      }
      offset += row;
    }
  });
}

template <typename T>
Var add_n(Graph<T>& g, const std::vector<Var>& xs) {
  if (xs.empty()) fail(ErrorCode::kShapeMismatch, "add of nothing");
  Tensor<T> Y = g.value(xs[0]);
  for (std::size_t k = 1; k < xs.size(); ++k) {
    const auto& X = g.value(xs[k]);
    if (X.shape() != Y.shape()) {
      fail(ErrorCode::kShapeMismatch, "add: " + shape_string(X.shape()) + " vs " + shape_string(Y.shape()));
    }
    for (std::size_t i = 0; i < Y.size(); ++i) Y[i] += X[i];
  }
  return g.record(std::move(Y), xs, [](Graph<T>& g, std::size_t node) {
    const auto& dY = g.output_grad(node);
    for (Var v : g.inputs(node)) {
      if (!g.wants_grad(v)) continue;
      auto& dX = g.grad(v);
      for (std::size_t i = 0; i < dX.size(); ++i) dX[i] += dY[i];
    }
  });
}

template <typename T>
Var add(Graph<T>& g, Var a, Var b) {
  return add_n(g, {a, b});
}

template <typename T>
Var scale(Graph<T>& g, Var x, double s) {
  Tensor<T> Y = g.value(x);
  for (auto& v : Y.values()) v = static_cast<T>(v * s);
  return g.record(std::move(Y), {x}, [s](Graph<T>& g, std::size_t node) {
    const auto& dY = g.output_grad(node);
    auto& dX = g.grad(g.inputs(node)[0]);
    for (std::size_t i = 0; i < dX.size(); ++i) dX[i] += static_cast<T>(dY[i] * s);
  });
}

template <typename T>
Var reshape(Graph<T>& g, Var x, Shape shape) {
  Tensor<T> Y = g.value(x).reshaped(std::move(shape));
  return g.record(std::move(Y), {x}, [](Graph<T>& g, std::size_t node) {
    const auto& dY = g.output_grad(node);
    auto& dX = g.grad(g.inputs(node)[0]);
    for (std::size_t i = 0; i < dX.size(); ++i) dX[i] += dY[i];
  });
}

template <typename T>
Var reduce(Graph<T>& g, Var x, std::size_t axis, Reduction kind) {
  const auto& X = g.value(x);
  if (axis >= X.rank()) fail(ErrorCode::kShapeMismatch, "reduce axis out of range");
  std::size_t outer = 1, inner = 1;
  for (std::size_t d = 0; d < axis; ++d) outer *= X.dim(d);
  for (std::size_t d = axis + 1; d < X.rank(); ++d) inner *= X.dim(d);
  const std::size_t len = X.dim(axis);
  if (len == 0) fail(ErrorCode::kShapeMismatch, "reduce over an empty axis");
  Shape out_shape = X.shape();
  out_shape.erase(out_shape.begin() + static_cast<std::ptrdiff_t>(axis));
  Tensor<T> Y(out_shape);
  std::vector<std::uint32_t> arg;
  if (kind == Reduction::kMax) arg.resize(Y.size());
  std::vector<double> acc(inner);
  for (std::size_t o = 0; o < outer; ++o) {
    const T* base = X.data() + o * len * inner;
    T* out = Y.data() + o * inner;
    if (kind == Reduction::kMean) {
      std::fill(acc.begin(), acc.end(), 0.0);
      for (std::size_t k = 0; k < len; ++k) {
        for (std::size_t i = 0; i < inner; ++i) acc[i] += base[k * inner + i];
      }
      for (std::size_t i = 0; i < inner; ++i) out[i] = static_cast<T>(acc[i] / static_cast<double>(len));
    } else {
      for (std::size_t i = 0; i < inner; ++i) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < len; ++k) {
          if (base[k * inner + i] > base[best * inner + i]) best = k;
        }
        out[i] = base[best * inner + i];
        arg[o * inner + i] = static_cast<std::uint32_t>(best);
      }
    }
  }
  return g.record(std::move(Y), {x}, [outer, inner, len, kind, arg = std::move(arg)](Graph<T>& g, std::size_t node) {
    const auto& dY = g.output_grad(node);
    auto& dX = g.grad(g.inputs(node)[0]);
    const T inv = T(1) / static_cast<T>(len);
    for (std::size_t o = 0; o < outer; ++o) {
      T* base = dX.data() + o * len * inner;
      const T* d = dY.data() + o * inner;
      if (kind == Reduction::kMean) {
        for (std::size_t k = 0; k < len; ++k) {
          for (std::size_t i = 0; i < inner; ++i) base[k * inner + i] += d[i] * inv;
        }
      } else {
        for (std::size_t i = 0; i < inner; ++i) base[arg[o * inner + i] * inner + i] += d[i];
      }
    }
  });
}

template <typename T>
Var global_pool(Graph<T>& g, Var x, GlobalPool kind) {
  const Shape s = g.value(x).shape();
  require_rank4(s, "global_pool");
  switch (kind) {
    case GlobalPool::kAvgChannel: return reshape(g, reduce(g, x, 3, Reduction::kMean), {s[0], s[1] * s[2]});
    case GlobalPool::kMaxTime: return reshape(g, reduce(g, x, 2, Reduction::kMax), {s[0], s[1] * s[3]});
    case GlobalPool::kAvgFreq: return reshape(g, reduce(g, x, 1, Reduction::kMean), {s[0], s[2] * s[3]});
  }
  fail(ErrorCode::kValidationError, "unknown global pool");
}

template <typename T>
Var sum(Graph<T>& g, Var x) {
  double acc = 0.0;
  for (T v : g.value(x).values()) acc += v;
  return g.record(Tensor<T>({1}, static_cast<T>(acc)), {x}, [](Graph<T>& g, std::size_t node) {
    const T d = g.output_grad(node)[0];
    auto& dX = g.grad(g.inputs(node)[0]);
    for (auto& v : dX.values()) v += d;
  });
}

template <typename T>
Var dot(Graph<T>& g, Var x, const Tensor<T>& c) {
  const auto& X = g.value(x);
  if (X.size() != c.size()) fail(ErrorCode::kShapeMismatch, "dot: size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) acc += static_cast<double>(X[i]) * c[i];
  return g.record(Tensor<T>({1}, static_cast<T>(acc)), {x}, [c](Graph<T>& g, std::size_t node) {
    const T d = g.output_grad(node)[0];
    auto& dX = g.grad(g.inputs(node)[0]);
    for (std::size_t i = 0; i < dX.size(); ++i) dX[i] += d * c[i];
  });
}

template <typename T>
Var kl_divergence(Graph<T>& g, Var probs, const Tensor<T>& targets) {
  const auto& P = g.value(probs);
  if (P.shape() != targets.shape()) fail(ErrorCode::kShapeMismatch, "kl: prediction/label shape mismatch");
  double loss = 0.0;
  for (std::size_t i = 0; i < P.size(); ++i) {
    if (!(P[i] > T(0))) fail(ErrorCode::kNonPositivePrediction, "prediction entries must be strictly positive");
    if (targets[i] > T(0)) loss += static_cast<double>(targets[i]) * std::log(static_cast<double>(targets[i]) / P[i]);
  }
  return g.record(Tensor<T>({1}, static_cast<T>(loss)), {probs}, [targets](Graph<T>& g, std::size_t node) {
    const T d = g.output_grad(node)[0];
    const auto& P = g.value(g.inputs(node)[0]);
    auto& dP = g.grad(g.inputs(node)[0]);
    for (std::size_t i = 0; i < dP.size(); ++i) dP[i] -= d * targets[i] / P[i];
  });
}

template <typename T>
Var softmax_kl(Graph<T>& g, Var logits, const Tensor<T>& targets) {
  const auto& Z = g.value(logits);
  if (Z.shape() != targets.shape() || Z.rank() != 2) {
    fail(ErrorCode::kShapeMismatch, "softmax_kl expects matching [B,M] logits and labels");
  }
  const std::size_t B = Z.dim(0), M = Z.dim(1);
  std::vector<T> probs(Z.size());
  std::vector<T> row_mass(B);
  double loss = 0.0;
  for (std::size_t b = 0; b < B; ++b) {
    const T* z = Z.data() + b * M;
    const T* y = targets.data() + b * M;
    const double mx = *std::max_element(z, z + M);
    double lse = 0.0;
    for (std::size_t m = 0; m < M; ++m) lse += std::exp(z[m] - mx);
    lse = std::log(lse) + mx;
    double mass = 0.0;
    for (std::size_t m = 0; m < M; ++m) {
      const double log_p = z[m] - lse;
      probs[b * M + m] = static_cast<T>(std::exp(log_p));
      mass += y[m];
      if (y[m] > T(0)) loss += static_cast<double>(y[m]) * (std::log(static_cast<double>(y[m])) - log_p);
    }
    row_mass[b] = static_cast<T>(mass);
  }
  return g.record(Tensor<T>({1}, static_cast<T>(loss)), {logits},
                  [targets, M, probs = std::move(probs), row_mass = std::move(row_mass)](Graph<T>& g, std::size_t node) {
    const T d = g.output_grad(node)[0];
    auto& dZ = g.grad(g.inputs(node)[0]);
    for (std::size_t i = 0; i < dZ.size(); ++i) dZ[i] += d * (probs[i] * row_mass[i / M] - targets[i]);
  });
}

#define ASC_INSTANTIATE(T)                                                                     \
  template Var max_pool<T>(Graph<T>&, Var, std::size_t, std::size_t, std::size_t, std::size_t); \
  template Var avg_pool<T>(Graph<T>&, Var, std::size_t, std::size_t, std::size_t, std::size_t, Padding); \
  template Var concat<T>(Graph<T>&, const std::vector<Var>&, std::size_t);                     \
  template Var add<T>(Graph<T>&, Var, Var);                                                    \
  template Var add_n<T>(Graph<T>&, const std::vector<Var>&);                                   \
  template Var scale<T>(Graph<T>&, Var, double);                                               \
  template Var reshape<T>(Graph<T>&, Var, Shape);                                              \
  template Var reduce<T>(Graph<T>&, Var, std::size_t, Reduction);                              \
  template Var global_pool<T>(Graph<T>&, Var, GlobalPool);                                     \
  template Var sum<T>(Graph<T>&, Var);                                                         \
  template Var dot<T>(Graph<T>&, Var, const Tensor<T>&);                                       \
  template Var kl_divergence<T>(Graph<T>&, Var, const Tensor<T>&);                             \
  template Var softmax_kl<T>(Graph<T>&, Var, const Tensor<T>&);
ASC_INSTANTIATE(float)
ASC_INSTANTIATE(double)
#undef ASC_INSTANTIATE

}  // namespace asc::nn
