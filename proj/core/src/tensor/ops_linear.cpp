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

#include <Eigen/Core>
#include <algorithm>

#include "asc/error.hpp"
#include "asc/tensor/ops.hpp"

namespace asc::nn {
namespace {

template <typename T>
using MatR = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MapR = Eigen::Map<MatR<T>>;
template <typename T>
using CMapR = Eigen::Map<const MatR<T>>;

struct ConvGeometry {
  std::size_t B, F, T, Ci, kF, kT, Co, Fo, To, sf, st, pf, pt;
  std::size_t patch() const { return kF * kT * Ci; }
  std::size_t positions() const { return Fo * To; }
  bool pointwise() const { return kF == 1 && kT == 1 && sf == 1 && st == 1; }
};

// Upper bound on im2col scratch, in elements, before a batch is split into
// several GEMMs.
constexpr std::size_t kIm2colBudget = std::size_t{1} << 23;

template <typename T>
void im2col(const ConvGeometry& g, const T* x, T* cols) {
  const std::size_t K = g.patch();
  for (std::size_t fo = 0; fo < g.Fo; ++fo) {
    for (std::size_t to = 0; to < g.To; ++to) {
      T* row = cols + (fo * g.To + to) * K;
      const auto t0 = static_cast<std::ptrdiff_t>(to * g.st) - static_cast<std::ptrdiff_t>(g.pt);
      const bool interior_t = g.st == 1 && t0 >= 0 && t0 + static_cast<std::ptrdiff_t>(g.kT) <= static_cast<std::ptrdiff_t>(g.T);
      for (std::size_t i = 0; i < g.kF; ++i) {
        const auto f = static_cast<std::ptrdiff_t>(fo * g.sf + i) - static_cast<std::ptrdiff_t>(g.pf);
        if (interior_t && f >= 0 && f < static_cast<std::ptrdiff_t>(g.F)) {
          // The kT input frames are adjacent in memory.
          const T* src = x + (static_cast<std::size_t>(f) * g.T + static_cast<std::size_t>(t0)) * g.Ci;
          std::copy(src, src + g.kT * g.Ci, row + i * g.kT * g.Ci);
          continue;
        }
        for (std::size_t j = 0; j < g.kT; ++j) {
          const auto t = static_cast<std::ptrdiff_t>(to * g.st + j) - static_cast<std::ptrdiff_t>(g.pt);
          T* dst = row + (i * g.kT + j) * g.Ci;
          if (f < 0 || t < 0 || f >= static_cast<std::ptrdiff_t>(g.F) || t >= static_cast<std::ptrdiff_t>(g.T)) {
            std::fill(dst, dst + g.Ci, T(0));
          } else {
            const T* src = x + (static_cast<std::size_t>(f) * g.T + static_cast<std::size_t>(t)) * g.Ci;
            std::copy(src, src + g.Ci, dst);
          }
        }
      }
    }
  }
}

template <typename T>
void col2im_add(const ConvGeometry& g, const T* cols, T* dx) {
  const std::size_t K = g.patch();
  for (std::size_t fo = 0; fo < g.Fo; ++fo) {
    for (std::size_t to = 0; to < g.To; ++to) {
      const T* row = cols + (fo * g.To + to) * K;
      const auto t0 = static_cast<std::ptrdiff_t>(to * g.st) - static_cast<std::ptrdiff_t>(g.pt);
      const bool interior_t = g.st == 1 && t0 >= 0 && t0 + static_cast<std::ptrdiff_t>(g.kT) <= static_cast<std::ptrdiff_t>(g.T);
      for (std::size_t i = 0; i < g.kF; ++i) {
        const auto f = static_cast<std::ptrdiff_t>(fo * g.sf + i) - static_cast<std::ptrdiff_t>(g.pf);
        if (f < 0 || f >= static_cast<std::ptrdiff_t>(g.F)) continue;
        if (interior_t) {
          const T* src = row + i * g.kT * g.Ci;
          T* dst = dx + (static_cast<std::size_t>(f) * g.T + static_cast<std::size_t>(t0)) * g.Ci;
          for (std::size_t k = 0; k < g.kT * g.Ci; ++k) dst[k] += src[k];
          continue;
        }
        for (std::size_t j = 0; j < g.kT; ++j) {
          const auto t = static_cast<std::ptrdiff_t>(to * g.st + j) - static_cast<std::ptrdiff_t>(g.pt);
          if (t < 0 || t >= static_cast<std::ptrdiff_t>(g.T)) continue;
          const T* src = row + (i * g.kT + j) * g.Ci;
          T* dst = dx + (static_cast<std::size_t>(f) * g.T + static_cast<std::size_t>(t)) * g.Ci;
          for (std::size_t c = 0; c < g.Ci; ++c) dst[c] += src[c];
        }
      }
    }
  }
}

// Runs fn(first_sample, n_samples, cols) over chunks of the batch, with cols
// holding the im2col rows of those samples (or pointing at x directly for
// pointwise convolutions).
template <typename T, typename Fn>
void for_each_chunk(const ConvGeometry& g, const T* x, std::vector<T>& scratch, Fn&& fn) {
  const std::size_t per_sample = g.positions() * g.patch();
  const std::size_t chunk = std::max<std::size_t>(1, kIm2colBudget / std::max<std::size_t>(per_sample, 1));
  const std::size_t in_sample = g.F * g.T * g.Ci;
  for (std::size_t b0 = 0; b0 < g.B; b0 += chunk) {
    const std::size_t n = std::min(chunk, g.B - b0);
    if (g.pointwise()) {
      fn(b0, n, x + b0 * in_sample);
      continue;
    }
    scratch.resize(n * per_sample);
    for (std::size_t k = 0; k < n; ++k) im2col(g, x + (b0 + k) * in_sample, scratch.data() + k * per_sample);
    fn(b0, n, static_cast<const T*>(scratch.data()));
  }
}

}  // namespace

std::size_t pooled_length(std::size_t in, std::size_t kernel, std::size_t stride, Padding padding) {
  if (stride == 0 || kernel == 0) fail(ErrorCode::kShapeMismatch, "kernel and stride must be positive");
  if (padding == Padding::kSame) return (in + stride - 1) / stride;
  if (in < kernel) fail(ErrorCode::kShapeMismatch, "kernel larger than input under valid padding");
  return (in - kernel) / stride + 1;
}

std::size_t leading_pad(std::size_t in, std::size_t kernel, std::size_t stride, Padding padding) {
  if (padding == Padding::kValid) return 0;
  const std::size_t out = pooled_length(in, kernel, stride, padding);
  const std::size_t need = (out - 1) * stride + kernel;
  return need > in ? (need - in) / 2 : 0;
}

template <typename T>
Var conv2d(Graph<T>& g, Var x, Var w, Var b, const Conv2dOptions& opt) {
  const auto& X = g.value(x);
  const auto& W = g.value(w);
  if (X.rank() != 4 || W.rank() != 4 || W.dim(2) != X.dim(3)) {
    fail(ErrorCode::kShapeMismatch, "conv2d: input " + shape_string(X.shape()) + " vs kernel " +
                                        shape_string(W.shape()));
  }
  const bool has_bias = b.id != Var{}.id;
  if (has_bias && (g.value(b).size() != W.dim(3))) fail(ErrorCode::kShapeMismatch, "conv2d: bias size");

  ConvGeometry geo{X.dim(0), X.dim(1), X.dim(2), X.dim(3), W.dim(0), W.dim(1), W.dim(3), 0, 0,
                   opt.stride_f, opt.stride_t, 0, 0};
  geo.Fo = pooled_length(geo.F, geo.kF, geo.sf, opt.padding);
  geo.To = pooled_length(geo.T, geo.kT, geo.st, opt.padding);
  geo.pf = leading_pad(geo.F, geo.kF, geo.sf, opt.padding);
  geo.pt = leading_pad(geo.T, geo.kT, geo.st, opt.padding);

  const std::size_t P = geo.positions();
  const std::size_t K = geo.patch();
  Tensor<T> Y({geo.B, geo.Fo, geo.To, geo.Co});
  CMapR<T> Wm(W.data(), static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(geo.Co));
  std::vector<T> scratch;
  for_each_chunk(geo, X.data(), scratch, [&](std::size_t b0, std::size_t n, const T* cols) {
    CMapR<T> C(cols, static_cast<Eigen::Index>(n * P), static_cast<Eigen::Index>(K));
    MapR<T> out(Y.data() + b0 * P * geo.Co, static_cast<Eigen::Index>(n * P), static_cast<Eigen::Index>(geo.Co));
    out.noalias() = C * Wm;
  });
  if (has_bias) {
    const T* bias = g.value(b).data();
    for (std::size_t r = 0; r < geo.B * P; ++r) {
      T* row = Y.data() + r * geo.Co;
      for (std::size_t c = 0; c < geo.Co; ++c) row[c] += bias[c];
    }
  }

  std::vector<Var> inputs{x, w};
  if (has_bias) inputs.push_back(b);
  return g.record(std::move(Y), inputs, [geo, has_bias](Graph<T>& g, std::size_t node) {
    const auto& ins = g.inputs(node);
    const Var x = ins[0], w = ins[1];
    const auto& X = g.value(x);
    const auto& W = g.value(w);
    const auto& dY = g.output_grad(node);
    const std::size_t P = geo.positions();
    const std::size_t K = geo.patch();
    const auto Pi = static_cast<Eigen::Index>(P);
    const auto Ki = static_cast<Eigen::Index>(K);
    const auto Coi = static_cast<Eigen::Index>(geo.Co);

    if (has_bias && g.wants_grad(ins[2])) {
      auto& db = g.grad(ins[2]);
      for (std::size_t r = 0; r < geo.B * P; ++r) {
        const T* row = dY.data() + r * geo.Co;
        for (std::size_t c = 0; c < geo.Co; ++c) db[c] += row[c];
      }
    }
    const bool want_w = g.wants_grad(w);
    const bool want_x = g.wants_grad(x);
    if (!want_w && !want_x) return;

    if (want_w) {
      MapR<T> dW(g.grad(w).data(), Ki, Coi);
      std::vector<T> scratch;
      for_each_chunk(geo, X.data(), scratch, [&](std::size_t b0, std::size_t n, const T* cols) {
        const auto rows = static_cast<Eigen::Index>(n * P);
        CMapR<T> C(cols, rows, Ki);
        CMapR<T> D(dY.data() + b0 * P * geo.Co, rows, Coi);
        dW.noalias() += C.transpose() * D;
      });
    }
    if (want_x) {
      CMapR<T> Wm(W.data(), Ki, Coi);
      auto& dX = g.grad(x);
      const std::size_t in_sample = geo.F * geo.T * geo.Ci;
      if (geo.pointwise()) {
        MapR<T> dx(dX.data(), static_cast<Eigen::Index>(geo.B * P), Ki);
        CMapR<T> D(dY.data(), static_cast<Eigen::Index>(geo.B * P), Coi);
        dx.noalias() += D * Wm.transpose();
      } else {
        MatR<T> dcols(Pi, Ki);
        for (std::size_t b = 0; b < geo.B; ++b) {
          CMapR<T> D(dY.data() + b * P * geo.Co, Pi, Coi);
          dcols.noalias() = D * Wm.transpose();
          col2im_add(geo, dcols.data(), dX.data() + b * in_sample);
        }
      }
    }
  });
}

template <typename T>
Var dense(Graph<T>& g, Var x, Var w, Var b) {
  const auto& X = g.value(x);
  const auto& W = g.value(w);
  if (X.rank() != 2 || W.rank() != 2 || X.dim(1) != W.dim(0)) {
    fail(ErrorCode::kShapeMismatch, "dense: input " + shape_string(X.shape()) + " vs weight " +
                                        shape_string(W.shape()));
  }
  const bool has_bias = b.id != Var{}.id;
  const auto B = static_cast<Eigen::Index>(X.dim(0));
  const auto D = static_cast<Eigen::Index>(X.dim(1));
  const auto U = static_cast<Eigen::Index>(W.dim(1));
  if (has_bias && g.value(b).size() != W.dim(1)) fail(ErrorCode::kShapeMismatch, "dense: bias size");

  Tensor<T> Y({X.dim(0), W.dim(1)});
  MapR<T> y(Y.data(), B, U);
  y.noalias() = CMapR<T>(X.data(), B, D) * CMapR<T>(W.data(), D, U);
  if (has_bias) {
    Eigen::Map<const Eigen::Matrix<T, 1, Eigen::Dynamic>> bias(g.value(b).data(), U);
    y.rowwise() += bias;
  }
  std::vector<Var> inputs{x, w};
  if (has_bias) inputs.push_back(b);
  return g.record(std::move(Y), inputs, [B, D, U, has_bias](Graph<T>& g, std::size_t node) {
    const auto& ins = g.inputs(node);
    CMapR<T> dy(g.output_grad(node).data(), B, U);
    if (g.wants_grad(ins[0])) {
      MapR<T>(g.grad(ins[0]).data(), B, D).noalias() += dy * CMapR<T>(g.value(ins[1]).data(), D, U).transpose();
    }
    if (g.wants_grad(ins[1])) {
      MapR<T>(g.grad(ins[1]).data(), D, U).noalias() += CMapR<T>(g.value(ins[0]).data(), B, D).transpose() * dy;
    }
    if (has_bias && g.wants_grad(ins[2])) {
      Eigen::Map<Eigen::Matrix<T, 1, Eigen::Dynamic>>(g.grad(ins[2]).data(), U) += dy.colwise().sum();
    }
  });
}

template Var conv2d<float>(Graph<float>&, Var, Var, Var, const Conv2dOptions&);
template Var conv2d<double>(Graph<double>&, Var, Var, Var, const Conv2dOptions&);
template Var dense<float>(Graph<float>&, Var, Var, Var);
template Var dense<double>(Graph<double>&, Var, Var, Var);

}  // namespace asc::nn
