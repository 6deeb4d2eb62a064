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

#include "asc/model/network.hpp"

#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

#include "asc/error.hpp"
#include "asc/random.hpp"
#include "asc/tensor/ops.hpp"

namespace asc::model {

using nn::Shape;
using nn::Var;

// Static pass: resolves shapes, creates parameters and records the layer
// table. Values are per-sample shapes (no batch axis).
struct ShapeEmitter {
  using Value = Shape;
  Network& net;
  std::uint64_t seed;
  bool init;

  std::size_t channels(const Shape& x) const { return x.back(); }

  void record(const std::string& name, const std::string& kind, const Shape& in, const Shape& out,
              std::size_t params = 0) {
    net.spec_.layers.push_back({name, kind, in, out, params});
    net.spec_.total_params += params;
  }

  nn::Parameter<float>& add_param(const std::string& name, Shape shape, bool l2, double limit, float fill) {
    if (net.param_index_.count(name)) fail(ErrorCode::kConfigMismatch, "duplicate parameter " + name);
    nn::Tensor<float> value(shape, fill);
    if (init && limit > 0.0) {
      auto rng = make_rng(seed, {net.params_.size()});
      std::uniform_real_distribution<double> u(-limit, limit);
      for (auto& v : value.values()) v = static_cast<float>(u(rng));
    }
    net.param_index_[name] = net.params_.size();
    net.params_.push_back(std::make_unique<nn::Parameter<float>>(name, std::move(value), l2));
    return *net.params_.back();
  }

  Shape conv(const std::string& name, const Shape& x, std::size_t kf, std::size_t kt, std::size_t c) {
    const std::size_t cin = channels(x);
    const double fan_in = static_cast<double>(kf * kt * cin);
    add_param(name + "/kernel", {kf, kt, cin, c}, true, std::sqrt(6.0 / fan_in), 0.0f);
    add_param(name + "/bias", {c}, false, 0.0, 0.0f);
    Shape out{x[0], x[1], c};
    record(name, "conv" + std::to_string(kf) + "x" + std::to_string(kt), x, out, kf * kt * cin * c + c);
    return out;
  }

  Shape batch_norm(const std::string& name, const Shape& x) {
    const std::size_t c = channels(x);
    add_param(name + "/gamma", {c}, false, 0.0, 1.0f);
    add_param(name + "/beta", {c}, false, 0.0, 0.0f);
    net.stats_order_.push_back(name);
    net.stats_.emplace(name, nn::RunningStats<float>(c));
    record(name, "batch_norm", x, x, 2 * c);
    return x;
  }

  Shape relu(const std::string& name, const Shape& x) {
    record(name, "relu", x, x);
    return x;
  }

  Shape dropout(const std::string& name, const Shape& x, double p) {
    std::ostringstream kind;
    kind << "dropout(" << p << ")";
    record(name, kind.str(), x, x);
    return x;
  }

  Shape max_pool(const std::string& name, const Shape& x) {
    Shape out{nn::pooled_length(x[0], 2, 2, nn::Padding::kValid), nn::pooled_length(x[1], 2, 2, nn::Padding::kValid), x[2]};
    record(name, "max_pool2x2", x, out);
    return out;
  }

  Shape avg_pool(const std::string& name, const Shape& x, std::size_t kf, std::size_t kt) {
    record(name, "avg_pool" + std::to_string(kf) + "x" + std::to_string(kt), x, x);
    return x;
  }

  Shape residual_norm(const std::string& name, const Shape& x, double) {
    record(name, "residual_norm", x, x);
    return x;
  }

  Shape concat(const std::string& name, const std::vector<Shape>& xs) {
    Shape out = xs.at(0);
    for (std::size_t i = 1; i < xs.size(); ++i) out.back() += xs[i].back();
    record(name, "concat", xs[0], out);
    return out;
  }

  Shape add(const std::string& name, const std::vector<Shape>& xs) {
    for (const auto& s : xs) {
      if (s != xs[0]) fail(ErrorCode::kConfigMismatch, name + ": summed shapes differ");
    }
    record(name, "add", xs[0], xs[0]);
    return xs[0];
  }

  Shape pooling_block(const std::string& name, const Shape& x, PoolingLayout layout) {
    const std::size_t F = x[0], T = x[1], C = x[2];
    Shape out{layout == PoolingLayout::kPerChannel ? 3 * C : F * T + F * C + T * C};
    record(name, "pooling_block", x, out);
    return out;
  }

  Shape dense(const std::string& name, const Shape& x, std::size_t units) {
    const std::size_t d = x.at(0);
    add_param(name + "/kernel", {d, units}, true, std::sqrt(6.0 / static_cast<double>(d)), 0.0f);
    add_param(name + "/bias", {units}, false, 0.0, 0.0f);
    Shape out{units};
    record(name, "dense", x, out, d * units + units);
    return out;
  }

  Shape output(const std::string& name, const Shape& x) {
    record(name, "softmax", x, x);
    return x;
  }
};

// Executes the same plan on a graph.
struct GraphEmitter {
  using Value = Var;
  Network& net;
  nn::Graph<float>& g;
  // Statistics pass: BN moving-stat momentum override, dropout off.
  bool calibrating = false;
  float momentum = 0.99f;

  std::size_t channels(Var x) const { return g.value(x).shape().back(); }
  Var p(const std::string& name) { return g.param(*net.params_.at(net.param_index_.at(name))); }

  Var conv(const std::string& name, Var x, std::size_t, std::size_t, std::size_t) {
    return nn::conv2d(g, x, p(name + "/kernel"), p(name + "/bias"));
  }
  Var batch_norm(const std::string& name, Var x) {
    nn::BatchNormOptions<float> opt;
    opt.momentum = momentum;
    return nn::batch_norm(g, x, p(name + "/gamma"), p(name + "/beta"), net.stats_.at(name), opt);
  }
  Var relu(const std::string&, Var x) { return nn::relu(g, x); }
  Var dropout(const std::string&, Var x, double rate) { return calibrating ? x : nn::dropout(g, x, rate); }
  Var max_pool(const std::string&, Var x) { return nn::max_pool(g, x, 2, 2, 2, 2); }
  Var avg_pool(const std::string&, Var x, std::size_t kf, std::size_t kt) {
    return nn::avg_pool(g, x, kf, kt, 1, 1, nn::Padding::kSame);
  }
  Var residual_norm(const std::string&, Var x, double lambda) { return nn::residual_norm(g, x, lambda); }
  Var concat(const std::string&, const std::vector<Var>& xs) { return nn::concat(g, xs, 3); }
  Var add(const std::string&, const std::vector<Var>& xs) { return nn::add_n(g, xs); }

  Var pooling_block(const std::string&, Var x, PoolingLayout layout) {
    using nn::Reduction;
    if (layout == PoolingLayout::kFlatten) {
      return nn::concat(g, {nn::global_pool(g, x, nn::GlobalPool::kAvgChannel),
                            nn::global_pool(g, x, nn::GlobalPool::kMaxTime),
                            nn::global_pool(g, x, nn::GlobalPool::kAvgFreq)}, 1);
    }
    const Var freq_mean = nn::reduce(g, x, 1, Reduction::kMean);  // [B,T,C]
    const Var avg = nn::reduce(g, freq_mean, 1, Reduction::kMean);
    const Var max_t = nn::reduce(g, freq_mean, 1, Reduction::kMax);
    const Var avg_f = nn::reduce(g, nn::reduce(g, x, 2, Reduction::kMax), 1, Reduction::kMean);
    return nn::concat(g, {avg, max_t, avg_f}, 1);
  }

  Var dense(const std::string& name, Var x, std::size_t) {
    return nn::dense(g, x, p(name + "/kernel"), p(name + "/bias"));
  }
  Var output(const std::string&, Var x) { return x; }
};

namespace {

template <class E>
typename E::Value conv_bn_relu(E& e, const std::string& s, typename E::Value x, std::size_t kf,
                               std::size_t kt, std::size_t c) {
  x = e.conv(s + "/conv", x, kf, kt, c);
  x = e.batch_norm(s + "/bn", x);
  return e.relu(s + "/relu", x);
}

// Three parallel branches (3x3, 1x1, 4x1) sharing c channels as evenly as
// possible, concatenated and batch-normalised.
template <class E>
typename E::Value inc01(E& e, const std::string& s, typename E::Value x, std::size_t c) {
  const std::size_t base = c / 3, extra = c % 3;
  const std::size_t w0 = base + (extra > 0), w1 = base + (extra > 1), w2 = base;
  auto a = conv_bn_relu(e, s + "/b3x3", x, 3, 3, w0);
  auto b = conv_bn_relu(e, s + "/b1x1", x, 1, 1, w1);
  auto d = conv_bn_relu(e, s + "/b4x1", x, 4, 1, w2);
  return e.batch_norm(s + "/bn", e.concat(s + "/concat", {a, b, d}));
}

// Kx1, KxK and 1xK branches, each smoothed by an average pool of the same
// kernel, summed, plus a residual path (1x1 projection when widths differ).
template <class E>
typename E::Value inc02(E& e, const std::string& s, typename E::Value x, std::size_t c, std::size_t K) {
  const std::string kx1 = s + "/b" + std::to_string(K) + "x1";
  const std::string kxk = s + "/b" + std::to_string(K) + "x" + std::to_string(K);
  const std::string onexk = s + "/b1x" + std::to_string(K);
  auto a = e.avg_pool(kx1 + "/ap", conv_bn_relu(e, kx1, x, K, 1, c), K, 1);
  auto b = e.avg_pool(kxk + "/ap", conv_bn_relu(e, kxk, x, K, K, c), K, K);
  auto d = e.avg_pool(onexk + "/ap", conv_bn_relu(e, onexk, x, 1, K, c), 1, K);
  auto merged = e.add(s + "/sum", {a, b, d});
  auto residual = e.channels(x) == c ? x : e.conv(s + "/proj", x, 1, 1, c);
  return e.add(s + "/residual", {merged, residual});
}

template <class E>
typename E::Value block_tail(E& e, const std::string& s, typename E::Value x, const ArchConfig& cfg) {
  x = e.max_pool(s + "/mp", x);
  x = e.dropout(s + "/dropout", x, cfg.dropout_block);
  return e.residual_norm(s + "/rn", x, cfg.rn_lambda);
}

template <class E>
typename E::Value head(E& e, typename E::Value x, const ArchConfig& cfg) {
  if (cfg.head_hidden) {
    x = e.dense("head/fc1", x, *cfg.head_hidden);
    x = e.relu("head/fc1/relu", x);
    x = e.dropout("head/fc1/dropout", x, cfg.dropout_fc);
  }
  x = e.dense("head/fc_out", x, cfg.n_classes);
  return e.output("head/softmax", x);
}

template <class E>
typename E::Value build(E& e, typename E::Value x, const ArchConfig& cfg) {
  if (cfg.variant == Variant::kEmbedding) return head(e, x, cfg);
  for (std::size_t u = 0; u < cfg.inception_channels.size(); ++u) {
    x = inc01(e, "inception/unit" + std::to_string(u), x, cfg.inception_channels[u]);
  }
  x = block_tail(e, "inception", x, cfg);
  for (std::size_t b = 0; b < 3; ++b) {
    const std::string s = "incres" + std::to_string(b);
    for (std::size_t u = 0; u < cfg.incres_channels[b].size(); ++u) {
      x = inc02(e, s + "/unit" + std::to_string(u), x, cfg.incres_channels[b][u], cfg.incres_K[b]);
    }
    x = e.batch_norm(s + "/bn", x);
    x = block_tail(e, s, x, cfg);
  }
  x = e.pooling_block("head/pool", x, cfg.pooling);
  return head(e, x, cfg);
}

Shape input_shape(const ArchConfig& cfg) {
  if (cfg.variant == Variant::kEmbedding) return {cfg.embedding_dim};
  return {cfg.in_freq, cfg.in_time, cfg.in_channels};
}

}  // namespace

std::size_t count_parameters(const NetworkSpec& spec) {
  std::size_t n = 0;
  for (const auto& l : spec.layers) n += l.params;
  return n;
}

std::string summary_text(const NetworkSpec& spec) {
  std::size_t width = 5;
  for (const auto& l : spec.layers) width = std::max(width, l.name.size());
  std::ostringstream os;
  os << std::left << std::setw(static_cast<int>(width) + 2) << "layer" << std::setw(18) << "kind"
     << std::setw(16) << "output" << std::right << std::setw(12) << "params" << "\n";
  for (const auto& l : spec.layers) {
    os << std::left << std::setw(static_cast<int>(width) + 2) << l.name << std::setw(18) << l.kind
       << std::setw(16) << nn::shape_string(l.output) << std::right << std::setw(12) << l.params << "\n";
  }
  os << "total trainable parameters: " << spec.total_params << "\n";
  return os.str();
}

std::string summary_csv(const NetworkSpec& spec) {
  std::ostringstream os;
  os << "layer,kind,input,output,params\n";
  for (const auto& l : spec.layers) {
    os << l.name << ',' << l.kind << ',' << nn::shape_string(l.input) << ',' << nn::shape_string(l.output)
       << ',' << l.params << "\n";
  }
  os << "total,,,," << spec.total_params << "\n";
  return os.str();
}

Network::Network(const ArchConfig& cfg, std::uint64_t seed) : Network(cfg, seed, true) {}

Network Network::uninitialized(const ArchConfig& cfg) { return Network(cfg, 0, false); }

Network::Network(const ArchConfig& cfg, std::uint64_t seed, bool init) : cfg_(cfg) {
  cfg_.validate();
  ShapeEmitter e{*this, seed, init};
  spec_.input = input_shape(cfg_);
  spec_.output = build(e, spec_.input, cfg_);
  loaded_ = init;
}

std::vector<nn::Parameter<float>*> Network::parameters() {
  std::vector<nn::Parameter<float>*> out;
  for (auto& p : params_) out.push_back(p.get());
  return out;
}

std::vector<const nn::Parameter<float>*> Network::parameters() const {
  std::vector<const nn::Parameter<float>*> out;
  for (const auto& p : params_) out.push_back(p.get());
  return out;
}

Var Network::forward(nn::Graph<float>& g, Var x) {
  Shape expect = spec_.input;
  expect.insert(expect.begin(), g.value(x).shape().empty() ? 0 : g.value(x).dim(0));
  if (g.value(x).shape() != expect) {
    fail(ErrorCode::kShapeMismatch, "network expects " + nn::shape_string(expect) + ", got " +
                                        nn::shape_string(g.value(x).shape()));
  }
  GraphEmitter e{*this, g};
  return build(e, x, cfg_);
}

void Network::accumulate_bn_stats(const nn::Tensor<float>& batch, std::size_t batch_index) {
  nn::Graph<float> g(nn::Mode::kTrain);
  const Var x = g.constant(batch);
  Shape expect = spec_.input;
  expect.insert(expect.begin(), batch.shape().empty() ? 0 : batch.dim(0));
  if (batch.shape() != expect) {
    fail(ErrorCode::kShapeMismatch, "network expects " + nn::shape_string(expect) + ", got " +
                                        nn::shape_string(batch.shape()));
  }
  // momentum k/(k+1) makes the moving statistics the running mean of the
  // per-batch statistics seen so far.
  const auto k = static_cast<float>(batch_index);
  GraphEmitter e{*this, g, true, k / (k + 1.0f)};
  build(e, x, cfg_);
}

nn::Tensor<float> Network::predict(const nn::Tensor<float>& batch) {
  if (!loaded_) fail(ErrorCode::kWeightsNotLoaded, "predict called before weights were loaded");
  nn::Graph<float> g(nn::Mode::kEval);
  const Var logits = forward(g, g.constant(batch));
  return g.value(nn::softmax(g, logits));
}

std::vector<nn::NamedTensor> Network::state() const {
  std::vector<nn::NamedTensor> out;
  for (const auto& p : params_) out.push_back({p->name, p->value});
  for (const auto& name : stats_order_) {
    const auto& s = stats_.at(name);
    out.push_back({name + "/moving_mean", s.mean});
    out.push_back({name + "/moving_variance", s.var});
  }
  return out;
}

void Network::load_state(const std::vector<nn::NamedTensor>& entries) {
  std::map<std::string, const nn::Tensor<float>*> by_name;
  for (const auto& e : entries) by_name[e.name] = &e.tensor;
  auto take = [&](const std::string& name, nn::Tensor<float>& dst) {
    auto it = by_name.find(name);
    if (it == by_name.end()) fail(ErrorCode::kConfigMismatch, "weights lack " + name);
    if (it->second->shape() != dst.shape()) {
      fail(ErrorCode::kConfigMismatch, name + ": stored shape " + nn::shape_string(it->second->shape()) +
                                           " vs expected " + nn::shape_string(dst.shape()));
    }
    dst = *it->second;
    by_name.erase(it);
  };
  // Stage into copies so a failed load leaves the network untouched.
  std::vector<nn::Tensor<float>> values;
  for (const auto& p : params_) {
    values.push_back(p->value);
    take(p->name, values.back());
  }
  std::map<std::string, nn::RunningStats<float>> stats = stats_;
  for (const auto& name : stats_order_) {
    take(name + "/moving_mean", stats.at(name).mean);
    take(name + "/moving_variance", stats.at(name).var);
  }
  if (!by_name.empty()) fail(ErrorCode::kConfigMismatch, "unexpected weight " + by_name.begin()->first);
  for (std::size_t i = 0; i < params_.size(); ++i) {
    params_[i]->value = std::move(values[i]);
    params_[i]->zero_grad();
  }
  stats_ = std::move(stats);
  loaded_ = true;
}

void Network::save(const std::filesystem::path& path) const { nn::save_weights(path, state()); }

void Network::load(const std::filesystem::path& path) { load_state(nn::load_weights(path)); }

}  // namespace asc::model
