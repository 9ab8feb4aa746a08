// Copyright 2026 The rdino authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rdino/model/network.h"

#include <cmath>

namespace rdino {

int EncoderConfig::ReceptiveField() const {
  int total = 0;
  for (int d : dilations) total += d;
  return 1 + (kernel - 1) * total;
}

void EncoderConfig::Validate() const {
  if (channels.empty()) throw ConfigError("encoder needs at least one layer");
  if (channels.size() != dilations.size()) {
    throw ConfigError("encoder channels and dilations differ in length");
  }
  for (int c : channels) {
    if (c < 1) throw ConfigError("encoder channel width must be >= 1");
  }
  for (int d : dilations) {
    if (d < 1) throw ConfigError("encoder dilation must be >= 1");
  }
  if (kernel < 1) throw ConfigError("encoder kernel must be >= 1");
  if (attention_dim < 1) throw ConfigError("attention dim must be >= 1");
  if (embed_dim < 8) throw ConfigError("embedding dim must be >= 8");
  if (feat_dim < 1) throw ConfigError("feature dim must be >= 1");
}

void HeadConfig::Validate() const {
  if (hidden1 < 1 || hidden2 < 1 || tap_dim < 1 || bottleneck < 1 ||
      out_dim < 2) {
    throw ConfigError("head dimensions must be positive (out_dim >= 2)");
  }
}

Var& ParamSet::Add(const std::string& name, Tensor value, bool requires_grad) {
  if (index_.count(name)) {
    throw ContractError("duplicate parameter name " + name);
  }
  index_[name] = items_.size();
  items_.emplace_back(name, Var(std::move(value), requires_grad));
  return items_.back().second;
}

Var& ParamSet::Get(const std::string& name) {
  auto it = index_.find(name);
  if (it == index_.end()) throw ContractError("unknown parameter " + name);
  return items_[it->second].second;
}

const Var& ParamSet::Get(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw ContractError("unknown parameter " + name);
  return items_[it->second].second;
}

bool ParamSet::Has(const std::string& name) const {
  return index_.count(name) > 0;
}

void ParamSet::ZeroGrads() {
  for (auto& [name, var] : items_) var.ClearGrad();
}

namespace {

// Kaiming-uniform: +-sqrt(6/fan_in). The sqrt(6) gain keeps activation
// variance roughly constant through the ReLU stack; with a plain
// 1/sqrt(fan_in) bound the tap activations vanish within a few layers and
// the regularizers start from a degenerate, ill-conditioned point.
Tensor InitLinear(int64_t fan_in, std::vector<int64_t> shape, Rng& rng) {
  double scale = std::sqrt(6.0 / static_cast<double>(fan_in));
  return Tensor::RandomUniform(std::move(shape), scale, rng);
}

}  // namespace

ParamSet BuildParams(const EncoderConfig& ecfg, const HeadConfig& hcfg,
                     uint64_t seed, bool requires_grad) {
  ecfg.Validate();
  hcfg.Validate();
  Rng rng(Rng::Derive(seed, 0x9A9A));
  ParamSet params;

  int in_ch = ecfg.feat_dim;
  for (size_t l = 0; l < ecfg.channels.size(); ++l) {
    int out_ch = ecfg.channels[l];
    std::string base = "encoder.conv" + std::to_string(l);
    params.Add(base + ".weight",
               InitLinear(in_ch * ecfg.kernel, {out_ch, in_ch, ecfg.kernel},
                          rng),
               requires_grad);
    params.Add(base + ".bias",
               InitLinear(in_ch * ecfg.kernel, {1, out_ch}, rng),
               requires_grad);
    in_ch = out_ch;
  }
  params.Add("encoder.att.w1", InitLinear(in_ch, {in_ch, ecfg.attention_dim}, rng),
             requires_grad);
  params.Add("encoder.att.b1", InitLinear(in_ch, {1, ecfg.attention_dim}, rng),
             requires_grad);
  params.Add("encoder.att.v",
             InitLinear(ecfg.attention_dim, {ecfg.attention_dim, 1}, rng),
             requires_grad);
  params.Add("encoder.fc.weight", InitLinear(in_ch, {in_ch, ecfg.embed_dim}, rng),
             requires_grad);
  params.Add("encoder.fc.bias", InitLinear(in_ch, {1, ecfg.embed_dim}, rng),
             requires_grad);

  auto add_fc = [&](const std::string& base, int in_dim, int out_dim) {
    params.Add(base + ".weight", InitLinear(in_dim, {in_dim, out_dim}, rng),
               requires_grad);
    params.Add(base + ".bias", InitLinear(in_dim, {1, out_dim}, rng),
               requires_grad);
  };
  add_fc("head.fc1", ecfg.embed_dim, hcfg.hidden1);
  add_fc("head.fc2", hcfg.hidden1, hcfg.hidden2);
  add_fc("head.fc3", hcfg.hidden2, hcfg.tap_dim);
  add_fc("head.fc4", hcfg.tap_dim, hcfg.bottleneck);
  params.Add("head.wn.direction",
             InitLinear(hcfg.bottleneck, {hcfg.out_dim, hcfg.bottleneck}, rng),
             requires_grad);
  params.Add("head.wn.magnitude", Tensor::Full({1, hcfg.out_dim}, 1.0),
             requires_grad);
  return params;
}

EncodeResult EncodeDetailed(const Tensor& feat, const ParamSet& params,
                            const EncoderConfig& cfg) {
  if (feat.rank() != 2 || feat.cols() != cfg.feat_dim) {
    throw DimensionError("encode: expected {T, " +
                         std::to_string(cfg.feat_dim) + "} features, got " +
                         feat.ShapeStr());
  }
  if (feat.rows() < cfg.ReceptiveField()) {
    throw InputError("encode: " + std::to_string(feat.rows()) +
                     " frames is below the receptive field of " +
                     std::to_string(cfg.ReceptiveField()));
  }

  Var h = Constant(feat);
  for (size_t l = 0; l < cfg.channels.size(); ++l) {
    std::string base = "encoder.conv" + std::to_string(l);
    h = Relu(Conv1d(h, params.Get(base + ".weight"),
                    params.Get(base + ".bias"), cfg.dilations[l]));
  }

  // self-attentive pooling: alpha = softmax(v . relu(W h_t + b))
  Var scores = MatMul(
      Relu(Add(MatMul(h, params.Get("encoder.att.w1")),
               params.Get("encoder.att.b1"))),
      params.Get("encoder.att.v"));          // {T', 1}
  Var alpha = SoftmaxRows(Transpose(scores), 1.0);  // {1, T'}
  Var pooled = MatMul(alpha, h);                    // {1, C}

  Var emb = Add(MatMul(pooled, params.Get("encoder.fc.weight")),
                params.Get("encoder.fc.bias"));  // {1, E}
  return {emb, alpha};
}

Var Encode(const Tensor& feat, const ParamSet& params,
           const EncoderConfig& cfg) {
  return EncodeDetailed(feat, params, cfg).embedding;
}

Projection Project(const Var& embeddings, const ParamSet& params,
                   const HeadConfig& cfg) {
  auto fc = [&params](const Var& x, const std::string& base) {
    return Add(MatMul(x, params.Get(base + ".weight")),
               params.Get(base + ".bias"));
  };
  Var h = Relu(fc(embeddings, "head.fc1"));
  h = Relu(fc(h, "head.fc2"));
  Var tap = fc(h, "head.fc3");  // raw linear output, no activation
  Var bottleneck = RowL2Normalize(fc(tap, "head.fc4"));

  // weight-normalized output layer: rows of `direction` are rescaled to
  // unit norm and multiplied by a learned per-class magnitude
  Var directions = RowL2Normalize(params.Get("head.wn.direction"));
  Var logits = Mul(MatMul(bottleneck, Transpose(directions)),
                   params.Get("head.wn.magnitude"));
  return {tap, bottleneck, logits};
}

NetworkPair MakeNetworkPair(const EncoderConfig& ecfg, const HeadConfig& hcfg,
                            uint64_t seed) {
  NetworkPair pair;
  pair.encoder_cfg = ecfg;
  pair.head_cfg = hcfg;
  pair.student = BuildParams(ecfg, hcfg, seed, /*requires_grad=*/true);
  // teacher: exact copy of the student's initial values, no gradient
  pair.teacher = BuildParams(ecfg, hcfg, seed, /*requires_grad=*/false);
  for (size_t i = 0; i < pair.student.size(); ++i) {
    pair.teacher.var(i).mutable_value() = pair.student.var(i).value();
  }
  pair.center = Tensor({1, hcfg.out_dim});
  return pair;
}

void EmaUpdate(NetworkPair& pair, double momentum) {
  if (momentum < 0.0 || momentum > 1.0) {
    throw ParameterError("ema momentum must be in [0, 1], got " +
                         std::to_string(momentum));
  }
  for (size_t i = 0; i < pair.student.size(); ++i) {
    const std::vector<double>& s = pair.student.var(i).value().data();
    std::vector<double>& t = pair.teacher.var(i).mutable_value().data();
    for (size_t j = 0; j < t.size(); ++j) {
      t[j] = momentum * t[j] + (1.0 - momentum) * s[j];
    }
  }
}

void UpdateCenter(Tensor& center, const Tensor& teacher_logits,
                  double center_momentum) {
  if (teacher_logits.rank() != 2 || teacher_logits.cols() != center.cols()) {
    throw DimensionError("update_center: logits " + teacher_logits.ShapeStr() +
                         " incompatible with center " + center.ShapeStr());
  }
  int64_t n = teacher_logits.rows(), k = teacher_logits.cols();
  for (int64_t j = 0; j < k; ++j) {
    double mean = 0.0;
    for (int64_t i = 0; i < n; ++i) mean += teacher_logits(i, j);
    mean /= static_cast<double>(n);
    center.data()[j] =
        center_momentum * center.data()[j] + (1.0 - center_momentum) * mean;
  }
}

}  // namespace rdino
