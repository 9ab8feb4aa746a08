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

#ifndef RDINO_MODEL_NETWORK_H_
#define RDINO_MODEL_NETWORK_H_

#include <string>
#include <unordered_map>
#include <vector>

#include "rdino/features/fbank.h"
#include "rdino/numerics/ops.h"

namespace rdino {

// Encoder: dilated 1-d convolutions over time with ReLU, self-attentive
// pooling, then a linear map to the embedding. A scaled-down stand-in for
// the usual TDNN speaker encoders with the same structural roles.
struct EncoderConfig {
  int feat_dim = 80;
  std::vector<int> channels = {64, 64, 64};
  std::vector<int> dilations = {1, 2, 3};
  int kernel = 3;
  int attention_dim = 64;
  int embed_dim = 64;

  // Minimum number of input frames the conv stack accepts.
  int ReceptiveField() const;
  void Validate() const;
};

// Projection head: FC(h1)-ReLU-FC(h2)-ReLU-FC(tap)-FC(bottleneck)-L2norm-
// weight-normalized FC(out). The regularizers read the {n, tap_dim}
// activations, taken at the raw linear output of the third layer.
struct HeadConfig {
  int hidden1 = 256;
  int hidden2 = 256;
  int tap_dim = 512;
  int bottleneck = 64;
  int out_dim = 1024;

  void Validate() const;
};

// Named parameter collection. Iteration order is creation order, which
// fixes the checkpoint block order and the optimizer slot order.
class ParamSet {
 public:
  Var& Add(const std::string& name, Tensor value, bool requires_grad);
  Var& Get(const std::string& name);
  const Var& Get(const std::string& name) const;
  bool Has(const std::string& name) const;

  size_t size() const { return items_.size(); }
  const std::string& name(size_t i) const { return items_[i].first; }
  Var& var(size_t i) { return items_[i].second; }
  const Var& var(size_t i) const { return items_[i].second; }

  void ZeroGrads();

 private:
  std::vector<std::pair<std::string, Var>> items_;
  std::unordered_map<std::string, size_t> index_;
};

// Builds encoder + head parameters. Weights are uniform in
// [-1/sqrt(fan_in), 1/sqrt(fan_in)], weight-norm magnitudes start at 1.
ParamSet BuildParams(const EncoderConfig& ecfg, const HeadConfig& hcfg,
                     uint64_t seed, bool requires_grad);

struct EncodeResult {
  Var embedding;  // {1, E}
  Var attention;  // {1, T'} pooling weights, rows sum to 1
};

// Embedding of one normalized feature matrix. Throws InputError when the
// input has fewer frames than the receptive field.
EncodeResult EncodeDetailed(const Tensor& feat, const ParamSet& params,
                            const EncoderConfig& cfg);
Var Encode(const Tensor& feat, const ParamSet& params,
           const EncoderConfig& cfg);

struct Projection {
  Var tap;         // {n, tap_dim}
  Var bottleneck;  // {n, bottleneck} after row L2 normalization
  Var logits;      // {n, out_dim}
};

Projection Project(const Var& embeddings, const ParamSet& params,
                   const HeadConfig& cfg);

// Teacher/student pair. The teacher has identical parameter shapes, starts
// as an exact copy of the student, and is only ever moved by EmaUpdate;
// its Vars have requires_grad off so no gradient can reach it.
struct NetworkPair {
  EncoderConfig encoder_cfg;
  HeadConfig head_cfg;
  ParamSet student;
  ParamSet teacher;
  Tensor center;  // {1, out_dim} running teacher-logit mean
};

NetworkPair MakeNetworkPair(const EncoderConfig& ecfg, const HeadConfig& hcfg,
                            uint64_t seed);

// theta_t <- m * theta_t + (1 - m) * theta_s, elementwise, for every block.
// Throws ParameterError if m is outside [0, 1].
void EmaUpdate(NetworkPair& pair, double momentum);

// c <- m_c * c + (1 - m_c) * column-mean(teacher_logits). The center is
// subtracted from teacher logits before the teacher softmax, never from
// the student's.
void UpdateCenter(Tensor& center, const Tensor& teacher_logits,
                  double center_momentum);

}  // namespace rdino

#endif  // RDINO_MODEL_NETWORK_H_
