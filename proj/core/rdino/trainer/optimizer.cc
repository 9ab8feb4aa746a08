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

#include "rdino/trainer/optimizer.h"

#include <cmath>

namespace rdino {

double LrAt(int64_t step, int64_t steps_per_epoch, const TrainConfig& cfg) {
  if (step < 0) throw ParameterError("lr_at: negative step");
  if (steps_per_epoch < 1) throw ParameterError("lr_at: steps_per_epoch < 1");
  int64_t total = static_cast<int64_t>(cfg.epochs) * steps_per_epoch;
  int64_t warmup = static_cast<int64_t>(cfg.warmup_epochs) * steps_per_epoch;
  if (step < warmup) {
    return cfg.peak_lr * static_cast<double>(step) /
           static_cast<double>(warmup);
  }
  if (total <= warmup) return cfg.peak_lr;
  double progress = static_cast<double>(step - warmup) /
                    static_cast<double>(total - warmup);
  if (progress > 1.0) progress = 1.0;
  return cfg.peak_lr * 0.5 * (1.0 + std::cos(M_PI * progress));
}

SgdOptimizer::SgdOptimizer(const ParamSet& params) {
  velocities_.reserve(params.size());
  for (size_t i = 0; i < params.size(); ++i) {
    velocities_.emplace_back(params.var(i).value().shape());
  }
}

void SgdOptimizer::Step(ParamSet& params, double lr, double momentum) {
  if (velocities_.size() != params.size()) {
    throw ContractError("optimizer state does not match parameter set");
  }
  for (size_t i = 0; i < params.size(); ++i) {
    Tensor grad = params.var(i).grad();
    if (!grad.IsFinite()) {
      throw TrainingError("non-finite gradient in parameter " +
                          params.name(i));
    }
    std::vector<double>& v = velocities_[i].data();
    std::vector<double>& theta = params.var(i).mutable_value().data();
    const std::vector<double>& g = grad.data();
    for (size_t j = 0; j < v.size(); ++j) {
      v[j] = momentum * v[j] + g[j];
      theta[j] -= lr * v[j];
    }
    params.var(i).ClearGrad();
  }
}

}  // namespace rdino
