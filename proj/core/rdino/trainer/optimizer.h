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

#ifndef RDINO_TRAINER_OPTIMIZER_H_
#define RDINO_TRAINER_OPTIMIZER_H_

#include <vector>

#include "rdino/model/network.h"
#include "rdino/trainer/train_config.h"

namespace rdino {

// Warmup followed by cosine decay:
//   step <  warmup_steps: peak_lr * step / warmup_steps
//   step >= warmup_steps: peak_lr * 0.5 * (1 + cos(pi * progress)),
// where progress runs from 0 at the warmup boundary to 1 at
// epochs * steps_per_epoch. lr_at(0) is 0 and lr_at(total) is 0.
double LrAt(int64_t step, int64_t steps_per_epoch, const TrainConfig& cfg);

// SGD with momentum: v <- momentum * v + g; theta <- theta - lr * v.
// Velocity slots mirror the parameter shapes in creation order.
class SgdOptimizer {
 public:
  explicit SgdOptimizer(const ParamSet& params);

  // Reads each parameter's accumulated gradient, updates the velocity and
  // the parameter in place, then clears the gradient. Throws TrainingError
  // naming the first parameter with a non-finite gradient.
  void Step(ParamSet& params, double lr, double momentum);

  std::vector<Tensor>& velocities() { return velocities_; }
  const std::vector<Tensor>& velocities() const { return velocities_; }

 private:
  std::vector<Tensor> velocities_;
};

}  // namespace rdino

#endif  // RDINO_TRAINER_OPTIMIZER_H_
