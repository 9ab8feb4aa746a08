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

#ifndef RDINO_TRAINER_CHECKPOINT_H_
#define RDINO_TRAINER_CHECKPOINT_H_

#include <string>
#include <vector>

#include "rdino/model/network.h"
#include "rdino/trainer/train_config.h"

namespace rdino {

// Checkpoint layout:
//   RDINO-CKPT v1
//   step <n>
//   config <k>
//   <k config lines, the exact SerializeConfig echo>
//   blocks <m>
//   then m times: "<name> <rank> <d0> [<d1> [<d2>]]\n" followed by the
//   block payload as little-endian float32.
// Blocks cover student.*, teacher.*, center and opt.velocity.*.
//
// Values are stored in float32; loading gives back exactly the float32
// values, so save(load(f)) reproduces f byte for byte.
struct CheckpointState {
  TrainConfig config;
  NetworkPair pair;
  std::vector<Tensor> velocities;  // aligned with student parameter order
  int64_t step = 0;
};

void SaveCheckpoint(const CheckpointState& state, const std::string& path);

// Rebuilds the model from the config echo and fills every block. Throws
// FormatVersionError on a bad magic/version line, TruncatedFileError when
// the file ends early, and ShapeMismatchError (naming the block) when a
// block disagrees with the shape implied by the config.
CheckpointState LoadCheckpoint(const std::string& path);

}  // namespace rdino

#endif  // RDINO_TRAINER_CHECKPOINT_H_
