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

#ifndef RDINO_TRAINER_TRAINER_H_
#define RDINO_TRAINER_TRAINER_H_

#include <string>
#include <vector>

#include "rdino/features/synth.h"
#include "rdino/trainer/checkpoint.h"
#include "rdino/trainer/optimizer.h"

namespace rdino {

struct StepRecord {
  int64_t step = 0;
  LossBreakdown loss;
  CollapseStats collapse;
};

struct TrainResult {
  CheckpointState final_state;
  std::vector<StepRecord> steps;
  std::string final_checkpoint_path;  // empty when out_dir was empty
};

// Builds the training corpus the config describes: the synthetic corpus,
// or every *.wav under audio_dir (sorted by filename; the speaker id is
// the part of the stem before the first '_', which only matters for
// evaluation).
Corpus BuildCorpus(const TrainConfig& cfg);

// Full training run from a fresh initialization. Per step: sample batch ->
// multicrop/augment -> total loss -> backward -> SGD on the student ->
// EMA teacher update -> center update, with one log line per step
// ("step ce dr rer total mean_std entropy"). Deterministic given the
// config: every random draw derives from (seed, epoch, item index).
// Writes per-epoch and final checkpoints plus train.log under out_dir
// (pass "" to keep everything in memory).
TrainResult Train(const TrainConfig& cfg, const Corpus& corpus,
                  const std::string& out_dir);

// Continues a saved run until cfg.epochs from the checkpoint's step.
// The corpus is rebuilt from the embedded config.
TrainResult Resume(const std::string& checkpoint_path,
                   const std::string& out_dir);

}  // namespace rdino

#endif  // RDINO_TRAINER_TRAINER_H_
