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

#ifndef RDINO_TRAINER_TRAIN_CONFIG_H_
#define RDINO_TRAINER_TRAIN_CONFIG_H_

#include <cstdint>
#include <string>
#include <vector>

#include "rdino/augment/multicrop.h"
#include "rdino/model/network.h"
#include "rdino/objective/losses.h"

namespace rdino {

// Full run configuration. The on-disk form is flat "key = value" text
// with '#' comments; unknown keys are rejected. Defaults are the desk
// scale; the published-scale values are reachable through the same keys.
struct TrainConfig {
  uint64_t seed = 17;
  int epochs = 10;          // paper scale: 60
  int warmup_epochs = 2;    // paper scale: 10
  double peak_lr = 0.05;    // paper scale: 0.325
  double momentum = 0.9;
  int batch_size = 64;
  double lambda = 0.3;
  double tau_t = 0.04;
  double tau_s = 0.1;
  double eps = 1e-4;
  double ema_momentum = 0.996;
  double center_momentum = 0.9;
  bool centering = true;
  bool centered_correlation = false;

  AugmentPolicy augment;

  int n_mels = 80;
  double frame_length_ms = 25.0;
  double frame_shift_ms = 10.0;
  int sample_rate = 16000;

  EncoderConfig encoder;
  HeadConfig head;

  // Training data: a synthetic corpus by default, or a directory of wav
  // files when audio_dir is non-empty.
  int corpus_speakers = 20;
  int corpus_utts_per_speaker = 10;
  double corpus_utt_seconds = 4.0;
  uint64_t corpus_seed = 17;
  std::string audio_dir;

  FbankOptions FbankOpts() const;
  ObjectiveOptions Objective() const;

  // Asserts the invariants: positive rates, warmup_epochs < epochs (or a
  // zero-epoch smoke run), and the sharpening condition tau_t < tau_s.
  void Validate() const;
};

// Serialization used both for config files and the checkpoint echo.
// Writes every key, one per line, in a fixed order.
std::vector<std::string> SerializeConfig(const TrainConfig& cfg);
void WriteConfigFile(const std::string& path, const TrainConfig& cfg);

// Parses "key = value" lines. Throws ConfigError on syntax errors,
// unknown keys or unparsable values. Omitted keys keep their defaults;
// corpus_seed defaults to seed when not given explicitly.
TrainConfig ParseConfigLines(const std::vector<std::string>& lines);
TrainConfig ReadConfigFile(const std::string& path);

}  // namespace rdino

#endif  // RDINO_TRAINER_TRAIN_CONFIG_H_
