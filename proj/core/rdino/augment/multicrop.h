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

#ifndef RDINO_AUGMENT_MULTICROP_H_
#define RDINO_AUGMENT_MULTICROP_H_

#include <array>
#include <string>
#include <vector>

#include "rdino/augment/augment.h"
#include "rdino/features/fbank.h"
#include "rdino/features/wav.h"

namespace rdino {

// Which augmentation strategy a run uses. Strategies are mutually
// exclusive per run; "wav" operates on the waveform before feature
// extraction, "spec" and "shuffle" operate on normalized features.
enum class AugmentStrategy { kNone, kWav, kSpec, kShuffle };

AugmentStrategy ParseAugmentStrategy(const std::string& name);
std::string AugmentStrategyName(AugmentStrategy s);

struct AugmentPolicy {
  AugmentStrategy strategy = AugmentStrategy::kWav;
  double snr_min_db = 0.0;
  double snr_max_db = 15.0;
  int time_mask_max = 15;
  int freq_mask_max = 6;
  int shuffle_segment = 50;
  double global_crop_seconds = 4.0;
  double local_crop_seconds = 2.0;
};

// Fixed pool of noise material for the wav strategy: seeded white noise
// plus synthetic babble (a sum of 4 synthetic speakers). Built once per
// run; segments are drawn from random offsets.
struct NoiseBank {
  std::vector<Waveform> clips;
};

NoiseBank BuildNoiseBank(uint64_t seed, int sample_rate = 16000,
                         double clip_seconds = 5.0);

// 2 global + 4 local augmented views of one utterance.
struct ViewSet {
  std::array<FeatureMatrix, 2> globals;
  std::array<FeatureMatrix, 4> locals;
  std::array<int64_t, 2> global_starts{};  // crop offsets in samples
  std::array<int64_t, 4> local_starts{};
  std::string utterance_id;

  const FeatureMatrix& view(int i) const {
    return i < 2 ? globals[i] : locals[i - 2];
  }
  static constexpr int kNumViews = 6;
  static constexpr int kNumGlobal = 2;
};

// Crops 2 global and 4 local segments at uniform start positions (tiling
// the utterance to one global length first if it is shorter), augments
// each view independently per the policy, then featurizes and instance-
// normalizes. Fully deterministic given the rng state.
ViewSet MultiCrop(const Waveform& wave, const AugmentPolicy& policy,
                  const NoiseBank& bank, const FbankOptions& fbank_opts,
                  Rng& rng);

}  // namespace rdino

#endif  // RDINO_AUGMENT_MULTICROP_H_
