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

#ifndef RDINO_AUGMENT_AUGMENT_H_
#define RDINO_AUGMENT_AUGMENT_H_

#include <cstdint>
#include <vector>

#include "rdino/common/rng.h"
#include "rdino/features/fbank.h"
#include "rdino/features/wav.h"

namespace rdino {

// Repeats `wave` until it is at least n_samples long, then truncates.
Waveform TileTo(const Waveform& wave, int64_t n_samples);

// clean + alpha * noise, with alpha chosen so the power ratio of clean to
// scaled noise is exactly snr_db (power = mean squared amplitude). The
// noise must be at least as long as the clean signal; tile it first.
// Throws InputError when either signal is silent (the SNR is undefined).
Waveform AddNoiseAtSnr(const Waveform& clean, const Waveform& noise,
                       double snr_db);

// Linear convolution with `impulse`, truncated to the input length and
// rescaled so the output peak equals the input peak.
Waveform Reverb(const Waveform& wave, const std::vector<double>& impulse);

// Synthetic room impulse response: first tap 1, then sign-random taps with
// an exp(-t / decay_ms) amplitude envelope.
std::vector<double> SynthRir(double decay_ms, int taps, uint64_t seed,
                             int sample_rate = 16000);

// One time mask and one frequency mask, drawn as (length, position) and
// clamped to the matrix bounds. Masked cells are set to 0, which after
// instance normalization is a mean fill.
struct SpecMask {
  int64_t time_start = 0, time_len = 0;
  int64_t freq_start = 0, freq_len = 0;
};

SpecMask DrawSpecMask(int64_t num_frames, int64_t num_bins, Rng& rng,
                      int max_time = 15, int max_freq = 6);
FeatureMatrix ApplySpecMask(const FeatureMatrix& feat, const SpecMask& mask);
FeatureMatrix SpecAugment(const FeatureMatrix& feat, Rng& rng,
                          int max_time = 15, int max_freq = 6);

// Permutes consecutive blocks of `segment` frames uniformly; frames inside
// a block keep their order. Matrices of `segment` frames or fewer are
// returned unchanged.
FeatureMatrix ShuffleFeatures(const FeatureMatrix& feat, Rng& rng,
                              int segment = 50);

}  // namespace rdino

#endif  // RDINO_AUGMENT_AUGMENT_H_
