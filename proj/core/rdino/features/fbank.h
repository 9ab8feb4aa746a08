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

#ifndef RDINO_FEATURES_FBANK_H_
#define RDINO_FEATURES_FBANK_H_

#include <vector>

#include "rdino/features/wav.h"
#include "rdino/numerics/tensor.h"

namespace rdino {

// Log mel-filterbank features for one utterance or view: a {T, F} matrix
// plus the framing metadata it was produced with.
struct FeatureMatrix {
  Tensor frames;  // {T, F}
  double frame_length_ms = 25.0;
  double frame_shift_ms = 10.0;

  int64_t num_frames() const { return frames.rows(); }
  int64_t feat_dim() const { return frames.cols(); }
};

struct FbankOptions {
  int n_mels = 80;
  double frame_length_ms = 25.0;
  double frame_shift_ms = 10.0;
  // No pre-emphasis and no dither; both are deliberately absent from the
  // pipeline and the constants below are fixed for reproducibility.
  static constexpr double kLogFloor = 1e-10;
};

// HTK mel scale.
double HzToMel(double hz);
double MelToHz(double mel);

// Frame count for a wave of n samples: 1 + floor((n - win) / shift).
int64_t NumFrames(int64_t n_samples, int win_samples, int shift_samples);

// Log mel-filterbank: per frame, Hann window -> zero-padded power-of-two
// FFT -> magnitude spectrum -> triangular mel bank over [0, Nyquist] ->
// log(x + 1e-10). Throws InputError if the wave is shorter than a window.
FeatureMatrix Fbank(const Waveform& wave, const FbankOptions& opts = {});

// Per-utterance, per-dimension normalization: (x - mean) / sqrt(var + 1e-5),
// biased variance. Constant dimensions map to ~0 through the epsilon.
FeatureMatrix InstanceNormalize(const FeatureMatrix& feat);

// Center frequencies (Hz) of the triangular mel filters, as the filterbank
// construction places them.
std::vector<double> MelFilterCentersHz(int n_mels, int sample_rate);

}  // namespace rdino

#endif  // RDINO_FEATURES_FBANK_H_
