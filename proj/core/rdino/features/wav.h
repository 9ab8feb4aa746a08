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

#ifndef RDINO_FEATURES_WAV_H_
#define RDINO_FEATURES_WAV_H_

#include <string>
#include <vector>

namespace rdino {

// A mono waveform with samples nominally in [-1, 1].
struct Waveform {
  std::vector<double> samples;
  int sample_rate = 16000;

  double Seconds() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

// Reads a RIFF/WAVE file containing 16-bit little-endian mono PCM.
// Anything else (stereo, other codecs, malformed chunks) is rejected.
Waveform ReadWav(const std::string& path);

// Writes 16-bit mono PCM; samples are clamped to [-1, 1] and rounded.
void WriteWav(const std::string& path, const Waveform& wave);

}  // namespace rdino

#endif  // RDINO_FEATURES_WAV_H_
