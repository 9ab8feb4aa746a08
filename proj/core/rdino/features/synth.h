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

#ifndef RDINO_FEATURES_SYNTH_H_
#define RDINO_FEATURES_SYNTH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "rdino/features/wav.h"

namespace rdino {

// Generative parameters of one synthetic speaker: fundamental frequency,
// spectral tilt and formant-like resonances. Speakers drawn from different
// seeds differ in all of them with probability 1.
struct SynthSpeakerSpec {
  double f0_hz;
  double tilt_hz;                  // harmonic amplitude decay constant
  std::vector<double> formant_hz;  // resonance centers
  std::vector<double> formant_bw;  // resonance bandwidths
  uint64_t seed;
};

struct SynthUtterance {
  std::string speaker_id;
  std::string utterance_id;  // "spk012_utt003"
  Waveform wave;
};

struct Corpus {
  std::vector<SynthUtterance> utterances;
};

// Speaker parameters for index `speaker` under a corpus seed. Exposed so
// held-out utterances of the same speakers can be generated separately.
SynthSpeakerSpec MakeSpeakerSpec(uint64_t corpus_seed, int speaker);

// One utterance of a speaker: harmonic source with per-utterance F0 jitter,
// vibrato, random harmonic phases, a slow amplitude envelope and a low
// noise floor. Fully determined by (corpus_seed, speaker, utterance).
Waveform SynthUtteranceWave(const SynthSpeakerSpec& spec, uint64_t corpus_seed,
                            int speaker, int utterance, double seconds,
                            int sample_rate = 16000);

// Deterministic corpus of n_speakers x utts_per_speaker utterances.
// Utterance (s, u) is identical no matter how many other utterances are
// requested, which is what makes held-out splits cheap.
Corpus SynthCorpus(int n_speakers, int utts_per_speaker, double utt_seconds,
                   uint64_t seed, int sample_rate = 16000);

}  // namespace rdino

#endif  // RDINO_FEATURES_SYNTH_H_
