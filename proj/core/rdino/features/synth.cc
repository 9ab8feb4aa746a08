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

#include "rdino/features/synth.h"

#include <cmath>
#include <cstdio>

#include "rdino/common/error.h"
#include "rdino/common/rng.h"

namespace rdino {
namespace {

constexpr double kMaxHarmonicHz = 4000.0;

std::string FormatId(const char* prefix, int idx) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%03d", prefix, idx);
  return std::string(buf);
}

double FormantGain(const SynthSpeakerSpec& spec, double hz) {
  double g = 0.05;  // spectral floor between resonances
  for (size_t i = 0; i < spec.formant_hz.size(); ++i) {
    double d = (hz - spec.formant_hz[i]) / spec.formant_bw[i];
    g += std::exp(-0.5 * d * d);
  }
  return g;
}

}  // namespace

SynthSpeakerSpec MakeSpeakerSpec(uint64_t corpus_seed, int speaker) {
  Rng rng(Rng::Derive(corpus_seed, 0xA11CE, static_cast<uint64_t>(speaker)));
  SynthSpeakerSpec spec;
  spec.seed = corpus_seed;
  spec.f0_hz = rng.Uniform(90.0, 280.0);
  spec.tilt_hz = rng.Uniform(1200.0, 3500.0);
  spec.formant_hz = {rng.Uniform(280.0, 850.0), rng.Uniform(900.0, 2300.0),
                     rng.Uniform(2400.0, 3400.0)};
  spec.formant_bw = {rng.Uniform(80.0, 180.0), rng.Uniform(100.0, 220.0),
                     rng.Uniform(150.0, 280.0)};
  return spec;
}

Waveform SynthUtteranceWave(const SynthSpeakerSpec& spec, uint64_t corpus_seed,
                            int speaker, int utterance, double seconds,
                            int sample_rate) {
  if (seconds <= 0.0) throw InputError("synth: non-positive duration");
  Rng rng(Rng::Derive(corpus_seed, 0x07735,
                      static_cast<uint64_t>(speaker),
                      static_cast<uint64_t>(utterance)));

  int64_t n = static_cast<int64_t>(std::llround(seconds * sample_rate));
  double f0 = spec.f0_hz * (1.0 + rng.Uniform(-0.02, 0.02));
  double vib_rate = rng.Uniform(4.0, 7.0);
  double vib_depth = rng.Uniform(0.005, 0.015);
  double env_rate = rng.Uniform(0.3, 1.0);
  double env_phase = rng.Uniform(0.0, 2.0 * M_PI);

  int n_harmonics = static_cast<int>(kMaxHarmonicHz / f0);
  std::vector<double> amp(n_harmonics), phase(n_harmonics);
  for (int h = 0; h < n_harmonics; ++h) {
    double hz = f0 * (h + 1);
    amp[h] = FormantGain(spec, hz) * std::exp(-hz / spec.tilt_hz);
    phase[h] = rng.Uniform(0.0, 2.0 * M_PI);
  }

  Waveform wave;
  wave.sample_rate = sample_rate;
  wave.samples.assign(n, 0.0);

  // Phase-accumulated harmonics so vibrato keeps all partials locked.
  double theta = 0.0;
  double peak = 0.0;
  for (int64_t i = 0; i < n; ++i) {
    double tsec = static_cast<double>(i) / sample_rate;
    double inst_f0 =
        f0 * (1.0 + vib_depth * std::sin(2.0 * M_PI * vib_rate * tsec));
    theta += 2.0 * M_PI * inst_f0 / sample_rate;
    double env = 1.0 + 0.2 * std::sin(2.0 * M_PI * env_rate * tsec + env_phase);
    double s = 0.0;
    for (int h = 0; h < n_harmonics; ++h) {
      s += amp[h] * std::sin(theta * (h + 1) + phase[h]);
    }
    s *= env;
    wave.samples[i] = s;
    peak = std::max(peak, std::fabs(s));
  }

  // Peak-normalize to 0.5 and add a -35 dB noise floor.
  double scale = peak > 0.0 ? 0.5 / peak : 1.0;
  double noise_amp = 0.5 * std::pow(10.0, -35.0 / 20.0);
  for (int64_t i = 0; i < n; ++i) {
    wave.samples[i] =
        wave.samples[i] * scale + noise_amp * rng.Uniform(-1.0, 1.0);
  }
  return wave;
}

Corpus SynthCorpus(int n_speakers, int utts_per_speaker, double utt_seconds,
                   uint64_t seed, int sample_rate) {
  if (n_speakers < 1 || utts_per_speaker < 1) {
    throw InputError("synth: speaker and utterance counts must be >= 1");
  }
  Corpus corpus;
  corpus.utterances.reserve(static_cast<size_t>(n_speakers) *
                            utts_per_speaker);
  for (int s = 0; s < n_speakers; ++s) {
    SynthSpeakerSpec spec = MakeSpeakerSpec(seed, s);
    std::string spk = FormatId("spk", s);
    for (int u = 0; u < utts_per_speaker; ++u) {
      SynthUtterance utt;
      utt.speaker_id = spk;
      utt.utterance_id = spk + "_" + FormatId("utt", u);
      utt.wave =
          SynthUtteranceWave(spec, seed, s, u, utt_seconds, sample_rate);
      corpus.utterances.push_back(std::move(utt));
    }
  }
  return corpus;
}

}  // namespace rdino
