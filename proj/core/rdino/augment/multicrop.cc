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

#include "rdino/augment/multicrop.h"

#include <algorithm>
#include <cmath>

#include "rdino/common/error.h"
#include "rdino/features/synth.h"

namespace rdino {

AugmentStrategy ParseAugmentStrategy(const std::string& name) {
  if (name == "none") return AugmentStrategy::kNone;
  if (name == "wav") return AugmentStrategy::kWav;
  if (name == "spec") return AugmentStrategy::kSpec;
  if (name == "shuffle") return AugmentStrategy::kShuffle;
  throw ConfigError("unknown augment strategy \"" + name +
                    "\" (expected none|wav|spec|shuffle)");
}

std::string AugmentStrategyName(AugmentStrategy s) {
  switch (s) {
    case AugmentStrategy::kNone: return "none";
    case AugmentStrategy::kWav: return "wav";
    case AugmentStrategy::kSpec: return "spec";
    case AugmentStrategy::kShuffle: return "shuffle";
  }
  return "none";
}

NoiseBank BuildNoiseBank(uint64_t seed, int sample_rate, double clip_seconds) {
  NoiseBank bank;
  int64_t n = static_cast<int64_t>(clip_seconds * sample_rate);

  // 4 white noise clips
  for (int c = 0; c < 4; ++c) {
    Rng rng(Rng::Derive(seed, 0xB0B0, static_cast<uint64_t>(c)));
    Waveform w;
    w.sample_rate = sample_rate;
    w.samples.resize(n);
    for (int64_t i = 0; i < n; ++i) w.samples[i] = 0.3 * rng.Uniform(-1.0, 1.0);
    bank.clips.push_back(std::move(w));
  }

  // 4 babble clips, each a sum of 4 synthetic speakers
  for (int c = 0; c < 4; ++c) {
    uint64_t babble_seed = Rng::Derive(seed, 0xBABB1E, static_cast<uint64_t>(c));
    Waveform mix;
    mix.sample_rate = sample_rate;
    mix.samples.assign(n, 0.0);
    for (int s = 0; s < 4; ++s) {
      SynthSpeakerSpec spec = MakeSpeakerSpec(babble_seed, s);
      Waveform voice =
          SynthUtteranceWave(spec, babble_seed, s, 0, clip_seconds, sample_rate);
      for (int64_t i = 0; i < n; ++i) mix.samples[i] += 0.25 * voice.samples[i];
    }
    bank.clips.push_back(std::move(mix));
  }
  return bank;
}

namespace {

Waveform CropSamples(const Waveform& wave, int64_t start, int64_t len) {
  Waveform out;
  out.sample_rate = wave.sample_rate;
  out.samples.assign(wave.samples.begin() + start,
                     wave.samples.begin() + start + len);
  return out;
}

Waveform NoiseSegment(const NoiseBank& bank, int64_t len, Rng& rng) {
  const Waveform& clip =
      bank.clips[rng.UniformInt(0, static_cast<int64_t>(bank.clips.size()) - 1)];
  int64_t clip_len = static_cast<int64_t>(clip.samples.size());
  Waveform seg;
  seg.sample_rate = clip.sample_rate;
  if (clip_len >= len) {
    int64_t start = rng.UniformInt(0, clip_len - len);
    seg.samples.assign(clip.samples.begin() + start,
                       clip.samples.begin() + start + len);
  } else {
    seg = TileTo(clip, len);
  }
  return seg;
}

// Wav strategy: independently, with probability 0.5 each, additive noise
// (SNR uniform in the policy range) and/or a synthetic-RIR reverb, noise
// first. Draws happen in a fixed order so one seed fixes the whole view.
Waveform WavAugment(const Waveform& crop, const AugmentPolicy& policy,
                    const NoiseBank& bank, Rng& rng) {
  Waveform out = crop;
  bool do_noise = rng.Uniform() < 0.5;
  bool do_reverb = rng.Uniform() < 0.5;
  if (do_noise) {
    double snr = rng.Uniform(policy.snr_min_db, policy.snr_max_db);
    Waveform noise =
        NoiseSegment(bank, static_cast<int64_t>(out.samples.size()), rng);
    out = AddNoiseAtSnr(out, noise, snr);
  }
  if (do_reverb) {
    double decay_ms = rng.Uniform(20.0, 120.0);
    int taps = static_cast<int>(rng.UniformInt(64, 256));
    uint64_t rir_seed = rng.NextU64();
    out = Reverb(out, SynthRir(decay_ms, taps, rir_seed, out.sample_rate));
  }
  return out;
}

FeatureMatrix MakeView(const Waveform& source, int64_t crop_len,
                       const AugmentPolicy& policy, const NoiseBank& bank,
                       const FbankOptions& fbank_opts, Rng& rng,
                       int64_t* start_out) {
  int64_t n = static_cast<int64_t>(source.samples.size());
  int64_t start = rng.UniformInt(0, n - crop_len);
  *start_out = start;
  Waveform crop = CropSamples(source, start, crop_len);

  if (policy.strategy == AugmentStrategy::kWav) {
    crop = WavAugment(crop, policy, bank, rng);
  }
  FeatureMatrix feat = InstanceNormalize(Fbank(crop, fbank_opts));
  if (policy.strategy == AugmentStrategy::kSpec) {
    feat = SpecAugment(feat, rng, policy.time_mask_max, policy.freq_mask_max);
  } else if (policy.strategy == AugmentStrategy::kShuffle) {
    feat = ShuffleFeatures(feat, rng, policy.shuffle_segment);
  }
  return feat;
}

}  // namespace

ViewSet MultiCrop(const Waveform& wave, const AugmentPolicy& policy,
                  const NoiseBank& bank, const FbankOptions& fbank_opts,
                  Rng& rng) {
  if (wave.samples.empty()) throw InputError("multicrop: empty waveform");
  int64_t global_len = static_cast<int64_t>(
      std::llround(policy.global_crop_seconds * wave.sample_rate));
  int64_t local_len = static_cast<int64_t>(
      std::llround(policy.local_crop_seconds * wave.sample_rate));

  // Shorter utterances are tiled up to one global crop.
  Waveform source = static_cast<int64_t>(wave.samples.size()) < global_len
                        ? TileTo(wave, global_len)
                        : wave;

  ViewSet views;
  for (int g = 0; g < ViewSet::kNumGlobal; ++g) {
    views.globals[g] = MakeView(source, global_len, policy, bank, fbank_opts,
                                rng, &views.global_starts[g]);
  }
  for (size_t l = 0; l < views.locals.size(); ++l) {
    views.locals[l] = MakeView(source, local_len, policy, bank, fbank_opts,
                               rng, &views.local_starts[l]);
  }
  return views;
}

}  // namespace rdino
