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

#include "rdino/augment/augment.h"

#include <algorithm>
#include <cmath>

#include "rdino/common/error.h"

namespace rdino {

Waveform TileTo(const Waveform& wave, int64_t n_samples) {
  if (wave.samples.empty()) throw InputError("tile: empty waveform");
  Waveform out;
  out.sample_rate = wave.sample_rate;
  out.samples.resize(n_samples);
  for (int64_t i = 0; i < n_samples; ++i) {
    out.samples[i] = wave.samples[i % wave.samples.size()];
  }
  return out;
}

namespace {

double MeanPower(const std::vector<double>& x, size_t n) {
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) acc += x[i] * x[i];
  return acc / static_cast<double>(n);
}

}  // namespace

Waveform AddNoiseAtSnr(const Waveform& clean, const Waveform& noise,
                       double snr_db) {
  if (clean.samples.empty()) throw InputError("add_noise: empty clean signal");
  if (noise.samples.size() < clean.samples.size()) {
    throw InputError("add_noise: noise shorter than clean signal");
  }
  size_t n = clean.samples.size();
  double p_clean = MeanPower(clean.samples, n);
  double p_noise = MeanPower(noise.samples, n);
  if (p_clean <= 0.0) throw InputError("add_noise: silent clean signal");
  if (p_noise <= 0.0) throw InputError("add_noise: silent noise signal");

  // 10*log10(p_clean / (alpha^2 * p_noise)) = snr_db
  double alpha = std::sqrt(p_clean / (p_noise * std::pow(10.0, snr_db / 10.0)));
  Waveform out;
  out.sample_rate = clean.sample_rate;
  out.samples.resize(n);
  for (size_t i = 0; i < n; ++i) {
    out.samples[i] = clean.samples[i] + alpha * noise.samples[i];
  }
  return out;
}

Waveform Reverb(const Waveform& wave, const std::vector<double>& impulse) {
  if (impulse.empty()) throw InputError("reverb: empty impulse");
  bool all_zero = true;
  for (double h : impulse) {
    if (h != 0.0) {
      all_zero = false;
      break;
    }
  }
  if (all_zero) throw InputError("reverb: all-zero impulse");
  if (wave.samples.empty()) throw InputError("reverb: empty waveform");

  size_t n = wave.samples.size();
  size_t k = impulse.size();
  Waveform out;
  out.sample_rate = wave.sample_rate;
  out.samples.assign(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    size_t jmax = std::min(k, i + 1);
    for (size_t j = 0; j < jmax; ++j) {
      acc += impulse[j] * wave.samples[i - j];
    }
    out.samples[i] = acc;
  }

  double in_peak = 0.0, out_peak = 0.0;
  for (size_t i = 0; i < n; ++i) {
    in_peak = std::max(in_peak, std::fabs(wave.samples[i]));
    out_peak = std::max(out_peak, std::fabs(out.samples[i]));
  }
  if (out_peak > 0.0 && in_peak > 0.0) {
    double scale = in_peak / out_peak;
    for (double& s : out.samples) s *= scale;
  }
  return out;
}

std::vector<double> SynthRir(double decay_ms, int taps, uint64_t seed,
                             int sample_rate) {
  if (taps < 1) throw InputError("synth_rir: taps must be >= 1");
  if (decay_ms <= 0.0) throw InputError("synth_rir: non-positive decay");
  Rng rng(seed);
  std::vector<double> h(taps);
  h[0] = 1.0;
  double tau = decay_ms * 1e-3;  // envelope time constant in seconds
  for (int i = 1; i < taps; ++i) {
    double t = static_cast<double>(i) / sample_rate;
    double sign = rng.Uniform() < 0.5 ? -1.0 : 1.0;
    h[i] = sign * std::exp(-t / tau);
  }
  return h;
}

SpecMask DrawSpecMask(int64_t num_frames, int64_t num_bins, Rng& rng,
                      int max_time, int max_freq) {
  SpecMask m;
  m.time_len = rng.UniformInt(0, max_time);
  m.time_start = rng.UniformInt(0, std::max<int64_t>(num_frames - 1, 0));
  m.freq_len = rng.UniformInt(0, max_freq);
  m.freq_start = rng.UniformInt(0, std::max<int64_t>(num_bins - 1, 0));
  return m;
}

FeatureMatrix ApplySpecMask(const FeatureMatrix& feat, const SpecMask& mask) {
  FeatureMatrix out = feat;
  int64_t t = out.num_frames(), f = out.feat_dim();
  int64_t t_end = std::min(mask.time_start + mask.time_len, t);
  int64_t f_end = std::min(mask.freq_start + mask.freq_len, f);
  for (int64_t i = mask.time_start; i < t_end; ++i) {
    for (int64_t j = 0; j < f; ++j) out.frames(i, j) = 0.0;
  }
  for (int64_t j = mask.freq_start; j < f_end; ++j) {
    for (int64_t i = 0; i < t; ++i) out.frames(i, j) = 0.0;
  }
  return out;
}

FeatureMatrix SpecAugment(const FeatureMatrix& feat, Rng& rng, int max_time,
                          int max_freq) {
  return ApplySpecMask(
      feat, DrawSpecMask(feat.num_frames(), feat.feat_dim(), rng, max_time,
                         max_freq));
}

FeatureMatrix ShuffleFeatures(const FeatureMatrix& feat, Rng& rng,
                              int segment) {
  int64_t t = feat.num_frames();
  if (t <= segment) return feat;
  int64_t n_blocks = (t + segment - 1) / segment;
  std::vector<int64_t> order(n_blocks);
  for (int64_t i = 0; i < n_blocks; ++i) order[i] = i;
  // Fisher-Yates with the seeded engine
  for (int64_t i = n_blocks - 1; i > 0; --i) {
    int64_t j = rng.UniformInt(0, i);
    std::swap(order[i], order[j]);
  }
  FeatureMatrix out = feat;
  int64_t f = feat.feat_dim();
  int64_t row = 0;
  for (int64_t b = 0; b < n_blocks; ++b) {
    int64_t src_start = order[b] * segment;
    int64_t len = std::min<int64_t>(segment, t - src_start);
    for (int64_t i = 0; i < len; ++i) {
      for (int64_t j = 0; j < f; ++j) {
        out.frames(row + i, j) = feat.frames(src_start + i, j);
      }
    }
    row += len;
  }
  return out;
}

}  // namespace rdino
