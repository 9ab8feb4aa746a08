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

#include "rdino/features/fbank.h"

#include <cmath>
#include <complex>

#include "rdino/common/error.h"

namespace rdino {
namespace {

// In-place iterative radix-2 FFT. Sizes here are always powers of two
// (the window is zero-padded), so no general-size machinery is needed.
void Fft(std::vector<std::complex<double>>& a) {
  size_t n = a.size();
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    double ang = -2.0 * M_PI / static_cast<double>(len);
    std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (size_t j = 0; j < len / 2; ++j) {
        std::complex<double> u = a[i + j];
        std::complex<double> v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

size_t NextPowerOfTwo(size_t n) {
  size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Triangular filters between n_mels + 2 equally spaced mel points from 0 to
// Nyquist, evaluated at FFT bin frequencies. Stored dense per filter over
// its support [start_bin, start_bin + weights.size()).
struct MelFilter {
  int start_bin;
  std::vector<double> weights;
};

std::vector<double> MelPoints(int n_mels, int sample_rate) {
  double mel_hi = HzToMel(sample_rate / 2.0);
  std::vector<double> pts(n_mels + 2);
  for (int i = 0; i < n_mels + 2; ++i) {
    pts[i] = mel_hi * static_cast<double>(i) / (n_mels + 1);
  }
  return pts;
}

std::vector<MelFilter> BuildMelBank(int n_mels, size_t n_fft,
                                    int sample_rate) {
  std::vector<double> pts = MelPoints(n_mels, sample_rate);
  size_t n_bins = n_fft / 2 + 1;
  double bin_hz = static_cast<double>(sample_rate) / static_cast<double>(n_fft);
  std::vector<MelFilter> bank(n_mels);
  for (int m = 0; m < n_mels; ++m) {
    double lo = MelToHz(pts[m]);
    double center = MelToHz(pts[m + 1]);
    double hi = MelToHz(pts[m + 2]);
    MelFilter f;
    f.start_bin = -1;
    for (size_t b = 0; b < n_bins; ++b) {
      double hz = bin_hz * static_cast<double>(b);
      double w = 0.0;
      if (hz > lo && hz < hi) {
        w = hz <= center ? (hz - lo) / (center - lo) : (hi - hz) / (hi - center);
      }
      if (w > 0.0) {
        if (f.start_bin < 0) f.start_bin = static_cast<int>(b);
        f.weights.push_back(w);
      } else if (f.start_bin >= 0) {
        break;
      }
    }
    if (f.start_bin < 0) f.start_bin = 0;  // degenerate narrow filter
    bank[m] = std::move(f);
  }
  return bank;
}

}  // namespace

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double MelToHz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

int64_t NumFrames(int64_t n_samples, int win_samples, int shift_samples) {
  if (n_samples < win_samples) return 0;
  return 1 + (n_samples - win_samples) / shift_samples;
}

std::vector<double> MelFilterCentersHz(int n_mels, int sample_rate) {
  std::vector<double> pts = MelPoints(n_mels, sample_rate);
  std::vector<double> centers(n_mels);
  for (int m = 0; m < n_mels; ++m) centers[m] = MelToHz(pts[m + 1]);
  return centers;
}

FeatureMatrix Fbank(const Waveform& wave, const FbankOptions& opts) {
  if (wave.sample_rate <= 0) throw InputError("fbank: non-positive sample rate");
  int win = static_cast<int>(std::lround(opts.frame_length_ms * 1e-3 *
                                         wave.sample_rate));
  int shift = static_cast<int>(std::lround(opts.frame_shift_ms * 1e-3 *
                                           wave.sample_rate));
  int64_t n = static_cast<int64_t>(wave.samples.size());
  int64_t t = NumFrames(n, win, shift);
  if (t < 1) {
    throw InputError("fbank: wave of " + std::to_string(n) +
                     " samples is shorter than one " + std::to_string(win) +
                     "-sample window");
  }

  size_t n_fft = NextPowerOfTwo(static_cast<size_t>(win));
  std::vector<double> window(win);
  for (int i = 0; i < win; ++i) {
    window[i] = 0.5 - 0.5 * std::cos(2.0 * M_PI * i / win);  // periodic Hann
  }
  std::vector<MelFilter> bank =
      BuildMelBank(opts.n_mels, n_fft, wave.sample_rate);

  FeatureMatrix out;
  out.frames = Tensor({t, opts.n_mels});
  out.frame_length_ms = opts.frame_length_ms;
  out.frame_shift_ms = opts.frame_shift_ms;

  std::vector<std::complex<double>> buf(n_fft);
  std::vector<double> mags(n_fft / 2 + 1);
  for (int64_t f = 0; f < t; ++f) {
    const double* src = wave.samples.data() + f * shift;
    for (size_t i = 0; i < n_fft; ++i) {
      buf[i] = i < static_cast<size_t>(win)
                   ? std::complex<double>(src[i] * window[i], 0.0)
                   : std::complex<double>(0.0, 0.0);
    }
    Fft(buf);
    for (size_t b = 0; b < mags.size(); ++b) mags[b] = std::abs(buf[b]);
    for (int m = 0; m < opts.n_mels; ++m) {
      const MelFilter& filt = bank[m];
      double acc = 0.0;
      for (size_t i = 0; i < filt.weights.size(); ++i) {
        acc += filt.weights[i] * mags[filt.start_bin + i];
      }
      out.frames(f, m) = std::log(acc + FbankOptions::kLogFloor);
    }
  }
  return out;
}

FeatureMatrix InstanceNormalize(const FeatureMatrix& feat) {
  constexpr double kEps = 1e-5;
  const Tensor& x = feat.frames;
  int64_t t = x.rows(), d = x.cols();
  FeatureMatrix out = feat;
  for (int64_t j = 0; j < d; ++j) {
    double mean = 0.0;
    for (int64_t i = 0; i < t; ++i) mean += x(i, j);
    mean /= static_cast<double>(t);
    double var = 0.0;
    for (int64_t i = 0; i < t; ++i) {
      double diff = x(i, j) - mean;
      var += diff * diff;
    }
    var /= static_cast<double>(t);
    double inv = 1.0 / std::sqrt(var + kEps);
    for (int64_t i = 0; i < t; ++i) {
      out.frames(i, j) = (x(i, j) - mean) * inv;
    }
  }
  return out;
}

}  // namespace rdino
