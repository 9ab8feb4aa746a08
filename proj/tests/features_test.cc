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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <vector>

#include "rdino/common/rng.h"
#include "rdino/features/fbank.h"
#include "rdino/features/feature_io.h"
#include "rdino/features/synth.h"
#include "rdino/features/wav.h"
#include "testutil.h"

using namespace rdino;
using rdino::test::TempDir;

namespace {

Waveform Tone(double hz, double seconds, int fs = 16000, double amp = 0.5) {
  Waveform w;
  w.sample_rate = fs;
  int64_t n = static_cast<int64_t>(seconds * fs);
  w.samples.resize(n);
  for (int64_t i = 0; i < n; ++i) {
    w.samples[i] = amp * std::sin(2.0 * M_PI * hz * i / fs);
  }
  return w;
}

Waveform Silence(double seconds, int fs = 16000) {
  Waveform w;
  w.sample_rate = fs;
  w.samples.assign(static_cast<int64_t>(seconds * fs), 0.0);
  return w;
}

std::vector<double> ColumnStats(const Tensor& m, int64_t j) {
  double mean = 0.0;
  for (int64_t i = 0; i < m.rows(); ++i) mean += m(i, j);
  mean /= static_cast<double>(m.rows());
  double var = 0.0;
  for (int64_t i = 0; i < m.rows(); ++i) {
    double d = m(i, j) - mean;
    var += d * d;
  }
  var /= static_cast<double>(m.rows());
  return {mean, std::sqrt(var)};
}

}  // namespace

TEST_CASE("fbank frame count follows the framing formula") {
  // Oracle: 400-sample window, 160-sample shift at 16 kHz.
  Waveform w = Tone(440.0, 1.0);
  REQUIRE(w.samples.size() == 16000);
  int64_t want = 1 + (16000 - 400) / 160;
  CHECK(want == 98);
  FeatureMatrix f = Fbank(w);
  CHECK(f.num_frames() == 98);
  CHECK(f.feat_dim() == 80);
}

TEST_CASE("fbank of silence is the constant log floor") {
  FeatureMatrix f = Fbank(Silence(0.5));
  double floor = std::log(1e-10);
  for (double v : f.frames.data()) CHECK(v == doctest::Approx(floor));
}

TEST_CASE("fbank of a 1 kHz tone peaks at the nearest mel filter") {
  // Independent oracle: mel centers from the HTK formula, nearest to 1 kHz.
  const int n_mels = 80, fs = 16000;
  auto mel = [](double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); };
  auto hz_of = [](double m) {
    return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0);
  };
  double top = mel(fs / 2.0);
  int expect = -1;
  double best = 1e9;
  for (int m = 0; m < n_mels; ++m) {
    double center = hz_of(top * (m + 1) / (n_mels + 1));
    if (std::fabs(center - 1000.0) < best) {
      best = std::fabs(center - 1000.0);
      expect = m;
    }
  }

  FeatureMatrix f = Fbank(Tone(1000.0, 0.5));
  for (int64_t t = 0; t < f.num_frames(); ++t) {
    int argmax = 0;
    for (int64_t j = 1; j < f.feat_dim(); ++j) {
      if (f.frames(t, j) > f.frames(t, argmax)) argmax = static_cast<int>(j);
    }
    CHECK(argmax == expect);
  }
}

TEST_CASE("fbank rejects waves shorter than one window") {
  Waveform w = Silence(0.01);  // 160 samples < 400
  CHECK_THROWS_AS(Fbank(w), InputError);
}

TEST_CASE("fbank is shift-consistent") {
  SynthSpeakerSpec spec = MakeSpeakerSpec(3, 0);
  Waveform w = SynthUtteranceWave(spec, 3, 0, 0, 1.0);
  FeatureMatrix full = Fbank(w);
  Waveform shifted;
  shifted.sample_rate = w.sample_rate;
  shifted.samples.assign(w.samples.begin() + 160, w.samples.end());
  FeatureMatrix drop = Fbank(shifted);
  REQUIRE(drop.num_frames() == full.num_frames() - 1);
  for (int64_t t = 0; t < drop.num_frames(); ++t) {
    for (int64_t j = 0; j < drop.feat_dim(); ++j) {
      CHECK(std::fabs(drop.frames(t, j) - full.frames(t + 1, j)) < 1e-9);
    }
  }
}

TEST_CASE("instance normalization maps constants to ~0") {
  FeatureMatrix f;
  f.frames = Tensor::Full({50, 8}, 3.25);
  FeatureMatrix n = InstanceNormalize(f);
  for (double v : n.frames.data()) CHECK(std::fabs(v) < 1e-3);
}

TEST_CASE("instance normalization statistics and idempotence") {
  Rng rng(17);
  FeatureMatrix f;
  f.frames = Tensor({200, 80});
  for (double& v : f.frames.data()) v = 5.0 + 2.5 * rng.Gaussian();
  FeatureMatrix n = InstanceNormalize(f);
  for (int64_t j = 0; j < 80; ++j) {
    auto st = ColumnStats(n.frames, j);
    CHECK(std::fabs(st[0]) < 1e-5);
    CHECK(std::fabs(st[1] - 1.0) < 1e-3);
  }
  FeatureMatrix nn = InstanceNormalize(n);
  for (int64_t i = 0; i < n.frames.numel(); ++i) {
    CHECK(std::fabs(nn.frames.data()[i] - n.frames.data()[i]) < 1e-3);
  }
}

TEST_CASE("synthetic corpus is deterministic") {
  Corpus a = SynthCorpus(1, 1, 4.0, 7);
  Corpus b = SynthCorpus(1, 1, 4.0, 7);
  REQUIRE(a.utterances.size() == 1);
  REQUIRE(a.utterances[0].wave.samples.size() ==
          b.utterances[0].wave.samples.size());
  for (size_t i = 0; i < a.utterances[0].wave.samples.size(); ++i) {
    CHECK(a.utterances[0].wave.samples[i] == b.utterances[0].wave.samples[i]);
  }
}

TEST_CASE("distinct synthetic speakers produce distinct audio") {
  Corpus c = SynthCorpus(2, 1, 4.0, 7);
  REQUIRE(c.utterances.size() == 2);
  double max_diff = 0.0;
  for (size_t i = 0; i < c.utterances[0].wave.samples.size(); ++i) {
    max_diff = std::max(max_diff,
                        std::fabs(c.utterances[0].wave.samples[i] -
                                  c.utterances[1].wave.samples[i]));
  }
  CHECK(max_diff > 1e-3);
}

TEST_CASE("synthetic corpus counts and lengths") {
  Corpus c = SynthCorpus(20, 10, 4.0, 7);
  CHECK(c.utterances.size() == 200);
  for (const auto& u : c.utterances) {
    CHECK(u.wave.samples.size() == 64000);
  }
}

TEST_CASE("corpus utterances do not depend on the requested count") {
  Corpus small = SynthCorpus(3, 2, 1.0, 11);
  Corpus big = SynthCorpus(3, 5, 1.0, 11);
  for (size_t i = 0; i < small.utterances.size(); ++i) {
    const auto& a = small.utterances[i];
    const auto* b = &big.utterances[0];
    for (const auto& cand : big.utterances) {
      if (cand.utterance_id == a.utterance_id) b = &cand;
    }
    REQUIRE(b->utterance_id == a.utterance_id);
    CHECK(a.wave.samples == b->wave.samples);
  }
}

TEST_CASE("synthetic speakers separate under nearest-centroid features") {
  Corpus c = SynthCorpus(10, 10, 2.0, 42);
  const int n_spk = 10, n_utt = 10, dim = 80;
  // Time-averaged fbank per utterance (the average log spectrum), then
  // z-scored per dimension across the corpus so no dimension dominates.
  // Averaging after instance normalization would give all-zero vectors.
  std::vector<std::vector<double>> feats;
  for (const auto& u : c.utterances) {
    FeatureMatrix f = Fbank(u.wave);
    std::vector<double> mean(dim, 0.0);
    for (int64_t t = 0; t < f.num_frames(); ++t) {
      for (int j = 0; j < dim; ++j) mean[j] += f.frames(t, j);
    }
    for (double& v : mean) v /= static_cast<double>(f.num_frames());
    feats.push_back(std::move(mean));
  }
  for (int j = 0; j < dim; ++j) {
    double mu = 0.0, var = 0.0;
    for (const auto& v : feats) mu += v[j];
    mu /= feats.size();
    for (const auto& v : feats) var += (v[j] - mu) * (v[j] - mu);
    var /= feats.size();
    double inv = 1.0 / std::sqrt(var + 1e-8);
    for (auto& v : feats) v[j] = (v[j] - mu) * inv;
  }
  // leave-one-out nearest-centroid classification
  int correct = 0;
  for (int i = 0; i < n_spk * n_utt; ++i) {
    int best = -1;
    double best_d = 1e300;
    for (int s = 0; s < n_spk; ++s) {
      std::vector<double> centroid(dim, 0.0);
      int cnt = 0;
      for (int u = 0; u < n_utt; ++u) {
        int idx = s * n_utt + u;
        if (idx == i) continue;
        for (int j = 0; j < dim; ++j) centroid[j] += feats[idx][j];
        ++cnt;
      }
      double d = 0.0;
      for (int j = 0; j < dim; ++j) {
        double diff = feats[i][j] - centroid[j] / cnt;
        d += diff * diff;
      }
      if (d < best_d) {
        best_d = d;
        best = s;
      }
    }
    if (best == i / n_utt) ++correct;
  }
  double acc = static_cast<double>(correct) / (n_spk * n_utt);
  CHECK(acc > 0.8);
}

TEST_CASE("wav round trip at 16-bit quantization") {
  TempDir tmp;
  SynthSpeakerSpec spec = MakeSpeakerSpec(5, 1);
  Waveform w = SynthUtteranceWave(spec, 5, 1, 0, 0.25);
  std::string path = tmp.File("tone.wav");
  WriteWav(path, w);
  Waveform r = ReadWav(path);
  REQUIRE(r.sample_rate == w.sample_rate);
  REQUIRE(r.samples.size() == w.samples.size());
  for (size_t i = 0; i < w.samples.size(); ++i) {
    CHECK(std::fabs(r.samples[i] - w.samples[i]) < 1.0 / 32768.0 + 1e-9);
  }
  // a second write of the read-back data is byte-identical
  std::string path2 = tmp.File("tone2.wav");
  WriteWav(path2, r);
  Waveform r2 = ReadWav(path2);
  CHECK(r2.samples == r.samples);
}

TEST_CASE("wav reader rejects malformed files") {
  TempDir tmp;
  std::string path = tmp.File("bad.wav");
  {
    std::ofstream os(path, std::ios::binary);
    os << "JUNKJUNKJUNKJUNK";
  }
  CHECK_THROWS_AS(ReadWav(path), FormatVersionError);

  // valid header, truncated payload
  std::string trunc = tmp.File("trunc.wav");
  WriteWav(trunc, Tone(440.0, 0.1));
  {
    std::ifstream is(trunc, std::ios::binary);
    std::vector<char> bytes((std::istreambuf_iterator<char>(is)),
                            std::istreambuf_iterator<char>());
    bytes.resize(bytes.size() - 7);
    std::ofstream os(trunc, std::ios::binary);
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  }
  CHECK_THROWS_AS(ReadWav(trunc), TruncatedFileError);
}

TEST_CASE("feature cache round trip") {
  TempDir tmp;
  FeatureMatrix f = InstanceNormalize(Fbank(Tone(523.0, 0.3)));
  std::string path = tmp.File("a.feat");
  WriteFeatureCache(path, f);
  FeatureMatrix r = ReadFeatureCache(path);
  REQUIRE(r.num_frames() == f.num_frames());
  REQUIRE(r.feat_dim() == f.feat_dim());
  for (int64_t i = 0; i < f.frames.numel(); ++i) {
    CHECK(r.frames.data()[i] ==
          static_cast<double>(static_cast<float>(f.frames.data()[i])));
  }
  // write(read(file)) is byte-identical: float32 quantization is stable
  std::string path2 = tmp.File("b.feat");
  WriteFeatureCache(path2, r);
  std::ifstream f1(path, std::ios::binary), f2(path2, std::ios::binary);
  std::vector<char> b1((std::istreambuf_iterator<char>(f1)),
                       std::istreambuf_iterator<char>());
  std::vector<char> b2((std::istreambuf_iterator<char>(f2)),
                       std::istreambuf_iterator<char>());
  CHECK(b1 == b2);
}

TEST_CASE("feature cache rejects bad magic and truncation") {
  TempDir tmp;
  std::string path = tmp.File("a.feat");
  FeatureMatrix f = InstanceNormalize(Fbank(Tone(523.0, 0.1)));
  WriteFeatureCache(path, f);

  std::string bad = tmp.File("bad.feat");
  {
    std::ofstream os(bad, std::ios::binary);
    os << "RDINO-FEAT v9 4 4\n";
    os.write("\0\0\0\0", 4);
  }
  CHECK_THROWS_AS(ReadFeatureCache(bad), FormatVersionError);

  std::string trunc = tmp.File("trunc.feat");
  {
    std::ifstream is(path, std::ios::binary);
    std::vector<char> bytes((std::istreambuf_iterator<char>(is)),
                            std::istreambuf_iterator<char>());
    bytes.resize(bytes.size() / 2);
    std::ofstream os(trunc, std::ios::binary);
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  }
  CHECK_THROWS_AS(ReadFeatureCache(trunc), TruncatedFileError);
}
