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

#ifndef RDINO_COMMON_RNG_H_
#define RDINO_COMMON_RNG_H_

#include <cmath>
#include <cstdint>
#include <random>

namespace rdino {

// Seeded RNG with hand-rolled samplers. std::mt19937_64 is fully specified
// by the standard but the std distributions are not, so sampling is done
// from raw engine output to keep runs bit-reproducible across toolchains.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform in [0, 1) with 53 bits of mantissa.
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Uniform integer in [lo, hi], inclusive. Modulo sampling; the bias is
  // ~range/2^64 which is irrelevant at the ranges used here.
  int64_t UniformInt(int64_t lo, int64_t hi) {
    uint64_t range = static_cast<uint64_t>(hi - lo) + 1;
    return lo + static_cast<int64_t>(engine_() % range);
  }

  // Standard normal via Box-Muller.
  double Gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = Uniform();
    double u2 = Uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  // Derives a child seed from a base seed and up to three stream indices.
  // Used to give every (epoch, item, view) an independent deterministic
  // stream regardless of evaluation order.
  static uint64_t Derive(uint64_t base, uint64_t a, uint64_t b = 0,
                         uint64_t c = 0) {
    uint64_t h = SplitMix(base);
    h = SplitMix(h ^ SplitMix(a + 0x100));
    h = SplitMix(h ^ SplitMix(b + 0x200));
    h = SplitMix(h ^ SplitMix(c + 0x300));
    return h;
  }

 private:
  static uint64_t SplitMix(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace rdino

#endif  // RDINO_COMMON_RNG_H_
