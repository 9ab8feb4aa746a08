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

#include "rdino/features/feature_io.h"

#include <fstream>
#include <sstream>

#include "rdino/common/binary_io.h"
#include "rdino/common/error.h"

namespace rdino {

namespace {
constexpr char kMagic[] = "RDINO-FEAT";
constexpr char kVersion[] = "v1";
}  // namespace

void WriteFeatureCache(const std::string& path, const FeatureMatrix& feat) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InputError("feature cache: cannot write " + path);
  os << kMagic << " " << kVersion << " " << feat.num_frames() << " "
     << feat.feat_dim() << "\n";
  WriteFloatsFromDoubles(os, feat.frames.data());
  if (!os) throw InputError("feature cache: write failed for " + path);
}

FeatureMatrix ReadFeatureCache(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InputError("feature cache: cannot open " + path);
  std::string header = ReadLineOrThrow(is, "feature cache header");
  std::istringstream hs(header);
  std::string magic, version;
  int64_t t = 0, f = 0;
  hs >> magic >> version >> t >> f;
  if (magic != kMagic || version != kVersion) {
    throw FormatVersionError("feature cache: bad header \"" + header +
                             "\" in " + path);
  }
  if (hs.fail() || t < 1 || f < 1) {
    throw FormatVersionError("feature cache: bad extents in header \"" +
                             header + "\"");
  }
  FeatureMatrix feat;
  feat.frames = Tensor({t, f}, ReadFloatsAsDoubles(
                                   is, static_cast<size_t>(t * f),
                                   "feature cache payload of " + path));
  return feat;
}

}  // namespace rdino
