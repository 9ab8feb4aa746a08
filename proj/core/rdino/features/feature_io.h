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

#ifndef RDINO_FEATURES_FEATURE_IO_H_
#define RDINO_FEATURES_FEATURE_IO_H_

#include <string>

#include "rdino/features/fbank.h"

namespace rdino {

// Feature cache format: a header line "RDINO-FEAT v1 T F\n" followed by
// T*F little-endian float32 values, row-major.
void WriteFeatureCache(const std::string& path, const FeatureMatrix& feat);
FeatureMatrix ReadFeatureCache(const std::string& path);

}  // namespace rdino

#endif  // RDINO_FEATURES_FEATURE_IO_H_
