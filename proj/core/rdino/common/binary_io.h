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

#ifndef RDINO_COMMON_BINARY_IO_H_
#define RDINO_COMMON_BINARY_IO_H_

#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "rdino/common/error.h"

namespace rdino {

// Little-endian float32 block I/O shared by the checkpoint, feature cache
// and embedding file formats. The build targets little-endian hosts; memcpy
// of IEEE-754 floats is the wire format.

inline void WriteFloats(std::ostream& os, const std::vector<float>& v) {
  os.write(reinterpret_cast<const char*>(v.data()),
           static_cast<std::streamsize>(v.size() * sizeof(float)));
}

inline void WriteFloatsFromDoubles(std::ostream& os,
                                   const std::vector<double>& v) {
  std::vector<float> tmp(v.begin(), v.end());
  WriteFloats(os, tmp);
}

// Reads exactly n float32 values; throws TruncatedFileError on short read.
inline std::vector<float> ReadFloats(std::istream& is, size_t n,
                                     const std::string& what) {
  std::vector<float> v(n);
  is.read(reinterpret_cast<char*>(v.data()),
          static_cast<std::streamsize>(n * sizeof(float)));
  if (static_cast<size_t>(is.gcount()) != n * sizeof(float)) {
    throw TruncatedFileError("truncated file while reading " + what);
  }
  return v;
}

inline std::vector<double> ReadFloatsAsDoubles(std::istream& is, size_t n,
                                               const std::string& what) {
  std::vector<float> tmp = ReadFloats(is, n, what);
  return std::vector<double>(tmp.begin(), tmp.end());
}

// Reads one '\n'-terminated header line; throws if the stream ends first.
inline std::string ReadLineOrThrow(std::istream& is, const std::string& what) {
  std::string line;
  if (!std::getline(is, line)) {
    throw TruncatedFileError("truncated file while reading " + what);
  }
  return line;
}

}  // namespace rdino

#endif  // RDINO_COMMON_BINARY_IO_H_
