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

#include "rdino/features/wav.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "rdino/common/error.h"

namespace rdino {
namespace {

uint32_t ReadU32(std::ifstream& is, const std::string& what) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  if (is.gcount() != 4) throw TruncatedFileError("wav: truncated " + what);
  return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
         (static_cast<uint32_t>(b[2]) << 16) |
         (static_cast<uint32_t>(b[3]) << 24);
}

uint16_t ReadU16(std::ifstream& is, const std::string& what) {
  unsigned char b[2];
  is.read(reinterpret_cast<char*>(b), 2);
  if (is.gcount() != 2) throw TruncatedFileError("wav: truncated " + what);
  return static_cast<uint16_t>(b[0] | (b[1] << 8));
}

void WriteU32(std::ofstream& os, uint32_t v) {
  char b[4] = {static_cast<char>(v), static_cast<char>(v >> 8),
               static_cast<char>(v >> 16), static_cast<char>(v >> 24)};
  os.write(b, 4);
}

void WriteU16(std::ofstream& os, uint16_t v) {
  char b[2] = {static_cast<char>(v), static_cast<char>(v >> 8)};
  os.write(b, 2);
}

std::string ReadTag(std::ifstream& is, const std::string& what) {
  char tag[4];
  is.read(tag, 4);
  if (is.gcount() != 4) throw TruncatedFileError("wav: truncated " + what);
  return std::string(tag, 4);
}

}  // namespace

Waveform ReadWav(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InputError("wav: cannot open " + path);

  if (ReadTag(is, "RIFF header") != "RIFF") {
    throw FormatVersionError("wav: not a RIFF file: " + path);
  }
  ReadU32(is, "RIFF size");
  if (ReadTag(is, "WAVE header") != "WAVE") {
    throw FormatVersionError("wav: not a WAVE file: " + path);
  }

  bool have_fmt = false;
  uint16_t channels = 0, bits = 0;
  uint32_t sample_rate = 0;
  Waveform wave;

  while (true) {
    char tag4[4];
    is.read(tag4, 4);
    if (is.gcount() == 0) break;  // clean end of chunks
    if (is.gcount() != 4) throw TruncatedFileError("wav: truncated chunk tag");
    std::string tag(tag4, 4);
    uint32_t size = ReadU32(is, "chunk size");

    if (tag == "fmt ") {
      uint16_t format = ReadU16(is, "fmt format");
      channels = ReadU16(is, "fmt channels");
      sample_rate = ReadU32(is, "fmt sample rate");
      ReadU32(is, "fmt byte rate");
      ReadU16(is, "fmt block align");
      bits = ReadU16(is, "fmt bits");
      if (size > 16) is.seekg(size - 16, std::ios::cur);
      if (format != 1) throw InputError("wav: only PCM supported: " + path);
      if (channels != 1) throw InputError("wav: only mono supported: " + path);
      if (bits != 16) throw InputError("wav: only 16-bit supported: " + path);
      have_fmt = true;
    } else if (tag == "data") {
      if (!have_fmt) throw FormatVersionError("wav: data before fmt: " + path);
      size_t n = size / 2;
      std::vector<char> raw(size);
      is.read(raw.data(), size);
      if (static_cast<uint32_t>(is.gcount()) != size) {
        throw TruncatedFileError("wav: truncated data chunk: " + path);
      }
      wave.samples.resize(n);
      for (size_t i = 0; i < n; ++i) {
        int16_t s;
        std::memcpy(&s, raw.data() + 2 * i, 2);
        wave.samples[i] = static_cast<double>(s) / 32768.0;
      }
      wave.sample_rate = static_cast<int>(sample_rate);
      return wave;
    } else {
      // skip unknown chunk (word aligned)
      is.seekg(size + (size & 1), std::ios::cur);
    }
  }
  throw TruncatedFileError("wav: no data chunk in " + path);
}

void WriteWav(const std::string& path, const Waveform& wave) {
  if (wave.samples.empty()) throw InputError("wav: empty waveform");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InputError("wav: cannot write " + path);

  uint32_t data_bytes = static_cast<uint32_t>(wave.samples.size() * 2);
  os.write("RIFF", 4);
  WriteU32(os, 36 + data_bytes);
  os.write("WAVE", 4);
  os.write("fmt ", 4);
  WriteU32(os, 16);
  WriteU16(os, 1);  // PCM
  WriteU16(os, 1);  // mono
  WriteU32(os, static_cast<uint32_t>(wave.sample_rate));
  WriteU32(os, static_cast<uint32_t>(wave.sample_rate * 2));
  WriteU16(os, 2);
  WriteU16(os, 16);
  os.write("data", 4);
  WriteU32(os, data_bytes);
  for (double x : wave.samples) {
    double c = std::clamp(x, -1.0, 1.0);
    // scale is the inverse of the reader's 1/32768 so that write(read(f))
    // reproduces f exactly
    long q = std::lround(c * 32768.0);
    int16_t s = static_cast<int16_t>(std::clamp<long>(q, -32768, 32767));
    char b[2] = {static_cast<char>(s & 0xff),
                 static_cast<char>((s >> 8) & 0xff)};
    os.write(b, 2);
  }
}

}  // namespace rdino
