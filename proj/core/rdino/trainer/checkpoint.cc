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

#include "rdino/trainer/checkpoint.h"

#include <fstream>
#include <sstream>

#include "rdino/common/binary_io.h"
#include "rdino/common/error.h"

namespace rdino {
namespace {

constexpr char kMagicLine[] = "RDINO-CKPT v1";

void WriteBlock(std::ostream& os, const std::string& name,
                const Tensor& tensor) {
  os << name << " " << tensor.rank();
  for (int64_t d : tensor.shape()) os << " " << d;
  os << "\n";
  WriteFloatsFromDoubles(os, tensor.data());
}

// Reads one block and stores it into `dst`, which carries the shape the
// config implies for this name.
void ReadBlockInto(std::istream& is, const std::string& expect_name,
                   Tensor& dst) {
  std::string header = ReadLineOrThrow(is, "block header of " + expect_name);
  std::istringstream hs(header);
  std::string name;
  int rank = 0;
  hs >> name >> rank;
  if (name != expect_name) {
    throw ShapeMismatchError("checkpoint block \"" + name +
                             "\" where \"" + expect_name + "\" was expected");
  }
  if (hs.fail() || rank < 1 || rank > 3) {
    throw ShapeMismatchError("bad rank in checkpoint block " + name);
  }
  std::vector<int64_t> shape(rank);
  for (int i = 0; i < rank; ++i) hs >> shape[i];
  if (hs.fail()) {
    throw ShapeMismatchError("bad extents in checkpoint block " + name);
  }
  if (shape != dst.shape()) {
    throw ShapeMismatchError(
        "checkpoint block " + name + " has shape " +
        Tensor::ShapeToString(shape) + " but the config implies " +
        dst.ShapeStr());
  }
  dst = Tensor(shape, ReadFloatsAsDoubles(
                          is, static_cast<size_t>(dst.numel()),
                          "payload of block " + name));
}

}  // namespace

void SaveCheckpoint(const CheckpointState& state, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InputError("checkpoint: cannot write " + path);

  std::vector<std::string> config_lines = SerializeConfig(state.config);
  os << kMagicLine << "\n";
  os << "step " << state.step << "\n";
  os << "config " << config_lines.size() << "\n";
  for (const std::string& line : config_lines) os << line << "\n";

  size_t blocks = 2 * state.pair.student.size() + 1 + state.velocities.size();
  os << "blocks " << blocks << "\n";
  for (size_t i = 0; i < state.pair.student.size(); ++i) {
    WriteBlock(os, "student." + state.pair.student.name(i),
               state.pair.student.var(i).value());
  }
  for (size_t i = 0; i < state.pair.teacher.size(); ++i) {
    WriteBlock(os, "teacher." + state.pair.teacher.name(i),
               state.pair.teacher.var(i).value());
  }
  WriteBlock(os, "center", state.pair.center);
  for (size_t i = 0; i < state.velocities.size(); ++i) {
    WriteBlock(os, "opt.velocity." + state.pair.student.name(i),
               state.velocities[i]);
  }
  if (!os) throw InputError("checkpoint: write failed for " + path);
}

CheckpointState LoadCheckpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InputError("checkpoint: cannot open " + path);

  std::string magic = ReadLineOrThrow(is, "magic line");
  if (magic != kMagicLine) {
    throw FormatVersionError("checkpoint: unsupported header \"" + magic +
                             "\" in " + path);
  }
  std::string step_line = ReadLineOrThrow(is, "step line");
  std::istringstream ss(step_line);
  std::string tag;
  int64_t step = -1;
  ss >> tag >> step;
  if (tag != "step" || ss.fail() || step < 0) {
    throw FormatVersionError("checkpoint: bad step line \"" + step_line + "\"");
  }
  std::string config_line = ReadLineOrThrow(is, "config count");
  std::istringstream cs(config_line);
  size_t n_config = 0;
  cs >> tag >> n_config;
  if (tag != "config" || cs.fail()) {
    throw FormatVersionError("checkpoint: bad config line \"" + config_line +
                             "\"");
  }
  std::vector<std::string> config_lines;
  config_lines.reserve(n_config);
  for (size_t i = 0; i < n_config; ++i) {
    config_lines.push_back(ReadLineOrThrow(is, "config echo"));
  }

  CheckpointState state;
  state.config = ParseConfigLines(config_lines);
  state.config.Validate();
  state.step = step;
  state.pair = MakeNetworkPair(state.config.encoder, state.config.head,
                               state.config.seed);

  std::string blocks_line = ReadLineOrThrow(is, "blocks count");
  std::istringstream bs(blocks_line);
  size_t n_blocks = 0;
  bs >> tag >> n_blocks;
  if (tag != "blocks" || bs.fail()) {
    throw FormatVersionError("checkpoint: bad blocks line \"" + blocks_line +
                             "\"");
  }
  size_t expect = 2 * state.pair.student.size() + 1 + state.pair.student.size();
  if (n_blocks != expect) {
    throw ShapeMismatchError("checkpoint announces " +
                             std::to_string(n_blocks) + " blocks, config implies " +
                             std::to_string(expect));
  }

  for (size_t i = 0; i < state.pair.student.size(); ++i) {
    Tensor t(state.pair.student.var(i).value().shape());
    ReadBlockInto(is, "student." + state.pair.student.name(i), t);
    state.pair.student.var(i).mutable_value() = std::move(t);
  }
  for (size_t i = 0; i < state.pair.teacher.size(); ++i) {
    Tensor t(state.pair.teacher.var(i).value().shape());
    ReadBlockInto(is, "teacher." + state.pair.teacher.name(i), t);
    state.pair.teacher.var(i).mutable_value() = std::move(t);
  }
  ReadBlockInto(is, "center", state.pair.center);
  state.velocities.clear();
  for (size_t i = 0; i < state.pair.student.size(); ++i) {
    Tensor t(state.pair.student.var(i).value().shape());
    ReadBlockInto(is, "opt.velocity." + state.pair.student.name(i), t);
    state.velocities.push_back(std::move(t));
  }
  return state;
}

}  // namespace rdino
