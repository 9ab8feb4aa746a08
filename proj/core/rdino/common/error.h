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

#ifndef RDINO_COMMON_ERROR_H_
#define RDINO_COMMON_ERROR_H_

#include <stdexcept>
#include <string>

namespace rdino {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Tensor shapes do not line up for an operation.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A scalar argument is outside its valid range (temperature, momentum, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Input data violates a precondition (empty wave, silent noise, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

// An API contract was violated (e.g. backward on a non-scalar root).
class ContractError : public Error {
 public:
  using Error::Error;
};

// Config file problems: syntax, unknown key, bad value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A serialized file announces an unsupported magic/version.
class FormatVersionError : public Error {
 public:
  using Error::Error;
};

// A serialized file ends before the announced payload.
class TruncatedFileError : public Error {
 public:
  using Error::Error;
};

// A stored block does not match the shape implied by its config.
class ShapeMismatchError : public Error {
 public:
  using Error::Error;
};

// Training aborted (non-finite loss or gradients).
class TrainingError : public Error {
 public:
  using Error::Error;
};

}  // namespace rdino

#endif  // RDINO_COMMON_ERROR_H_
