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

#ifndef RDINO_NUMERICS_TENSOR_H_
#define RDINO_NUMERICS_TENSOR_H_

#include <cstdint>
#include <string>
#include <vector>

#include "rdino/common/error.h"
#include "rdino/common/rng.h"

namespace rdino {

// Dense row-major tensor of doubles. The model only ever needs rank 1..3:
// matrices everywhere, rank-3 for conv kernels, {1,1} for scalars.
class Tensor {
 public:
  Tensor() = default;

  explicit Tensor(std::vector<int64_t> shape)
      : shape_(std::move(shape)), data_(CheckedNumel(shape_), 0.0) {}

  Tensor(std::vector<int64_t> shape, std::vector<double> data)
      : shape_(std::move(shape)), data_(std::move(data)) {
    if (static_cast<int64_t>(data_.size()) != CheckedNumel(shape_)) {
      throw DimensionError("tensor data size " + std::to_string(data_.size()) +
                           " does not match shape " + ShapeToString(shape_));
    }
  }

  static Tensor Zeros(std::vector<int64_t> shape) {
    return Tensor(std::move(shape));
  }

  static Tensor Full(std::vector<int64_t> shape, double value) {
    Tensor t(std::move(shape));
    for (double& x : t.data_) x = value;
    return t;
  }

  static Tensor Scalar(double value) { return Tensor({1, 1}, {value}); }

  // i.i.d. uniform in [-scale, scale].
  static Tensor RandomUniform(std::vector<int64_t> shape, double scale,
                              Rng& rng) {
    Tensor t(std::move(shape));
    for (double& x : t.data_) x = rng.Uniform(-scale, scale);
    return t;
  }

  static Tensor RandomGaussian(std::vector<int64_t> shape, double stddev,
                               Rng& rng) {
    Tensor t(std::move(shape));
    for (double& x : t.data_) x = stddev * rng.Gaussian();
    return t;
  }

  const std::vector<int64_t>& shape() const { return shape_; }
  int rank() const { return static_cast<int>(shape_.size()); }
  int64_t dim(int i) const { return shape_[static_cast<size_t>(i)]; }
  int64_t numel() const { return static_cast<int64_t>(data_.size()); }
  bool empty() const { return data_.empty(); }

  // Rank-2 accessors.
  int64_t rows() const { return shape_[0]; }
  int64_t cols() const { return shape_[1]; }
  double& operator()(int64_t r, int64_t c) { return data_[r * cols() + c]; }
  double operator()(int64_t r, int64_t c) const {
    return data_[r * cols() + c];
  }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool SameShape(const Tensor& other) const { return shape_ == other.shape_; }

  bool IsFinite() const;

  // Returns "3x4" style shape description for error messages.
  std::string ShapeStr() const { return ShapeToString(shape_); }

  static std::string ShapeToString(const std::vector<int64_t>& shape);

 private:
  static int64_t CheckedNumel(const std::vector<int64_t>& shape);

  std::vector<int64_t> shape_;
  std::vector<double> data_;
};

}  // namespace rdino

#endif  // RDINO_NUMERICS_TENSOR_H_
