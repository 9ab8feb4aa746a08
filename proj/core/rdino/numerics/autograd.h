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

#ifndef RDINO_NUMERICS_AUTOGRAD_H_
#define RDINO_NUMERICS_AUTOGRAD_H_

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "rdino/numerics/tensor.h"

namespace rdino {

// One node of a define-by-run computation graph. A node owns its forward
// value, an optionally allocated gradient accumulator of the same shape,
// and a closure that pushes its gradient into its parents. Graphs are
// acyclic by construction (ops only reference already existing nodes) and
// are freed when the last Var referencing them goes out of scope.
struct Node {
  Tensor value;
  Tensor grad;  // empty until touched by a backward pass
  bool requires_grad = false;
  const char* op = "leaf";
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void()> backward;  // may be empty for leaves/constants

  // Lazily allocates the accumulator and adds g elementwise.
  void AccumulateGrad(const Tensor& g);
};

// Cheap handle to a graph node. Ops consume and produce Vars; parameters
// are long-lived leaf Vars whose value is updated in place between steps.
class Var {
 public:
  Var() = default;
  explicit Var(Tensor value, bool requires_grad = false)
      : node_(std::make_shared<Node>()) {
    node_->value = std::move(value);
    node_->requires_grad = requires_grad;
  }

  bool defined() const { return node_ != nullptr; }
  const Tensor& value() const { return node_->value; }
  Tensor& mutable_value() { return node_->value; }
  bool requires_grad() const { return node_->requires_grad; }

  // Gradient accumulated by the last backward pass; zeros if untouched.
  Tensor grad() const {
    if (node_->grad.empty()) return Tensor::Zeros(node_->value.shape());
    return node_->grad;
  }

  void ClearGrad() { node_->grad = Tensor(); }

  const std::shared_ptr<Node>& node() const { return node_; }

 private:
  std::shared_ptr<Node> node_;
};

inline Var Constant(Tensor t) { return Var(std::move(t), false); }

// Reverse-mode sweep from a scalar root. Gradients accumulate into every
// reachable node with requires_grad set; a value used twice receives the
// sum of both path gradients. Throws ContractError if root is not scalar.
void Backward(const Var& root);

}  // namespace rdino

#endif  // RDINO_NUMERICS_AUTOGRAD_H_
