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

#include "rdino/numerics/autograd.h"

#include <unordered_set>

namespace rdino {

void Node::AccumulateGrad(const Tensor& g) {
  if (!requires_grad) return;
  if (!g.SameShape(value)) {
    throw DimensionError("gradient shape " + g.ShapeStr() +
                         " does not match value shape " + value.ShapeStr());
  }
  if (grad.empty()) grad = Tensor::Zeros(value.shape());
  double* dst = grad.data().data();
  const double* src = g.data().data();
  int64_t n = g.numel();
  for (int64_t i = 0; i < n; ++i) dst[i] += src[i];
}

namespace {

// Iterative post-order DFS; recursion would overflow on long graphs.
void TopoSort(const std::shared_ptr<Node>& root,
              std::vector<std::shared_ptr<Node>>* order) {
  std::unordered_set<Node*> visited;
  std::vector<std::pair<std::shared_ptr<Node>, size_t>> stack;
  stack.emplace_back(root, 0);
  visited.insert(root.get());
  while (!stack.empty()) {
    auto& [node, next_child] = stack.back();
    if (next_child < node->parents.size()) {
      auto child = node->parents[next_child++];
      if (visited.insert(child.get()).second) {
        stack.emplace_back(std::move(child), 0);
      }
    } else {
      order->push_back(node);
      stack.pop_back();
    }
  }
}

}  // namespace

void Backward(const Var& root) {
  if (!root.defined()) {
    throw ContractError("backward on an undefined Var");
  }
  if (root.value().numel() != 1) {
    throw ContractError("backward requires a scalar root, got shape " +
                        root.value().ShapeStr());
  }
  std::vector<std::shared_ptr<Node>> order;
  TopoSort(root.node(), &order);

  root.node()->AccumulateGrad(Tensor::Full(root.value().shape(), 1.0));
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node& n = **it;
    if (n.requires_grad && n.backward && !n.grad.empty()) {
      n.backward();
    }
  }
}

}  // namespace rdino
