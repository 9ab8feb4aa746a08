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

#ifndef RDINO_NUMERICS_OPS_H_
#define RDINO_NUMERICS_OPS_H_

#include <vector>

#include "rdino/numerics/autograd.h"

namespace rdino {

// Differentiable operations on Vars. This is deliberately the minimal set
// the model and losses need, all with analytic backward rules that are
// finite-difference checked in the test suite.
//
// Binary elementwise ops broadcast between rank-2 operands when one extent
// is 1 (row vector, column vector or scalar against a matrix).

Var Add(const Var& a, const Var& b);
Var Sub(const Var& a, const Var& b);
Var Mul(const Var& a, const Var& b);
Var Div(const Var& a, const Var& b);

Var Scale(const Var& a, double c);  // c * a
Var Shift(const Var& a, double c);  // a + c
Var Neg(const Var& a);

Var MatMul(const Var& a, const Var& b);
Var Transpose(const Var& a);

Var Relu(const Var& a);
Var MaxConst(const Var& a, double c);  // elementwise max(a, c)
Var Exp(const Var& a);
Var Log(const Var& a);   // requires strictly positive input
Var Sqrt(const Var& a);  // requires non-negative input

Var SumAll(const Var& a);   // -> {1,1}
Var MeanAll(const Var& a);  // -> {1,1}

// Axis reductions keep the reduced dimension with extent 1 so the result
// broadcasts back against the input. Variance uses the biased (1/N)
// estimator; that convention holds across the whole library.
Var SumAxis(const Var& a, int axis);
Var MeanAxis(const Var& a, int axis);
Var VarAxis(const Var& a, int axis);

// Row-wise temperature softmax / log-softmax of a/tau, computed with
// max-subtraction so logits up to ~1e4 in magnitude stay stable.
Var SoftmaxRows(const Var& a, double tau);
Var LogSoftmaxRows(const Var& a, double tau);

// Each row divided by sqrt(sum of squares + 1e-12).
Var RowL2Normalize(const Var& a);

// 1-d convolution along time. x is {T, C_in}, w is {C_out, C_in, k},
// bias is {1, C_out}; no padding, so the output is {T - d*(k-1), C_out}.
Var Conv1d(const Var& x, const Var& w, const Var& bias, int dilation);

Var ConcatRows(const std::vector<Var>& parts);
Var SliceRows(const Var& a, int64_t start, int64_t count);

}  // namespace rdino

#endif  // RDINO_NUMERICS_OPS_H_
