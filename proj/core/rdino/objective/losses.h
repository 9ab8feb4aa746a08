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

#ifndef RDINO_OBJECTIVE_LOSSES_H_
#define RDINO_OBJECTIVE_LOSSES_H_

#include <vector>

#include "rdino/augment/multicrop.h"
#include "rdino/model/network.h"
#include "rdino/numerics/ops.h"

namespace rdino {

// Multi-view distillation cross-entropy. teacher_probs holds one {B, K}
// probability matrix per global crop (2 of them, already centered and
// sharpened, gradient-free); student_logprobs holds one {B, K} log-
// probability matrix per view (2 global + 4 local). Every teacher crop g
// is paired with every student view except view g itself: 2 x 5 = 10
// pairs. The result is the mean cross-entropy per pair per batch row.
Var DinoCrossEntropy(const std::vector<Var>& teacher_probs,
                     const std::vector<Var>& student_logprobs);

// Per-matrix diversity hinge: mean_j max(0, 1 - sqrt(Var_j + eps)) with
// the variance taken down the batch axis (biased estimator).
Var DiversityHinge(const Var& z, double eps);

// Full diversity term: hinge(z_tea) + hinge(z_stu). The teacher side is
// normally a Constant, making it a stop-gradient contribution.
// Throws ContractError when a matrix has fewer than 2 rows.
Var DiversityLoss(const Var& z_tea, const Var& z_stu, double eps);

// Cross-correlation between teacher column i and student column j down
// the batch axis, without mean-centering:
//   C_ij = sum_b t_bi s_bj / (sqrt(sum_b t_bi^2) sqrt(sum_b s_bj^2))
// with 1e-12 added inside each square root. `centered` subtracts column
// means first (off by default; kept as a study switch).
Var CrossCorrelation(const Var& z_tea, const Var& z_stu,
                     bool centered = false);

// Sum of squared off-diagonal entries of C.
Var RedundancyLoss(const Var& c);

struct LossBreakdown {
  double ce = 0.0;
  double dr = 0.0;
  double rer = 0.0;
  double total = 0.0;
  double lambda = 0.0;
};

struct ObjectiveOptions {
  double lambda = 0.3;
  double tau_teacher = 0.04;
  double tau_student = 0.1;
  double eps = 1e-4;
  bool use_centering = true;
  bool centered_correlation = false;
};

struct TotalLossResult {
  Var total;  // scalar; differentiable w.r.t. student parameters only
  LossBreakdown breakdown;
  Tensor z_teacher;             // {2B, d} teacher tap activations
  Tensor teacher_probs;         // {2B, K} centered+sharpened teacher rows
  Tensor teacher_logits_raw;    // {2B, K} pre-centering, for UpdateCenter
};

// Runs teacher on the global views (centered, sharpened) and student on
// all six views, taps the {2B, d} activations of the global crops on both
// sides, and composes total = ce + lambda * (dr + rer).
TotalLossResult TotalLoss(const std::vector<ViewSet>& batch,
                          const NetworkPair& pair,
                          const ObjectiveOptions& opts);

struct CollapseStats {
  double mean_std = 0.0;   // mean per-dimension std of z_teacher
  double entropy = 0.0;    // entropy of the batch-mean teacher row
  double mean_offdiag = 0.0;  // mean |C_ij|, i != j, of the self-correlation
};

// Collapse diagnostics from the teacher side of one batch: per-dimension
// spread of the tap activations, sharpness of the average teacher
// distribution, and how correlated the tap dimensions are.
CollapseStats ComputeCollapseStats(const Tensor& z_teacher,
                                   const Tensor& teacher_probs);

}  // namespace rdino

#endif  // RDINO_OBJECTIVE_LOSSES_H_
