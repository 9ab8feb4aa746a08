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

#include "rdino/objective/losses.h"

#include <cmath>

namespace rdino {

Var DinoCrossEntropy(const std::vector<Var>& teacher_probs,
                     const std::vector<Var>& student_logprobs) {
  if (teacher_probs.size() != 2 || student_logprobs.size() != 6) {
    throw ContractError("dino_ce expects 2 teacher and 6 student views, got " +
                        std::to_string(teacher_probs.size()) + "/" +
                        std::to_string(student_logprobs.size()));
  }
  int64_t batch = teacher_probs[0].value().rows();
  Var acc;
  int pairs = 0;
  for (size_t g = 0; g < teacher_probs.size(); ++g) {
    for (size_t v = 0; v < student_logprobs.size(); ++v) {
      if (v == g) continue;  // a crop is never paired with itself
      Var term = SumAll(Mul(teacher_probs[g], student_logprobs[v]));
      acc = acc.defined() ? Add(acc, term) : term;
      ++pairs;
    }
  }
  // mean over the 10 pairs and the batch, negated cross-entropy sum
  return Scale(acc, -1.0 / (static_cast<double>(pairs) *
                            static_cast<double>(batch)));
}

Var DiversityHinge(const Var& z, double eps) {
  if (z.value().rows() < 2) {
    throw ContractError(
        "diversity hinge needs at least 2 batch rows to define a variance, "
        "got " +
        z.value().ShapeStr());
  }
  // mean_j relu(1 - sqrt(var_j + eps))
  return MeanAll(Relu(Shift(Neg(Sqrt(Shift(VarAxis(z, 0), eps))), 1.0)));
}

Var DiversityLoss(const Var& z_tea, const Var& z_stu, double eps) {
  return Add(DiversityHinge(z_tea, eps), DiversityHinge(z_stu, eps));
}

Var CrossCorrelation(const Var& z_tea, const Var& z_stu, bool centered) {
  if (z_tea.value().rows() != z_stu.value().rows()) {
    throw DimensionError("cross_correlation: batch sizes differ, " +
                         z_tea.value().ShapeStr() + " vs " +
                         z_stu.value().ShapeStr());
  }
  Var t = z_tea, s = z_stu;
  if (centered) {
    t = Sub(t, MeanAxis(t, 0));
    s = Sub(s, MeanAxis(s, 0));
  }
  Var numerator = MatMul(Transpose(t), s);  // {d_t, d_s}
  Var t_norm = Sqrt(Shift(SumAxis(Mul(t, t), 0), 1e-12));  // {1, d_t}
  Var s_norm = Sqrt(Shift(SumAxis(Mul(s, s), 0), 1e-12));  // {1, d_s}
  return Div(numerator, MatMul(Transpose(t_norm), s_norm));
}

Var RedundancyLoss(const Var& c) {
  const Tensor& cv = c.value();
  if (cv.rank() != 2 || cv.rows() != cv.cols()) {
    throw DimensionError("redundancy loss expects a square matrix, got " +
                         cv.ShapeStr());
  }
  Tensor mask({cv.rows(), cv.cols()});
  for (int64_t i = 0; i < cv.rows(); ++i) {
    for (int64_t j = 0; j < cv.cols(); ++j) {
      mask(i, j) = i == j ? 0.0 : 1.0;
    }
  }
  return SumAll(Mul(Mul(c, c), Constant(mask)));
}

TotalLossResult TotalLoss(const std::vector<ViewSet>& batch,
                          const NetworkPair& pair,
                          const ObjectiveOptions& opts) {
  if (batch.empty()) throw InputError("total_loss: empty batch");
  if (opts.lambda < 0.0) throw ParameterError("lambda must be >= 0");
  if (!(opts.tau_teacher > 0.0) || !(opts.tau_student > 0.0)) {
    throw ParameterError("temperatures must be positive");
  }
  const EncoderConfig& ecfg = pair.encoder_cfg;
  const HeadConfig& hcfg = pair.head_cfg;
  int64_t b = static_cast<int64_t>(batch.size());

  // Student forward over all six views: per view, encode each item and
  // stack the {1, E} embeddings into a {B, E} matrix for the head.
  std::vector<Var> student_logprobs(ViewSet::kNumViews);
  std::vector<Var> student_taps(ViewSet::kNumGlobal);
  for (int v = 0; v < ViewSet::kNumViews; ++v) {
    std::vector<Var> rows;
    rows.reserve(b);
    for (const ViewSet& views : batch) {
      rows.push_back(Encode(views.view(v).frames, pair.student, ecfg));
    }
    Projection proj = Project(ConcatRows(rows), pair.student, hcfg);
    student_logprobs[v] = LogSoftmaxRows(proj.logits, opts.tau_student);
    if (v < ViewSet::kNumGlobal) student_taps[v] = proj.tap;
  }
  Var z_student = ConcatRows({student_taps[0], student_taps[1]});  // {2B, d}

  // Teacher forward over the global views only. Teacher parameters carry
  // no gradient, so everything below is constant to the optimizer.
  std::vector<Var> teacher_probs(ViewSet::kNumGlobal);
  std::vector<Var> teacher_taps(ViewSet::kNumGlobal);
  std::vector<Var> teacher_logits(ViewSet::kNumGlobal);
  Var center = Constant(pair.center);
  for (int g = 0; g < ViewSet::kNumGlobal; ++g) {
    std::vector<Var> rows;
    rows.reserve(b);
    for (const ViewSet& views : batch) {
      rows.push_back(Encode(views.view(g).frames, pair.teacher, ecfg));
    }
    Projection proj = Project(ConcatRows(rows), pair.teacher, hcfg);
    teacher_logits[g] = proj.logits;
    teacher_taps[g] = proj.tap;
    Var logits = opts.use_centering ? Sub(proj.logits, center) : proj.logits;
    teacher_probs[g] = SoftmaxRows(logits, opts.tau_teacher);
  }
  Var z_teacher = ConcatRows({teacher_taps[0], teacher_taps[1]});  // {2B, d}

  Var ce = DinoCrossEntropy(teacher_probs, student_logprobs);
  Var dr = DiversityLoss(z_teacher, z_student, opts.eps);
  Var c = CrossCorrelation(z_teacher, z_student, opts.centered_correlation);
  Var rer = RedundancyLoss(c);
  Var total = Add(ce, Scale(Add(dr, rer), opts.lambda));

  TotalLossResult result;
  result.total = total;
  result.breakdown.ce = ce.value().data()[0];
  result.breakdown.dr = dr.value().data()[0];
  result.breakdown.rer = rer.value().data()[0];
  result.breakdown.total = total.value().data()[0];
  result.breakdown.lambda = opts.lambda;
  result.z_teacher = z_teacher.value();
  result.teacher_probs =
      ConcatRows({teacher_probs[0], teacher_probs[1]}).value();
  result.teacher_logits_raw =
      ConcatRows({teacher_logits[0], teacher_logits[1]}).value();
  return result;
}

CollapseStats ComputeCollapseStats(const Tensor& z_teacher,
                                   const Tensor& teacher_probs) {
  CollapseStats stats;
  int64_t n = z_teacher.rows(), d = z_teacher.cols();

  double std_acc = 0.0;
  for (int64_t j = 0; j < d; ++j) {
    double mean = 0.0;
    for (int64_t i = 0; i < n; ++i) mean += z_teacher(i, j);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (int64_t i = 0; i < n; ++i) {
      double diff = z_teacher(i, j) - mean;
      var += diff * diff;
    }
    std_acc += std::sqrt(var / static_cast<double>(n));
  }
  stats.mean_std = std_acc / static_cast<double>(d);

  int64_t k = teacher_probs.cols();
  double entropy = 0.0;
  for (int64_t j = 0; j < k; ++j) {
    double p = 0.0;
    for (int64_t i = 0; i < teacher_probs.rows(); ++i) {
      p += teacher_probs(i, j);
    }
    p /= static_cast<double>(teacher_probs.rows());
    if (p > 0.0) entropy -= p * std::log(p);
  }
  stats.entropy = entropy;

  Tensor c = CrossCorrelation(Constant(z_teacher), Constant(z_teacher)).value();
  double acc = 0.0;
  int64_t cnt = 0;
  for (int64_t i = 0; i < c.rows(); ++i) {
    for (int64_t j = 0; j < c.cols(); ++j) {
      if (i == j) continue;
      acc += std::fabs(c(i, j));
      ++cnt;
    }
  }
  stats.mean_offdiag = cnt > 0 ? acc / static_cast<double>(cnt) : 0.0;
  return stats;
}

}  // namespace rdino
