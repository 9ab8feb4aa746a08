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

#include "rdino/numerics/ops.h"

#include <algorithm>
#include <cmath>
#include <utility>

namespace rdino {
namespace {

// --- raw GEMM kernels (accumulating, row-major, explicit leading dims) ---

// C (m x n) += A (m x k) * B (k x n)
void GemmNN(const double* a, int64_t lda, const double* b, int64_t ldb,
            double* c, int64_t ldc, int64_t m, int64_t k, int64_t n) {
  for (int64_t i = 0; i < m; ++i) {
    const double* arow = a + i * lda;
    double* crow = c + i * ldc;
    for (int64_t p = 0; p < k; ++p) {
      double av = arow[p];
      const double* brow = b + p * ldb;
      for (int64_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

// C (m x n) += A (m x k) * B^T, with B stored (n x k)
void GemmNT(const double* a, int64_t lda, const double* b, int64_t ldb,
            double* c, int64_t ldc, int64_t m, int64_t k, int64_t n) {
  for (int64_t i = 0; i < m; ++i) {
    const double* arow = a + i * lda;
    double* crow = c + i * ldc;
    for (int64_t j = 0; j < n; ++j) {
      const double* brow = b + j * ldb;
      double acc = 0.0;
      for (int64_t p = 0; p < k; ++p) acc += arow[p] * brow[p];
      crow[j] += acc;
    }
  }
}

// C (m x n) += A^T * B, with A stored (k x m), B stored (k x n)
void GemmTN(const double* a, int64_t lda, const double* b, int64_t ldb,
            double* c, int64_t ldc, int64_t m, int64_t k, int64_t n) {
  for (int64_t p = 0; p < k; ++p) {
    const double* arow = a + p * lda;
    const double* brow = b + p * ldb;
    for (int64_t i = 0; i < m; ++i) {
      double av = arow[i];
      double* crow = c + i * ldc;
      for (int64_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

// --- graph plumbing ---

Var MakeResult(const char* op, Tensor value,
               std::initializer_list<Var> parents) {
  Var out(std::move(value));
  Node* self = out.node().get();
  self->op = op;
  bool needs = false;
  for (const Var& p : parents) {
    self->parents.push_back(p.node());
    needs = needs || p.requires_grad();
  }
  self->requires_grad = needs;
  return out;
}

void RequireRank2(const Tensor& t, const char* op) {
  if (t.rank() != 2) {
    throw DimensionError(std::string(op) + " expects a rank-2 tensor, got " +
                         t.ShapeStr());
  }
}

// Broadcast layout of two rank-2 operands (or identical shapes of any rank).
struct Bcast {
  int64_t m, n;           // output extents
  int64_t am, an, bm, bn; // operand extents
  bool flat;              // identical shapes: plain elementwise loop
};

Bcast CheckBroadcast(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() == b.shape()) {
    return {a.numel(), 1, a.numel(), 1, b.numel(), 1, true};
  }
  if (a.rank() != 2 || b.rank() != 2) {
    throw DimensionError(std::string(op) + ": incompatible shapes " +
                         a.ShapeStr() + " and " + b.ShapeStr());
  }
  int64_t m = std::max(a.rows(), b.rows());
  int64_t n = std::max(a.cols(), b.cols());
  auto ok = [](int64_t d, int64_t out) { return d == out || d == 1; };
  if (!ok(a.rows(), m) || !ok(a.cols(), n) || !ok(b.rows(), m) ||
      !ok(b.cols(), n)) {
    throw DimensionError(std::string(op) + ": incompatible shapes " +
                         a.ShapeStr() + " and " + b.ShapeStr());
  }
  return {m, n, a.rows(), a.cols(), b.rows(), b.cols(), false};
}

// Sums g over the dimensions where the target extent is 1.
Tensor ReduceToShape(const Tensor& g, const std::vector<int64_t>& shape) {
  if (g.shape() == shape) return g;
  Tensor out{shape};
  int64_t tm = shape[0], tn = shape[1];
  for (int64_t i = 0; i < g.rows(); ++i) {
    for (int64_t j = 0; j < g.cols(); ++j) {
      out.data()[(tm == 1 ? 0 : i) * tn + (tn == 1 ? 0 : j)] += g(i, j);
    }
  }
  return out;
}

enum class BinKind { kAdd, kSub, kMul, kDiv };

Var BinaryOp(const char* name, BinKind kind, const Var& a, const Var& b) {
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  Bcast bc = CheckBroadcast(av, bv, name);

  Tensor value = bc.flat ? Tensor(av.shape()) : Tensor({bc.m, bc.n});
  const double* ap = av.data().data();
  const double* bp = bv.data().data();
  double* op = value.data().data();
  for (int64_t i = 0; i < bc.m; ++i) {
    for (int64_t j = 0; j < bc.n; ++j) {
      double x = ap[(bc.am == 1 ? 0 : i) * bc.an + (bc.an == 1 ? 0 : j)];
      double y = bp[(bc.bm == 1 ? 0 : i) * bc.bn + (bc.bn == 1 ? 0 : j)];
      double r;
      switch (kind) {
        case BinKind::kAdd: r = x + y; break;
        case BinKind::kSub: r = x - y; break;
        case BinKind::kMul: r = x * y; break;
        case BinKind::kDiv:
          if (y == 0.0) throw InputError(std::string(name) + ": zero divisor");
          r = x / y;
          break;
      }
      op[i * bc.n + j] = r;
    }
  }

  Var out = MakeResult(name, std::move(value), {a, b});
  if (!out.requires_grad()) return out;
  Node* self = out.node().get();
  Node* na = a.node().get();
  Node* nb = b.node().get();
  self->backward = [self, na, nb, bc, kind]() {
    const Tensor& g = self->grad;
    auto val = [&bc](const Node* nd, int64_t i, int64_t j, bool is_a) {
      int64_t rm = is_a ? bc.am : bc.bm;
      int64_t rn = is_a ? bc.an : bc.bn;
      return nd->value.data()[(rm == 1 ? 0 : i) * rn + (rn == 1 ? 0 : j)];
    };
    if (na->requires_grad) {
      Tensor ga = bc.flat ? Tensor(na->value.shape()) : Tensor({bc.m, bc.n});
      for (int64_t i = 0; i < bc.m; ++i) {
        for (int64_t j = 0; j < bc.n; ++j) {
          double gv = g.data()[i * bc.n + j];
          switch (kind) {
            case BinKind::kAdd:
            case BinKind::kSub: break;
            case BinKind::kMul: gv *= val(nb, i, j, false); break;
            case BinKind::kDiv: gv /= val(nb, i, j, false); break;
          }
          ga.data()[i * bc.n + j] = gv;
        }
      }
      na->AccumulateGrad(bc.flat ? ga : ReduceToShape(ga, na->value.shape()));
    }
    if (nb->requires_grad) {
      Tensor gb = bc.flat ? Tensor(nb->value.shape()) : Tensor({bc.m, bc.n});
      for (int64_t i = 0; i < bc.m; ++i) {
        for (int64_t j = 0; j < bc.n; ++j) {
          double gv = g.data()[i * bc.n + j];
          switch (kind) {
            case BinKind::kAdd: break;
            case BinKind::kSub: gv = -gv; break;
            case BinKind::kMul: gv *= val(na, i, j, true); break;
            case BinKind::kDiv: {
              double xv = val(na, i, j, true);
              double yv = val(nb, i, j, false);
              gv = -gv * xv / (yv * yv);
              break;
            }
          }
          gb.data()[i * bc.n + j] = gv;
        }
      }
      nb->AccumulateGrad(bc.flat ? gb : ReduceToShape(gb, nb->value.shape()));
    }
  };
  return out;
}

// Elementwise unary op with pointwise derivative dy/dx given the pair (x, y).
template <typename FwdFn, typename DerivFn>
Var UnaryOp(const char* name, const Var& a, FwdFn fwd, DerivFn deriv) {
  const Tensor& av = a.value();
  Tensor value(av.shape());
  for (int64_t i = 0; i < av.numel(); ++i) {
    value.data()[i] = fwd(av.data()[i]);
  }
  Var out = MakeResult(name, std::move(value), {a});
  if (!out.requires_grad()) return out;
  Node* self = out.node().get();
  Node* na = a.node().get();
  self->backward = [self, na, deriv]() {
    Tensor ga(na->value.shape());
    for (int64_t i = 0; i < ga.numel(); ++i) {
      ga.data()[i] =
          self->grad.data()[i] * deriv(na->value.data()[i],
                                       self->value.data()[i]);
    }
    na->AccumulateGrad(ga);
  };
  return out;
}

}  // namespace

Var Add(const Var& a, const Var& b) { return BinaryOp("add", BinKind::kAdd, a, b); }
Var Sub(const Var& a, const Var& b) { return BinaryOp("sub", BinKind::kSub, a, b); }
Var Mul(const Var& a, const Var& b) { return BinaryOp("mul", BinKind::kMul, a, b); }
Var Div(const Var& a, const Var& b) { return BinaryOp("div", BinKind::kDiv, a, b); }

Var Scale(const Var& a, double c) {
  return UnaryOp("scale", a, [c](double x) { return c * x; },
                 [c](double, double) { return c; });
}

Var Shift(const Var& a, double c) {
  return UnaryOp("shift", a, [c](double x) { return x + c; },
                 [](double, double) { return 1.0; });
}

Var Neg(const Var& a) { return Scale(a, -1.0); }

Var Relu(const Var& a) {
  return UnaryOp("relu", a, [](double x) { return x > 0.0 ? x : 0.0; },
                 [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Var MaxConst(const Var& a, double c) {
  return UnaryOp("max_const", a,
                 [c](double x) { return x > c ? x : c; },
                 [c](double x, double) { return x > c ? 1.0 : 0.0; });
}

Var Exp(const Var& a) {
  return UnaryOp("exp", a, [](double x) { return std::exp(x); },
                 [](double, double y) { return y; });
}

Var Log(const Var& a) {
  for (double x : a.value().data()) {
    if (x <= 0.0) throw InputError("log of non-positive value");
  }
  return UnaryOp("log", a, [](double x) { return std::log(x); },
                 [](double x, double) { return 1.0 / x; });
}

Var Sqrt(const Var& a) {
  for (double x : a.value().data()) {
    if (x < 0.0) throw InputError("sqrt of negative value");
  }
  return UnaryOp("sqrt", a, [](double x) { return std::sqrt(x); },
                 [](double, double y) {
                   if (y == 0.0) {
                     throw InputError("sqrt gradient at zero is undefined");
                   }
                   return 0.5 / y;
                 });
}

Var MatMul(const Var& a, const Var& b) {
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  RequireRank2(av, "matmul");
  RequireRank2(bv, "matmul");
  if (av.cols() != bv.rows()) {
    throw DimensionError("matmul: inner extents differ, " + av.ShapeStr() +
                         " vs " + bv.ShapeStr());
  }
  int64_t m = av.rows(), k = av.cols(), n = bv.cols();
  Tensor value({m, n});
  GemmNN(av.data().data(), k, bv.data().data(), n, value.data().data(), n, m,
         k, n);

  Var out = MakeResult("matmul", std::move(value), {a, b});
  if (!out.requires_grad()) return out;
  Node* self = out.node().get();
  Node* na = a.node().get();
  Node* nb = b.node().get();
  self->backward = [self, na, nb, m, k, n]() {
    const double* g = self->grad.data().data();
    if (na->requires_grad) {
      Tensor ga({m, k});
      GemmNT(g, n, nb->value.data().data(), n, ga.data().data(), k, m, n, k);
      na->AccumulateGrad(ga);
    }
    if (nb->requires_grad) {
      Tensor gb({k, n});
      GemmTN(na->value.data().data(), k, g, n, gb.data().data(), n, k, m, n);
      nb->AccumulateGrad(gb);
    }
  };
  return out;
}

Var Transpose(const Var& a) {
  const Tensor& av = a.value();
  RequireRank2(av, "transpose");
  int64_t m = av.rows(), n = av.cols();
  Tensor value({n, m});
  for (int64_t i = 0; i < m; ++i) {
    for (int64_t j = 0; j < n; ++j) value(j, i) = av(i, j);
  }
  Var out = MakeResult("transpose", std::move(value), {a});
  if (!out.requires_grad()) return out;
  Node* self = out.node().get();
  Node* na = a.node().get();
  self->backward = [self, na, m, n]() {
    Tensor ga({m, n});
    for (int64_t i = 0; i < n; ++i) {
      for (int64_t j = 0; j < m; ++j) ga(j, i) = self->grad(i, j);
    }
    na->AccumulateGrad(ga);
  };
  return out;
}

Var SumAll(const Var& a) {
  double acc = 0.0;
  for (double x : a.value().data()) acc += x;
  Var out = MakeResult("sum_all", Tensor::Scalar(acc), {a});
  if (!out.requires_grad()) return out;
  Node* self = out.node().get();
  Node* na = a.node().get();
  self->backward = [self, na]() {
    na->AccumulateGrad(
        Tensor::Full(na->value.shape(), self->grad.data()[0]));
  };
  return out;
}

Var MeanAll(const Var& a) {
  double inv = 1.0 / static_cast<double>(a.value().numel());
  return Scale(SumAll(a), inv);
}

namespace {

void RequireAxis(int axis) {
  if (axis != 0 && axis != 1) {
    throw ParameterError("axis must be 0 or 1, got " + std::to_string(axis));
  }
}

}  // namespace

Var SumAxis(const Var& a, int axis) {
  const Tensor& av = a.value();
  RequireRank2(av, "sum_axis");
  RequireAxis(axis);
  int64_t m = av.rows(), n = av.cols();
  Tensor value(axis == 0 ? std::vector<int64_t>{1, n}
                         : std::vector<int64_t>{m, 1});
  for (int64_t i = 0; i < m; ++i) {
    for (int64_t j = 0; j < n; ++j) {
      value.data()[axis == 0 ? j : i] += av(i, j);
    }
  }
  Var out = MakeResult("sum_axis", std::move(value), {a});
  if (!out.requires_grad()) return out;
  Node* self = out.node().get();
  Node* na = a.node().get();
  self->backward = [self, na, m, n, axis]() {
    Tensor ga({m, n});
    for (int64_t i = 0; i < m; ++i) {
      for (int64_t j = 0; j < n; ++j) {
        ga(i, j) = self->grad.data()[axis == 0 ? j : i];
      }
    }
    na->AccumulateGrad(ga);
  };
  return out;
}

Var MeanAxis(const Var& a, int axis) {
  RequireRank2(a.value(), "mean_axis");
  RequireAxis(axis);
  double inv = 1.0 / static_cast<double>(axis == 0 ? a.value().rows()
                                                   : a.value().cols());
  return Scale(SumAxis(a, axis), inv);
}

Var VarAxis(const Var& a, int axis) {
  const Tensor& av = a.value();
  RequireRank2(av, "var_axis");
  RequireAxis(axis);
  int64_t m = av.rows(), n = av.cols();
  int64_t cnt = axis == 0 ? m : n;
  Tensor mean(axis == 0 ? std::vector<int64_t>{1, n}
                        : std::vector<int64_t>{m, 1});
  for (int64_t i = 0; i < m; ++i) {
    for (int64_t j = 0; j < n; ++j) mean.data()[axis == 0 ? j : i] += av(i, j);
  }
  for (double& x : mean.data()) x /= static_cast<double>(cnt);
  Tensor value(mean.shape());
  for (int64_t i = 0; i < m; ++i) {
    for (int64_t j = 0; j < n; ++j) {
      double d = av(i, j) - mean.data()[axis == 0 ? j : i];
      value.data()[axis == 0 ? j : i] += d * d;
    }
  }
  for (double& x : value.data()) x /= static_cast<double>(cnt);

  Var out = MakeResult("var_axis", std::move(value), {a});
  if (!out.requires_grad()) return out;
  Node* self = out.node().get();
  Node* na = a.node().get();
  self->backward = [self, na, mean = std::move(mean), m, n, axis, cnt]() {
    Tensor ga({m, n});
    double scale = 2.0 / static_cast<double>(cnt);
    for (int64_t i = 0; i < m; ++i) {
      for (int64_t j = 0; j < n; ++j) {
        int64_t r = axis == 0 ? j : i;
        ga(i, j) = self->grad.data()[r] * scale *
                   (na->value(i, j) - mean.data()[r]);
      }
    }
    na->AccumulateGrad(ga);
  };
  return out;
}

namespace {

void SoftmaxForward(const Tensor& x, double tau, bool log_space, Tensor* y) {
  int64_t m = x.rows(), n = x.cols();
  for (int64_t i = 0; i < m; ++i) {
    const double* row = x.data().data() + i * n;
    double mx = row[0];
    for (int64_t j = 1; j < n; ++j) mx = std::max(mx, row[j]);
    mx /= tau;
    double denom = 0.0;
    double* orow = y->data().data() + i * n;
    for (int64_t j = 0; j < n; ++j) {
      double z = row[j] / tau - mx;
      orow[j] = z;
      denom += std::exp(z);
    }
    if (log_space) {
      double ld = std::log(denom);
      for (int64_t j = 0; j < n; ++j) orow[j] -= ld;
    } else {
      for (int64_t j = 0; j < n; ++j) orow[j] = std::exp(orow[j]) / denom;
    }
  }
}

}  // namespace

Var SoftmaxRows(const Var& a, double tau) {
  if (!(tau > 0.0)) {
    throw ParameterError("softmax temperature must be positive, got " +
                         std::to_string(tau));
  }
  const Tensor& av = a.value();
  RequireRank2(av, "softmax");
  Tensor value(av.shape());
  SoftmaxForward(av, tau, /*log_space=*/false, &value);
  Var out = MakeResult("softmax", std::move(value), {a});
  if (!out.requires_grad()) return out;
  Node* self = out.node().get();
  Node* na = a.node().get();
  self->backward = [self, na, tau]() {
    const Tensor& y = self->value;
    const Tensor& g = self->grad;
    int64_t m = y.rows(), n = y.cols();
    Tensor ga({m, n});
    for (int64_t i = 0; i < m; ++i) {
      double dot = 0.0;
      for (int64_t j = 0; j < n; ++j) dot += g(i, j) * y(i, j);
      for (int64_t j = 0; j < n; ++j) {
        ga(i, j) = y(i, j) * (g(i, j) - dot) / tau;
      }
    }
    na->AccumulateGrad(ga);
  };
  return out;
}

Var LogSoftmaxRows(const Var& a, double tau) {
  if (!(tau > 0.0)) {
    throw ParameterError("softmax temperature must be positive, got " +
                         std::to_string(tau));
  }
  const Tensor& av = a.value();
  RequireRank2(av, "log_softmax");
  Tensor value(av.shape());
  SoftmaxForward(av, tau, /*log_space=*/true, &value);
  Var out = MakeResult("log_softmax", std::move(value), {a});
  if (!out.requires_grad()) return out;
  Node* self = out.node().get();
  Node* na = a.node().get();
  self->backward = [self, na, tau]() {
    const Tensor& logp = self->value;
    const Tensor& g = self->grad;
    int64_t m = logp.rows(), n = logp.cols();
    Tensor ga({m, n});
    for (int64_t i = 0; i < m; ++i) {
      double gsum = 0.0;
      for (int64_t j = 0; j < n; ++j) gsum += g(i, j);
      for (int64_t j = 0; j < n; ++j) {
        ga(i, j) = (g(i, j) - std::exp(logp(i, j)) * gsum) / tau;
      }
    }
    na->AccumulateGrad(ga);
  };
  return out;
}

Var RowL2Normalize(const Var& a) {
  constexpr double kEps = 1e-12;
  const Tensor& av = a.value();
  RequireRank2(av, "row_l2_normalize");
  int64_t m = av.rows(), n = av.cols();
  Tensor value({m, n});
  std::vector<double> norms(m);
  for (int64_t i = 0; i < m; ++i) {
    double ss = kEps;
    for (int64_t j = 0; j < n; ++j) ss += av(i, j) * av(i, j);
    double s = std::sqrt(ss);
    norms[i] = s;
    for (int64_t j = 0; j < n; ++j) value(i, j) = av(i, j) / s;
  }
  Var out = MakeResult("row_l2_normalize", std::move(value), {a});
  if (!out.requires_grad()) return out;
  Node* self = out.node().get();
  Node* na = a.node().get();
  self->backward = [self, na, norms = std::move(norms), m, n]() {
    const Tensor& g = self->grad;
    const Tensor& x = na->value;
    Tensor ga({m, n});
    for (int64_t i = 0; i < m; ++i) {
      double s = norms[i];
      double dot = 0.0;
      for (int64_t j = 0; j < n; ++j) dot += g(i, j) * x(i, j);
      double s3 = s * s * s;
      for (int64_t j = 0; j < n; ++j) {
        ga(i, j) = g(i, j) / s - x(i, j) * dot / s3;
      }
    }
    na->AccumulateGrad(ga);
  };
  return out;
}

Var Conv1d(const Var& x, const Var& w, const Var& bias, int dilation) {
  const Tensor& xv = x.value();
  const Tensor& wv = w.value();
  const Tensor& bv = bias.value();
  RequireRank2(xv, "conv1d input");
  if (wv.rank() != 3) {
    throw DimensionError("conv1d weight must be {C_out, C_in, k}, got " +
                         wv.ShapeStr());
  }
  if (dilation < 1) {
    throw ParameterError("conv1d dilation must be >= 1");
  }
  int64_t t_in = xv.rows(), c_in = xv.cols();
  int64_t c_out = wv.dim(0), k = wv.dim(2);
  if (wv.dim(1) != c_in) {
    throw DimensionError("conv1d: input channels " + xv.ShapeStr() +
                         " do not match weight " + wv.ShapeStr());
  }
  if (bv.rank() != 2 || bv.rows() != 1 || bv.cols() != c_out) {
    throw DimensionError("conv1d: bias must be {1, C_out}, got " +
                         bv.ShapeStr());
  }
  int64_t t_out = t_in - static_cast<int64_t>(dilation) * (k - 1);
  if (t_out < 1) {
    throw InputError("conv1d: input of " + std::to_string(t_in) +
                     " frames is shorter than the receptive field");
  }

  Tensor value({t_out, c_out});
  for (int64_t t = 0; t < t_out; ++t) {
    double* orow = value.data().data() + t * c_out;
    for (int64_t co = 0; co < c_out; ++co) orow[co] = bv.data()[co];
  }
  // One GEMM per kernel tap: Y += X[j*d ...] * W_j^T.
  for (int64_t j = 0; j < k; ++j) {
    const double* xoff = xv.data().data() + j * dilation * c_in;
    // W_j is the {c_out, c_in} slice at tap j; rows are strided by k.
    for (int64_t t = 0; t < t_out; ++t) {
      const double* xrow = xoff + t * c_in;
      double* orow = value.data().data() + t * c_out;
      for (int64_t co = 0; co < c_out; ++co) {
        const double* wrow = wv.data().data() + (co * c_in) * k + j;
        double acc = 0.0;
        for (int64_t ci = 0; ci < c_in; ++ci) acc += xrow[ci] * wrow[ci * k];
        orow[co] += acc;
      }
    }
  }

  Var out = MakeResult("conv1d", std::move(value), {x, w, bias});
  if (!out.requires_grad()) return out;
  Node* self = out.node().get();
  Node* nx = x.node().get();
  Node* nw = w.node().get();
  Node* nb = bias.node().get();
  self->backward = [self, nx, nw, nb, t_out, c_in, c_out, k, dilation]() {
    const Tensor& g = self->grad;
    if (nx->requires_grad) {
      Tensor gx(nx->value.shape());
      for (int64_t j = 0; j < k; ++j) {
        double* gxoff = gx.data().data() + j * dilation * c_in;
        for (int64_t t = 0; t < t_out; ++t) {
          const double* grow = g.data().data() + t * c_out;
          double* gxrow = gxoff + t * c_in;
          for (int64_t co = 0; co < c_out; ++co) {
            double gv = grow[co];
            const double* wrow = nw->value.data().data() + (co * c_in) * k + j;
            for (int64_t ci = 0; ci < c_in; ++ci) {
              gxrow[ci] += gv * wrow[ci * k];
            }
          }
        }
      }
      nx->AccumulateGrad(gx);
    }
    if (nw->requires_grad) {
      Tensor gw(nw->value.shape());
      for (int64_t j = 0; j < k; ++j) {
        const double* xoff = nx->value.data().data() + j * dilation * c_in;
        for (int64_t t = 0; t < t_out; ++t) {
          const double* grow = g.data().data() + t * c_out;
          const double* xrow = xoff + t * c_in;
          for (int64_t co = 0; co < c_out; ++co) {
            double gv = grow[co];
            double* gwrow = gw.data().data() + (co * c_in) * k + j;
            for (int64_t ci = 0; ci < c_in; ++ci) {
              gwrow[ci * k] += gv * xrow[ci];
            }
          }
        }
      }
      nw->AccumulateGrad(gw);
    }
    if (nb->requires_grad) {
      Tensor gb({1, c_out});
      for (int64_t t = 0; t < t_out; ++t) {
        const double* grow = g.data().data() + t * c_out;
        for (int64_t co = 0; co < c_out; ++co) gb.data()[co] += grow[co];
      }
      nb->AccumulateGrad(gb);
    }
  };
  return out;
}

Var ConcatRows(const std::vector<Var>& parts) {
  if (parts.empty()) {
    throw ContractError("concat_rows of an empty list");
  }
  int64_t n = parts[0].value().cols();
  int64_t total = 0;
  for (const Var& p : parts) {
    RequireRank2(p.value(), "concat_rows");
    if (p.value().cols() != n) {
      throw DimensionError("concat_rows: column mismatch, " +
                           parts[0].value().ShapeStr() + " vs " +
                           p.value().ShapeStr());
    }
    total += p.value().rows();
  }
  Tensor value({total, n});
  int64_t row = 0;
  for (const Var& p : parts) {
    const Tensor& pv = p.value();
    std::copy(pv.data().begin(), pv.data().end(),
              value.data().begin() + row * n);
    row += pv.rows();
  }
  Var out(std::move(value));
  Node* self = out.node().get();
  self->op = "concat_rows";
  bool needs = false;
  for (const Var& p : parts) {
    self->parents.push_back(p.node());
    needs = needs || p.requires_grad();
  }
  self->requires_grad = needs;
  if (!needs) return out;
  self->backward = [self, n]() {
    int64_t row = 0;
    for (auto& parent : self->parents) {
      int64_t rows = parent->value.rows();
      if (parent->requires_grad) {
        Tensor gp({rows, n});
        std::copy(self->grad.data().begin() + row * n,
                  self->grad.data().begin() + (row + rows) * n,
                  gp.data().begin());
        parent->AccumulateGrad(gp);
      }
      row += rows;
    }
  };
  return out;
}

Var SliceRows(const Var& a, int64_t start, int64_t count) {
  const Tensor& av = a.value();
  RequireRank2(av, "slice_rows");
  if (start < 0 || count < 1 || start + count > av.rows()) {
    throw DimensionError("slice_rows: range [" + std::to_string(start) + ", " +
                         std::to_string(start + count) +
                         ") out of bounds for " + av.ShapeStr());
  }
  int64_t n = av.cols();
  Tensor value({count, n});
  std::copy(av.data().begin() + start * n,
            av.data().begin() + (start + count) * n, value.data().begin());
  Var out = MakeResult("slice_rows", std::move(value), {a});
  if (!out.requires_grad()) return out;
  Node* self = out.node().get();
  Node* na = a.node().get();
  self->backward = [self, na, start, count, n]() {
    Tensor ga(na->value.shape());
    std::copy(self->grad.data().begin(), self->grad.data().end(),
              ga.data().begin() + start * n);
    na->AccumulateGrad(ga);
  };
  return out;
}

}  // namespace rdino
