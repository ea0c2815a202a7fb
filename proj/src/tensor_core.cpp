// SPDX-License-Identifier: MIT
#include <algorithm>
#include <cmath>

#include "ricciforge/linalg.hpp"
#include "ricciforge/tensor4.hpp"

namespace ricciforge {

GeneralizedEigen sym2_eigen(const SymMatrixValue& s, const SymMatrixValue& g) {
  const int n = s.dim();
  require(n == g.dim(), "sym2_eigen: dimension mismatch");
  std::vector<double> l = g.full();
  double scale = 0.0;
  for (const double x : l) scale = std::max(scale, std::abs(x));
  if (linalg::min_eigenvalue(g.full(), n) <= 1e-10 * scale)
    fail("sym2_eigen: metric is not positive definite");
  require(linalg::cholesky(l, n), "sym2_eigen: Cholesky failed");

  // A = L^{-1} s L^{-T}
  std::vector<double> a = s.full();
  // columns: solve L X = s  (A' = L^{-1} s)
  for (int col = 0; col < n; ++col) {
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = a[static_cast<std::size_t>(i) * n + col];
    linalg::solve_lower(l, n, x);
    for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i) * n + col] = x[i];
  }
  // rows: solve X L^T = A'  <=>  L (X^T) = A'^T
  for (int row = 0; row < n; ++row) {
    std::vector<double> x(n);
    for (int j = 0; j < n; ++j) x[j] = a[static_cast<std::size_t>(row) * n + j];
    linalg::solve_lower(l, n, x);
    for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(row) * n + j] = x[j];
  }

  GeneralizedEigen out;
  std::vector<double> y;
  linalg::jacobi_eigen(a, n, out.eigenvalues, &y);
  // v = L^{-T} y, column by column
  out.eigenvectors.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int col = 0; col < n; ++col) {
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = y[static_cast<std::size_t>(i) * n + col];
    linalg::solve_lower_transposed(l, n, x);
    for (int i = 0; i < n; ++i) out.eigenvectors[static_cast<std::size_t>(i) * n + col] = x[i];
  }
  return out;
}

double sym2_min_eigenvalue(const SymMatrixValue& s, const SymMatrixValue& g) {
  return sym2_eigen(s, g).eigenvalues.front();
}

double trace_with_metric(const SymMatrixValue& s, const SymMatrixValue& g) {
  const int n = s.dim();
  std::vector<double> gi;
  require(linalg::invert(g.full(), n, gi), "trace_with_metric: singular metric");
  double tr = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) tr += gi[static_cast<std::size_t>(i) * n + j] * s(i, j);
  return tr;
}

double Tensor4Value::curvature_symmetry_violation() const {
  const int n = dim_;
  double scale = sup_norm();
  if (scale == 0.0) scale = 1.0;
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double t = (*this)(i, j, k, l);
          worst = std::max(worst, std::abs(t + (*this)(j, i, k, l)));
          worst = std::max(worst, std::abs(t + (*this)(i, j, l, k)));
          worst = std::max(worst, std::abs(t - (*this)(k, l, i, j)));
          worst = std::max(
              worst, std::abs(t + (*this)(i, k, l, j) + (*this)(i, l, j, k)));
        }
  return worst / scale;
}

Tensor4Value kulkarni_nomizu(const SymMatrixValue& a, const SymMatrixValue& b) {
  require(a.dim() == b.dim(), "kulkarni_nomizu: dimension mismatch");
  const int n = a.dim();
  Tensor4Value out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          out(i, j, k, l) =
              a(i, k) * b(j, l) + a(j, l) * b(i, k) - a(i, l) * b(j, k) - a(j, k) * b(i, l);
  return out;
}

SymMatrixValue trace_24(const Tensor4Value& t, const SymMatrixValue& g) {
  const int n = t.dim();
  std::vector<double> gi;
  require(linalg::invert(g.full(), n, gi), "trace_24: singular metric");
  SymMatrixValue out(n);
  for (int i = 0; i < n; ++i)
    for (int k = i; k < n; ++k) {
      double s = 0.0;
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) s += gi[static_cast<std::size_t>(j) * n + l] * t(i, j, k, l);
      out(i, k) = s;
    }
  return out;
}

Tensor4Value constant_curvature_tensor(const SymMatrixValue& g, double curvature) {
  Tensor4Value kn = kulkarni_nomizu(g, g);
  kn.scale(0.5 * curvature);
  return kn;
}

Tensor4Value random_algebraic_curvature(int dim, CounterRng& rng, double amplitude) {
  Tensor4Value raw(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k)
        for (int l = 0; l < dim; ++l) raw(i, j, k, l) = amplitude * rng.symmetric();

  // project onto Sym^2(Lambda^2): antisymmetrize both pairs, symmetrize the exchange
  Tensor4Value sym(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k)
        for (int l = 0; l < dim; ++l) {
          const double anti = 0.25 * (raw(i, j, k, l) - raw(j, i, k, l) - raw(i, j, l, k) +
                                      raw(j, i, l, k));
          const double anti_sw = 0.25 * (raw(k, l, i, j) - raw(l, k, i, j) - raw(k, l, j, i) +
                                         raw(l, k, j, i));
          sym(i, j, k, l) = 0.5 * (anti + anti_sw);
        }

  // remove the totally antisymmetric part (the first-Bianchi obstruction)
  Tensor4Value out(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k)
        for (int l = 0; l < dim; ++l) {
          const double b =
              (sym(i, j, k, l) + sym(i, k, l, j) + sym(i, l, j, k)) / 3.0;
          out(i, j, k, l) = sym(i, j, k, l) - b;
        }
  return out;
}

TensorValue::TensorValue(int dim_, int rank_) : dim(dim_), rank(rank_) {
  require(rank >= 0 && rank <= 4, "tensor value: rank out of range");
  std::size_t n = 1;
  for (int r = 0; r < rank; ++r) n *= static_cast<std::size_t>(dim);
  v.assign(n, 0.0);
}

namespace {
std::size_t flat_index(const TensorValue& t, const std::vector<int>& idx) {
  std::size_t f = 0;
  for (int s = 0; s < t.rank; ++s) f = f * static_cast<std::size_t>(t.dim) + idx[s];
  return f;
}
}  // namespace

double& TensorValue::at(const std::vector<int>& idx) { return v[flat_index(*this, idx)]; }
double TensorValue::at(const std::vector<int>& idx) const { return v[flat_index(*this, idx)]; }

namespace {

TensorValue contract_slot(const TensorValue& t, int slot, const std::vector<double>& m) {
  require(slot >= 0 && slot < t.rank, "index op: invalid slot");
  const int n = t.dim;
  TensorValue out(t.dim, t.rank);
  std::size_t stride = 1;
  for (int r = t.rank - 1; r > slot; --r) stride *= static_cast<std::size_t>(n);
  for (std::size_t f = 0; f < out.v.size(); ++f) {
    const int slot_idx = static_cast<int>((f / stride) % static_cast<std::size_t>(n));
    const std::size_t base = f - static_cast<std::size_t>(slot_idx) * stride;
    double s = 0.0;
    for (int a = 0; a < n; ++a)
      s += m[static_cast<std::size_t>(slot_idx) * n + a] *
           t.v[base + static_cast<std::size_t>(a) * stride];
    out.v[f] = s;
  }
  return out;
}

}  // namespace

TensorValue raise_slot(const TensorValue& t, int slot, const SymMatrixValue& g) {
  std::vector<double> gi;
  require(linalg::invert(g.full(), g.dim(), gi), "raise_slot: singular metric");
  return contract_slot(t, slot, gi);
}

TensorValue lower_slot(const TensorValue& t, int slot, const SymMatrixValue& g) {
  return contract_slot(t, slot, g.full());
}

TensorValue trace_slots(const TensorValue& t, int slot_a, int slot_b, const SymMatrixValue& g) {
  require(slot_a != slot_b && slot_a >= 0 && slot_b >= 0 && slot_a < t.rank && slot_b < t.rank,
          "trace: invalid slots");
  if (slot_a > slot_b) std::swap(slot_a, slot_b);
  const int n = t.dim;
  std::vector<double> gi;
  require(linalg::invert(g.full(), n, gi), "trace: singular metric");

  TensorValue out(n, t.rank - 2);
  std::vector<int> out_idx(std::max(t.rank - 2, 1), 0);
  std::vector<int> in_idx(t.rank, 0);
  const std::size_t out_count = out.v.size();
  for (std::size_t f = 0; f < out_count; ++f) {
    std::size_t rem = f;
    for (int s = t.rank - 3; s >= 0; --s) {
      out_idx[s] = static_cast<int>(rem % n);
      rem /= n;
    }
    double s = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        int src = 0;
        for (int slot = 0; slot < t.rank; ++slot) {
          int value;
          if (slot == slot_a)
            value = a;
          else if (slot == slot_b)
            value = b;
          else {
            int pos = slot - (slot > slot_a ? 1 : 0) - (slot > slot_b ? 1 : 0);
            value = out_idx[pos];
          }
          src = src * n + value;
        }
        s += gi[static_cast<std::size_t>(a) * n + b] * t.v[src];
      }
    out.v[f] = s;
  }
  return out;
}

double inner_product(const TensorValue& a, const TensorValue& b, const SymMatrixValue& g) {
  require(a.dim == b.dim && a.rank == b.rank, "inner product: shape mismatch");
  const int n = a.dim;
  std::vector<double> gi;
  require(linalg::invert(g.full(), n, gi), "inner product: singular metric");
  // raise every slot of a, then contract with b componentwise
  TensorValue ar = a;
  for (int s = 0; s < a.rank; ++s) ar = contract_slot(ar, s, gi);
  double total = 0.0;
  for (std::size_t f = 0; f < ar.v.size(); ++f) total += ar.v[f] * b.v[f];
  return total;
}

}  // namespace ricciforge
