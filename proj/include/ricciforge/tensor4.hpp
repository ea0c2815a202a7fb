// SPDX-License-Identifier: MIT
#pragma once

#include <vector>

#include "ricciforge/rng.hpp"
#include "ricciforge/sym_matrix.hpp"

namespace ricciforge {

/// Dense rank-4 value; when flagged algebraic-curvature it satisfies the
/// pair antisymmetries, pair-exchange symmetry and the first Bianchi cycle.
class Tensor4Value {
 public:
  Tensor4Value() = default;
  explicit Tensor4Value(int dim)
      : dim_(dim), v_(static_cast<std::size_t>(dim) * dim * dim * dim, 0.0) {}

  int dim() const { return dim_; }
  double& operator()(int i, int j, int k, int l) { return v_[index(i, j, k, l)]; }
  double operator()(int i, int j, int k, int l) const { return v_[index(i, j, k, l)]; }

  Tensor4Value& operator+=(const Tensor4Value& r) {
    require(dim_ == r.dim_, "tensor4 add: dimension mismatch");
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += r.v_[i];
    return *this;
  }
  Tensor4Value& scale(double s) {
    for (double& x : v_) x *= s;
    return *this;
  }
  friend Tensor4Value operator+(Tensor4Value a, const Tensor4Value& b) { return a += b; }
  friend Tensor4Value operator*(Tensor4Value a, double s) { return a.scale(s); }
  friend Tensor4Value operator*(double s, Tensor4Value a) { return a.scale(s); }

  double sup_norm() const {
    double m = 0.0;
    for (const double x : v_) m = std::max(m, std::abs(x));
    return m;
  }

  /// Largest relative violation over the three algebraic-curvature symmetry
  /// families: antisymmetry in (i,j) and (k,l), pair exchange, first Bianchi.
  double curvature_symmetry_violation() const;

 private:
  std::size_t index(int i, int j, int k, int l) const {
    return ((static_cast<std::size_t>(i) * dim_ + j) * dim_ + k) * dim_ + l;
  }
  int dim_ = 0;
  std::vector<double> v_;
};

/// (a kn b)_{ijkl} = a_{ik} b_{jl} + a_{jl} b_{ik} - a_{il} b_{jk} - a_{jk} b_{il}.
Tensor4Value kulkarni_nomizu(const SymMatrixValue& a, const SymMatrixValue& b);

/// g-trace over the second and fourth slots: (tr t)_{ik} = g^{jl} t_{ijkl}.
SymMatrixValue trace_24(const Tensor4Value& t, const SymMatrixValue& g);

/// Constant-curvature model tensor K/2 (g kn g), i.e. R(u,v,u,v) = K |u^v|^2.
Tensor4Value constant_curvature_tensor(const SymMatrixValue& g, double curvature);

/// Random tensor with exact algebraic-curvature symmetries: a raw random
/// tensor is symmetrized into Sym^2(Lambda^2) and the totally antisymmetric
/// (Bianchi-violating) part is projected out.
Tensor4Value random_algebraic_curvature(int dim, CounterRng& rng, double amplitude = 1.0);

// ---------------------------------------------------------------------------
// Generic slot operations on plain covariant tensor values (rank <= 4).
// Tensors are row-major component vectors; the caller tracks slot variance.
// ---------------------------------------------------------------------------

struct TensorValue {
  int dim = 0;
  int rank = 0;
  std::vector<double> v;

  TensorValue() = default;
  TensorValue(int dim_, int rank_);
  double& at(const std::vector<int>& idx);
  double at(const std::vector<int>& idx) const;
};

/// Contracts `slot` with the inverse metric (index raising); the result keeps
/// the same storage shape.
TensorValue raise_slot(const TensorValue& t, int slot, const SymMatrixValue& g);

/// Contracts `slot` with the metric (index lowering).
TensorValue lower_slot(const TensorValue& t, int slot, const SymMatrixValue& g);

/// g-trace of two distinct covariant slots; rank drops by two.
TensorValue trace_slots(const TensorValue& t, int slot_a, int slot_b, const SymMatrixValue& g);

/// Full g-inner product of two covariant tensors of equal rank.
double inner_product(const TensorValue& a, const TensorValue& b, const SymMatrixValue& g);

}  // namespace ricciforge
