// SPDX-License-Identifier: MIT
#pragma once

#include <vector>

#include "ricciforge/error.hpp"

namespace ricciforge {

/// Symmetric n x n value with packed upper-triangle storage, so the symmetry
/// invariant holds exactly by construction.
class SymMatrixValue {
 public:
  SymMatrixValue() = default;
  explicit SymMatrixValue(int dim) : dim_(dim), packed_(dim * (dim + 1) / 2, 0.0) {}

  static SymMatrixValue identity(int dim) {
    SymMatrixValue m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }
  static SymMatrixValue diagonal(const std::vector<double>& d) {
    SymMatrixValue m(static_cast<int>(d.size()));
    for (int i = 0; i < m.dim(); ++i) m(i, i) = d[i];
    return m;
  }

  int dim() const { return dim_; }

  double& operator()(int i, int j) { return packed_[packed_index(i, j)]; }
  double operator()(int i, int j) const { return packed_[packed_index(i, j)]; }

  SymMatrixValue& operator+=(const SymMatrixValue& r) {
    require(dim_ == r.dim_, "sym matrix add: dimension mismatch");
    for (std::size_t i = 0; i < packed_.size(); ++i) packed_[i] += r.packed_[i];
    return *this;
  }
  SymMatrixValue& operator-=(const SymMatrixValue& r) {
    require(dim_ == r.dim_, "sym matrix sub: dimension mismatch");
    for (std::size_t i = 0; i < packed_.size(); ++i) packed_[i] -= r.packed_[i];
    return *this;
  }
  SymMatrixValue& scale(double s) {
    for (double& x : packed_) x *= s;
    return *this;
  }
  friend SymMatrixValue operator+(SymMatrixValue a, const SymMatrixValue& b) { return a += b; }
  friend SymMatrixValue operator-(SymMatrixValue a, const SymMatrixValue& b) { return a -= b; }
  friend SymMatrixValue operator*(SymMatrixValue a, double s) { return a.scale(s); }
  friend SymMatrixValue operator*(double s, SymMatrixValue a) { return a.scale(s); }

  std::vector<double> full() const {
    std::vector<double> f(static_cast<std::size_t>(dim_) * dim_);
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) f[static_cast<std::size_t>(i) * dim_ + j] = (*this)(i, j);
    return f;
  }

  double sup_norm() const {
    double m = 0.0;
    for (const double x : packed_) m = std::max(m, std::abs(x));
    return m;
  }

 private:
  int packed_index(int i, int j) const {
    if (i > j) std::swap(i, j);
    return i * dim_ - i * (i - 1) / 2 + (j - i);
  }

  int dim_ = 0;
  std::vector<double> packed_;
};

struct GeneralizedEigen {
  std::vector<double> eigenvalues;   // ascending
  std::vector<double> eigenvectors;  // row-major, column j pairs with eigenvalue j
};

/// Generalized symmetric eigenproblem s v = lambda g v with g positive
/// definite; eigenvectors are g-orthonormal. Solved through the Cholesky
/// congruence L^{-1} s L^{-T}.
GeneralizedEigen sym2_eigen(const SymMatrixValue& s, const SymMatrixValue& g);

/// Smallest eigenvalue of s relative to g.
double sym2_min_eigenvalue(const SymMatrixValue& s, const SymMatrixValue& g);

/// Tr_g s = g^{ij} s_{ij}.
double trace_with_metric(const SymMatrixValue& s, const SymMatrixValue& g);

}  // namespace ricciforge
