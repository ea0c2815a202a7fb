// SPDX-License-Identifier: MIT
#pragma once

#include <vector>

#include "ricciforge/jet.hpp"
#include "ricciforge/linalg.hpp"

namespace ricciforge {

/// Dense container of jets forming a covariant tensor of rank <= 4.
/// Components are row-major in the slot indices; variance bookkeeping is the
/// caller's (contraction helpers take the metric or its inverse explicitly).
template <class Ring>
class JetTensor {
 public:
  JetTensor() = default;

  JetTensor(int dim, int rank, int order) : dim_(dim), rank_(rank) {
    require(rank >= 0 && rank <= 4, "jet tensor: rank out of range");
    std::size_t n = 1;
    for (int r = 0; r < rank; ++r) n *= static_cast<std::size_t>(dim);
    c_.assign(n, TaylorJet<Ring>(JetLayout::get(dim, order)));
  }

  int dim() const { return dim_; }
  int rank() const { return rank_; }
  int order() const { return c_.empty() ? -1 : c_[0].order(); }
  std::size_t size() const { return c_.size(); }
  bool valid() const { return !c_.empty(); }

  TaylorJet<Ring>& operator[](std::size_t i) { return c_[i]; }
  const TaylorJet<Ring>& operator[](std::size_t i) const { return c_[i]; }

  TaylorJet<Ring>& at() { return c_[0]; }
  const TaylorJet<Ring>& at() const { return c_[0]; }
  TaylorJet<Ring>& at(int i) { return c_[i]; }
  const TaylorJet<Ring>& at(int i) const { return c_[i]; }
  TaylorJet<Ring>& at(int i, int j) { return c_[static_cast<std::size_t>(i) * dim_ + j]; }
  const TaylorJet<Ring>& at(int i, int j) const {
    return c_[static_cast<std::size_t>(i) * dim_ + j];
  }
  TaylorJet<Ring>& at(int i, int j, int k) {
    return c_[(static_cast<std::size_t>(i) * dim_ + j) * dim_ + k];
  }
  const TaylorJet<Ring>& at(int i, int j, int k) const {
    return c_[(static_cast<std::size_t>(i) * dim_ + j) * dim_ + k];
  }
  TaylorJet<Ring>& at(int i, int j, int k, int l) {
    return c_[((static_cast<std::size_t>(i) * dim_ + j) * dim_ + k) * dim_ + l];
  }
  const TaylorJet<Ring>& at(int i, int j, int k, int l) const {
    return c_[((static_cast<std::size_t>(i) * dim_ + j) * dim_ + k) * dim_ + l];
  }

  JetTensor& operator+=(const JetTensor& r) {
    require(same_shape(r), "jet tensor add: shape mismatch");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += r.c_[i];
    return *this;
  }
  JetTensor& operator-=(const JetTensor& r) {
    require(same_shape(r), "jet tensor sub: shape mismatch");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= r.c_[i];
    return *this;
  }
  friend JetTensor operator+(JetTensor a, const JetTensor& b) { return a += b; }
  friend JetTensor operator-(JetTensor a, const JetTensor& b) { return a -= b; }

  JetTensor& scale(const Ring& s) {
    for (auto& x : c_) x.scale(s);
    return *this;
  }
  friend JetTensor operator*(JetTensor a, const Ring& s) { return a.scale(s); }
  friend JetTensor operator*(const Ring& s, JetTensor a) { return a.scale(s); }

  JetTensor truncated(int new_order) const {
    JetTensor out = *this;
    for (auto& x : out.c_) x = x.truncated(new_order);
    return out;
  }

  /// Tensor of base-point values.
  std::vector<Ring> base_point() const {
    std::vector<Ring> out(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) out[i] = c_[i].value();
    return out;
  }

  double sup_norm_at_base() const {
    double m = 0.0;
    for (const auto& x : c_) m = std::max(m, ring_abs(x.value()));
    return m;
  }

  double sup_norm_all_coefficients() const {
    double m = 0.0;
    for (const auto& x : c_) m = std::max(m, x.sup_norm());
    return m;
  }

  bool same_shape(const JetTensor& r) const {
    return dim_ == r.dim_ && rank_ == r.rank_ && order() == r.order();
  }

 private:
  int dim_ = 0;
  int rank_ = 0;
  std::vector<TaylorJet<Ring>> c_;
};

/// Inverse of a rank-2 jet tensor whose constant term is invertible:
/// invert the constant matrix over the ring, then a Neumann series absorbs
/// the nilpotent remainder, so m * inverse(m) equals the identity jet exactly
/// up to the truncation order.
template <class Ring>
JetTensor<Ring> jet_matrix_inverse(const JetTensor<Ring>& m) {
  require(m.rank() == 2, "jet matrix inverse: rank 2 expected");
  const int n = m.dim();
  const int order = m.order();

  // Constant-term inverse via Gauss-Jordan over the ring.
  std::vector<Ring> a(static_cast<std::size_t>(n) * n);
  std::vector<Ring> inv(static_cast<std::size_t>(n) * n, Ring{});
  double scale = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      a[static_cast<std::size_t>(i) * n + j] = m.at(i, j).value();
      scale = std::max(scale, ring_abs(a[static_cast<std::size_t>(i) * n + j]));
    }
  for (int i = 0; i < n; ++i) inv[static_cast<std::size_t>(i) * n + i] = Ring{1.0};
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (ring_abs(a[static_cast<std::size_t>(r) * n + col]) >
          ring_abs(a[static_cast<std::size_t>(pivot) * n + col]))
        pivot = r;
    if (ring_abs(a[static_cast<std::size_t>(pivot) * n + col]) <= 1e-12 * scale)
      fail("jet matrix inverse: degenerate constant term");
    if (pivot != col)
      for (int c = 0; c < n; ++c) {
        std::swap(a[static_cast<std::size_t>(pivot) * n + c],
                  a[static_cast<std::size_t>(col) * n + c]);
        std::swap(inv[static_cast<std::size_t>(pivot) * n + c],
                  inv[static_cast<std::size_t>(col) * n + c]);
      }
    const Ring ip = ring_inv(a[static_cast<std::size_t>(col) * n + col]);
    for (int c = 0; c < n; ++c) {
      a[static_cast<std::size_t>(col) * n + c] *= ip;
      inv[static_cast<std::size_t>(col) * n + c] *= ip;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const Ring f = a[static_cast<std::size_t>(r) * n + col];
      for (int c = 0; c < n; ++c) {
        a[static_cast<std::size_t>(r) * n + c] -= f * a[static_cast<std::size_t>(col) * n + c];
        inv[static_cast<std::size_t>(r) * n + c] -= f * inv[static_cast<std::size_t>(col) * n + c];
      }
    }
  }

  // Q = A0^{-1} (m - A0) has zero constant term, hence is nilpotent in the
  // truncated algebra: (I + Q)^{-1} = sum_{p<=order} (-Q)^p.
  JetTensor<Ring> q(n, 2, order);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      TaylorJet<Ring> s(JetLayout::get(n, order));
      for (int k = 0; k < n; ++k) {
        TaylorJet<Ring> mk = m.at(k, j);
        mk[0] = Ring{};
        s += mk * inv[static_cast<std::size_t>(i) * n + k];
      }
      q.at(i, j) = s;
    }

  JetTensor<Ring> series(n, 2, order);  // sum (-Q)^p, starting from identity
  for (int i = 0; i < n; ++i) series.at(i, i)[0] = Ring{1.0};
  JetTensor<Ring> power = series;
  for (int p = 1; p <= order; ++p) {
    JetTensor<Ring> next(n, 2, order);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        TaylorJet<Ring> s(JetLayout::get(n, order));
        for (int k = 0; k < n; ++k) s += power.at(i, k) * q.at(k, j);
        next.at(i, j) = -s;
      }
    power = next;
    series += power;
  }

  JetTensor<Ring> out(n, 2, order);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      TaylorJet<Ring> s(JetLayout::get(n, order));
      for (int k = 0; k < n; ++k) s += series.at(i, k) * inv[static_cast<std::size_t>(k) * n + j];
      out.at(i, j) = s;
    }
  return out;
}

/// Metric-specific wrapper: requires a symmetric positive definite constant
/// term (min eigenvalue above 1e-10 times the largest entry).
template <class Ring>
JetTensor<Ring> jet_metric_inverse(const JetTensor<Ring>& g) {
  const int n = g.dim();
  std::vector<double> g0(static_cast<std::size_t>(n) * n);
  double scale = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      g0[static_cast<std::size_t>(i) * n + j] = ring_value(g.at(i, j).value());
      scale = std::max(scale, std::abs(g0[static_cast<std::size_t>(i) * n + j]));
    }
  if (linalg::min_eigenvalue(g0, n) <= 1e-10 * scale)
    fail("degenerate metric at base point");
  return jet_matrix_inverse(g);
}

/// Builds a dual-coefficient tensor whose derivative component is seeded with
/// the direction tensor: evaluating any pipeline on the result carries
/// d/dt (value + t * direction) at t = 0 exactly.
inline JetTensor<Dual> seed_dual(const JetTensor<double>& value,
                                 const JetTensor<double>& direction) {
  require(value.same_shape(direction), "seed_dual: shape mismatch");
  JetTensor<Dual> out(value.dim(), value.rank(), value.order());
  for (std::size_t c = 0; c < value.size(); ++c)
    for (int i = 0; i < value[c].size(); ++i) out[c][i] = Dual{value[c][i], direction[c][i]};
  return out;
}

/// Dual tensor with zero derivative component (a parameter-independent field).
inline JetTensor<Dual> seed_dual_constant(const JetTensor<double>& value) {
  JetTensor<Dual> out(value.dim(), value.rank(), value.order());
  for (std::size_t c = 0; c < value.size(); ++c)
    for (int i = 0; i < value[c].size(); ++i) out[c][i] = Dual{value[c][i], 0.0};
  return out;
}

inline JetTensor<double> dual_value_part(const JetTensor<Dual>& t) {
  JetTensor<double> out(t.dim(), t.rank(), t.order());
  for (std::size_t c = 0; c < t.size(); ++c)
    for (int i = 0; i < t[c].size(); ++i) out[c][i] = t[c][i].v;
  return out;
}

inline JetTensor<double> dual_derivative_part(const JetTensor<Dual>& t) {
  JetTensor<double> out(t.dim(), t.rank(), t.order());
  for (std::size_t c = 0; c < t.size(); ++c)
    for (int i = 0; i < t[c].size(); ++i) out[c][i] = t[c][i].d;
  return out;
}

}  // namespace ricciforge
