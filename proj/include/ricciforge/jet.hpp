// SPDX-License-Identifier: MIT
#pragma once

#include <cmath>
#include <memory>
#include <span>
#include <vector>

#include "ricciforge/dual.hpp"
#include "ricciforge/error.hpp"
#include "ricciforge/multi_index.hpp"

namespace ricciforge {

/// Truncated multivariate Taylor polynomial over a coefficient ring.
///
/// Arithmetic is exact modulo degree truncation: the product of two order-k
/// jets equals the order-k expansion of the product function. Differentiation
/// returns an order k-1 jet (the top coefficients of a derivative would need
/// unknown degree k+1 data). Binary operations require matching dim and order.
template <class Ring>
class TaylorJet {
 public:
  TaylorJet() = default;

  explicit TaylorJet(std::shared_ptr<const JetLayout> layout)
      : layout_(std::move(layout)), c_(layout_->count(), Ring{}) {}

  static TaylorJet constant(int dim, int order, Ring value) {
    TaylorJet j(JetLayout::get(dim, order));
    j.c_[0] = value;
    return j;
  }

  /// base + x_axis as a jet (the coordinate function centered at the chart point).
  static TaylorJet coordinate(int dim, int order, int axis, Ring base = Ring{}) {
    require(axis >= 0 && axis < dim, "jet coordinate: axis out of range");
    TaylorJet j(JetLayout::get(dim, order));
    j.c_[0] = base;
    if (order >= 1) {
      std::array<std::uint8_t, JetLayout::kMaxDim> e{};
      e[axis] = 1;
      j.c_[j.layout_->index_of(e)] = Ring{1.0};
    }
    return j;
  }

  bool valid() const { return static_cast<bool>(layout_); }
  int dim() const { return layout_->dim(); }
  int order() const { return layout_->order(); }
  int size() const { return static_cast<int>(c_.size()); }
  const JetLayout& layout() const { return *layout_; }
  std::shared_ptr<const JetLayout> layout_ptr() const { return layout_; }

  Ring& operator[](int i) { return c_[i]; }
  const Ring& operator[](int i) const { return c_[i]; }

  /// Value at the chart point (degree-zero coefficient).
  Ring value() const { return c_[0]; }

  TaylorJet& operator+=(const TaylorJet& r) {
    check_same(r, "add");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += r.c_[i];
    return *this;
  }
  TaylorJet& operator-=(const TaylorJet& r) {
    check_same(r, "sub");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= r.c_[i];
    return *this;
  }
  friend TaylorJet operator+(TaylorJet a, const TaylorJet& b) { return a += b; }
  friend TaylorJet operator-(TaylorJet a, const TaylorJet& b) { return a -= b; }
  friend TaylorJet operator-(const TaylorJet& a) {
    TaylorJet out(a.layout_);
    for (std::size_t i = 0; i < a.c_.size(); ++i) out.c_[i] = -a.c_[i];
    return out;
  }

  TaylorJet& scale(const Ring& s) {
    for (auto& x : c_) x *= s;
    return *this;
  }
  friend TaylorJet operator*(TaylorJet a, const Ring& s) { return a.scale(s); }
  friend TaylorJet operator*(const Ring& s, TaylorJet a) { return a.scale(s); }

  friend TaylorJet operator*(const TaylorJet& a, const TaylorJet& b) {
    a.check_same(b, "mul");
    TaylorJet out(a.layout_);
    for (const auto& t : a.layout_->mul_terms()) out.c_[t.dst] += a.c_[t.a] * b.c_[t.b];
    return out;
  }
  TaylorJet& operator*=(const TaylorJet& r) { return *this = (*this) * r; }

  /// Exact partial derivative; result has order-1 coefficients.
  TaylorJet derivative(int axis) const {
    require(axis >= 0 && axis < dim(), "jet derivative: axis out of range");
    require(order() >= 1, "jet derivative: order budget exhausted");
    TaylorJet out(JetLayout::get(dim(), order() - 1));
    for (int i = 0; i < out.size(); ++i) {
      const int src = layout_->up_index(i, axis);
      const double factor = layout_->exponents(i)[axis] + 1.0;
      out.c_[i] = c_[src] * factor;
    }
    return out;
  }

  TaylorJet truncated(int new_order) const {
    require(new_order >= 0 && new_order <= order(), "jet truncate: bad order");
    if (new_order == order()) return *this;
    TaylorJet out(JetLayout::get(dim(), new_order));
    const int keep = layout_->count_at_order(new_order);
    for (int i = 0; i < keep; ++i) out.c_[i] = c_[i];
    return out;
  }

  /// Polynomial evaluation at the given offset from the chart point.
  Ring evaluate(std::span<const double> offset) const {
    require(static_cast<int>(offset.size()) == dim(), "jet evaluate: offset size");
    Ring total{};
    for (int i = 0; i < size(); ++i) {
      double mono = 1.0;
      const auto& e = layout_->exponents(i);
      for (int a = 0; a < dim(); ++a)
        for (int r = 0; r < e[a]; ++r) mono *= offset[a];
      total += c_[i] * mono;
    }
    return total;
  }

  double sup_norm() const {
    double m = 0.0;
    for (const auto& x : c_) m = std::max(m, ring_abs(x));
    return m;
  }

 private:
  void check_same(const TaylorJet& r, const char* what) const {
    require(layout_ && r.layout_, "jet arithmetic: uninitialized operand");
    if (layout_ != r.layout_)
      fail(std::string("jet arithmetic (") + what + "): dimension/order mismatch");
  }

  std::shared_ptr<const JetLayout> layout_;
  std::vector<Ring> c_;
};

/// Composition with an analytic function given its scaled derivatives
/// f_m = f^(m)(c0) / m! at the jet's constant term: returns sum f_m (x - c0)^m.
template <class Ring>
TaylorJet<Ring> compose_series(const TaylorJet<Ring>& x, std::span<const Ring> fm) {
  require(static_cast<int>(fm.size()) == x.order() + 1, "compose_series: need order+1 terms");
  TaylorJet<Ring> p = x;
  p[0] = Ring{};
  TaylorJet<Ring> acc = TaylorJet<Ring>::constant(x.dim(), x.order(), fm[x.order()]);
  for (int m = x.order() - 1; m >= 0; --m) {
    acc = acc * p;
    acc[0] += fm[m];
  }
  return acc;
}

template <class Ring>
TaylorJet<Ring> recip(const TaylorJet<Ring>& x) {
  require(ring_abs(x.value()) > 1e-14 * (1.0 + x.sup_norm()),
          "jet reciprocal: vanishing constant term");
  std::vector<Ring> fm(x.order() + 1);
  const Ring r0 = ring_inv(x.value());
  fm[0] = r0;
  for (int m = 1; m <= x.order(); ++m) fm[m] = fm[m - 1] * (-r0);
  return compose_series(x, std::span<const Ring>(fm));
}

template <class Ring>
TaylorJet<Ring> operator/(const TaylorJet<Ring>& a, const TaylorJet<Ring>& b) {
  return a * recip(b);
}

template <class Ring>
TaylorJet<Ring> exp(const TaylorJet<Ring>& x) {
  std::vector<Ring> fm(x.order() + 1);
  const Ring e0 = ring_exp(x.value());
  double inv_fact = 1.0;
  for (int m = 0; m <= x.order(); ++m) {
    if (m > 0) inv_fact /= m;
    fm[m] = e0 * inv_fact;
  }
  return compose_series(x, std::span<const Ring>(fm));
}

template <class Ring>
TaylorJet<Ring> sin(const TaylorJet<Ring>& x) {
  const Ring s0 = ring_sin(x.value());
  const Ring c0 = ring_cos(x.value());
  std::vector<Ring> fm(x.order() + 1);
  double inv_fact = 1.0;
  for (int m = 0; m <= x.order(); ++m) {
    if (m > 0) inv_fact /= m;
    const Ring base = (m % 4 == 0)   ? s0
                      : (m % 4 == 1) ? c0
                      : (m % 4 == 2) ? -s0
                                     : -c0;
    fm[m] = base * inv_fact;
  }
  return compose_series(x, std::span<const Ring>(fm));
}

template <class Ring>
TaylorJet<Ring> cos(const TaylorJet<Ring>& x) {
  const Ring s0 = ring_sin(x.value());
  const Ring c0 = ring_cos(x.value());
  std::vector<Ring> fm(x.order() + 1);
  double inv_fact = 1.0;
  for (int m = 0; m <= x.order(); ++m) {
    if (m > 0) inv_fact /= m;
    const Ring base = (m % 4 == 0)   ? c0
                      : (m % 4 == 1) ? -s0
                      : (m % 4 == 2) ? -c0
                                     : s0;
    fm[m] = base * inv_fact;
  }
  return compose_series(x, std::span<const Ring>(fm));
}

using Jet = TaylorJet<double>;
using DualJet = TaylorJet<Dual>;

}  // namespace ricciforge
