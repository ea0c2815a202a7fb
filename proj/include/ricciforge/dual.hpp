// SPDX-License-Identifier: MIT
#pragma once

#include <cmath>

namespace ricciforge {

/// First-order dual number: value plus directional derivative component.
/// Used as the coefficient ring of a jet to differentiate a whole pipeline
/// with respect to one auxiliary parameter without finite differencing.
struct Dual {
  double v = 0.0;
  double d = 0.0;

  constexpr Dual() = default;
  constexpr Dual(double value) : v(value) {}
  constexpr Dual(double value, double dot) : v(value), d(dot) {}

  constexpr Dual& operator+=(const Dual& r) {
    v += r.v;
    d += r.d;
    return *this;
  }
  constexpr Dual& operator-=(const Dual& r) {
    v -= r.v;
    d -= r.d;
    return *this;
  }
  constexpr Dual& operator*=(const Dual& r) {
    d = v * r.d + d * r.v;
    v *= r.v;
    return *this;
  }
  constexpr Dual& operator/=(const Dual& r) {
    v /= r.v;
    d = (d - v * r.d) / r.v;
    return *this;
  }

  friend constexpr Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend constexpr Dual operator-(Dual a, const Dual& b) { return a -= b; }
  friend constexpr Dual operator*(Dual a, const Dual& b) { return a *= b; }
  friend constexpr Dual operator/(Dual a, const Dual& b) { return a /= b; }
  friend constexpr Dual operator-(const Dual& a) { return {-a.v, -a.d}; }
  friend constexpr bool operator==(const Dual& a, const Dual& b) {
    return a.v == b.v && a.d == b.d;
  }
};

// Ring hooks shared by double and Dual so jet code stays generic.

inline double ring_abs(double x) { return std::abs(x); }
inline double ring_abs(const Dual& x) { return std::abs(x.v); }

inline double ring_value(double x) { return x; }
inline double ring_value(const Dual& x) { return x.v; }

inline double ring_inv(double x) { return 1.0 / x; }
inline Dual ring_inv(const Dual& x) { return {1.0 / x.v, -x.d / (x.v * x.v)}; }

inline double ring_exp(double x) { return std::exp(x); }
inline Dual ring_exp(const Dual& x) {
  const double e = std::exp(x.v);
  return {e, e * x.d};
}

inline double ring_sin(double x) { return std::sin(x); }
inline Dual ring_sin(const Dual& x) { return {std::sin(x.v), std::cos(x.v) * x.d}; }

inline double ring_cos(double x) { return std::cos(x); }
inline Dual ring_cos(const Dual& x) { return {std::cos(x.v), -std::sin(x.v) * x.d}; }

}  // namespace ricciforge
