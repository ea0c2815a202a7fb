// SPDX-License-Identifier: MIT
#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

namespace ricciforge {

/// Index bookkeeping for truncated multivariate Taylor coefficients.
///
/// Multi-indices of total degree <= order over dim variables are stored
/// degree-major (then lexicographic within a degree), which makes the layout
/// for order k a strict prefix of the layout for order k+1: truncation is a
/// prefix copy and indices stay stable across orders.
class JetLayout {
 public:
  static constexpr int kMaxDim = 6;
  static constexpr int kMaxOrder = 12;

  static std::shared_ptr<const JetLayout> get(int dim, int order);

  int dim() const { return dim_; }
  int order() const { return order_; }
  int count() const { return static_cast<int>(exponents_.size()); }

  const std::array<std::uint8_t, kMaxDim>& exponents(int index) const {
    return exponents_[index];
  }
  int degree(int index) const { return degree_[index]; }

  /// Number of coefficients with total degree <= ord (prefix length).
  int count_at_order(int ord) const;

  /// Index of alpha + e_axis, or -1 when that exceeds the order cap.
  int up_index(int index, int axis) const { return up_[index * dim_ + axis]; }

  /// Index of a multi-index given by exponents, or -1 if absent.
  int index_of(const std::array<std::uint8_t, kMaxDim>& exps) const;

  struct MulTerm {
    std::int32_t a, b, dst;
  };
  /// All ordered coefficient pairs (a, b) with deg(a) + deg(b) <= order,
  /// together with the destination index of alpha_a + alpha_b.
  const std::vector<MulTerm>& mul_terms() const { return mul_terms_; }

 private:
  JetLayout(int dim, int order);

  static std::uint64_t pack(const std::array<std::uint8_t, kMaxDim>& e);

  int dim_;
  int order_;
  std::vector<std::array<std::uint8_t, kMaxDim>> exponents_;
  std::vector<int> degree_;
  std::vector<int> degree_begin_;  // degree_begin_[d] = first index of degree d
  std::vector<int> up_;
  std::vector<MulTerm> mul_terms_;
  std::unordered_map<std::uint64_t, int> position_;
};

}  // namespace ricciforge
