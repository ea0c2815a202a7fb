// SPDX-License-Identifier: MIT
#include "ricciforge/multi_index.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include "ricciforge/error.hpp"

namespace ricciforge {

namespace {

void enumerate_degree(int dim, int degree, int axis, std::array<std::uint8_t, JetLayout::kMaxDim>& scratch,
                      std::vector<std::array<std::uint8_t, JetLayout::kMaxDim>>& out) {
  if (axis == dim - 1) {
    scratch[axis] = static_cast<std::uint8_t>(degree);
    out.push_back(scratch);
    scratch[axis] = 0;
    return;
  }
  for (int e = degree; e >= 0; --e) {
    scratch[axis] = static_cast<std::uint8_t>(e);
    enumerate_degree(dim, degree - e, axis + 1, scratch, out);
  }
  scratch[axis] = 0;
}

}  // namespace

JetLayout::JetLayout(int dim, int order) : dim_(dim), order_(order) {
  std::array<std::uint8_t, kMaxDim> scratch{};
  degree_begin_.resize(order + 2, 0);
  for (int d = 0; d <= order; ++d) {
    degree_begin_[d] = static_cast<int>(exponents_.size());
    enumerate_degree(dim, d, 0, scratch, exponents_);
  }
  degree_begin_[order + 1] = static_cast<int>(exponents_.size());

  degree_.resize(exponents_.size());
  position_.reserve(exponents_.size() * 2);
  for (int i = 0; i < count(); ++i) {
    int deg = 0;
    for (int a = 0; a < dim_; ++a) deg += exponents_[i][a];
    degree_[i] = deg;
    position_.emplace(pack(exponents_[i]), i);
  }

  up_.assign(static_cast<std::size_t>(count()) * dim_, -1);
  for (int i = 0; i < count(); ++i) {
    if (degree_[i] == order_) continue;
    for (int a = 0; a < dim_; ++a) {
      auto e = exponents_[i];
      e[a] = static_cast<std::uint8_t>(e[a] + 1);
      up_[static_cast<std::size_t>(i) * dim_ + a] = index_of(e);
    }
  }

  for (int a = 0; a < count(); ++a) {
    if (degree_[a] > order_) continue;
    for (int b = 0; b < count(); ++b) {
      if (degree_[a] + degree_[b] > order_) continue;
      std::array<std::uint8_t, kMaxDim> sum{};
      for (int k = 0; k < dim_; ++k)
        sum[k] = static_cast<std::uint8_t>(exponents_[a][k] + exponents_[b][k]);
      mul_terms_.push_back({a, b, index_of(sum)});
    }
  }
  std::sort(mul_terms_.begin(), mul_terms_.end(),
            [](const MulTerm& x, const MulTerm& y) { return x.dst < y.dst; });
}

std::uint64_t JetLayout::pack(const std::array<std::uint8_t, kMaxDim>& e) {
  std::uint64_t key = 0;
  for (int a = 0; a < kMaxDim; ++a) key |= static_cast<std::uint64_t>(e[a]) << (8 * a);
  return key;
}

int JetLayout::index_of(const std::array<std::uint8_t, kMaxDim>& exps) const {
  const auto it = position_.find(pack(exps));
  return it == position_.end() ? -1 : it->second;
}

int JetLayout::count_at_order(int ord) const {
  if (ord < 0) return 0;
  if (ord >= order_) return count();
  return degree_begin_[ord + 1];
}

std::shared_ptr<const JetLayout> JetLayout::get(int dim, int order) {
  require(dim >= 1 && dim <= kMaxDim, "jet layout: dimension out of range");
  require(order >= 0 && order <= kMaxOrder, "jet layout: order out of range");
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const JetLayout>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{dim, order}];
  if (!slot) slot = std::shared_ptr<const JetLayout>(new JetLayout(dim, order));
  return slot;
}

}  // namespace ricciforge
