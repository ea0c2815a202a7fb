// SPDX-License-Identifier: MIT
#include <doctest.h>

#include <array>
#include <cmath>

#include "ricciforge/chart_samples.hpp"
#include "ricciforge/jet_tensor.hpp"

using namespace ricciforge;

TEST_SUITE_BEGIN("jet");

TEST_CASE("polynomial identity (1+x1)(1-x1) = 1 - x1^2") {
  const Jet x = Jet::coordinate(2, 2, 0);
  Jet a = x;
  a[0] += 1.0;
  Jet b = -x;
  b[0] += 1.0;
  const Jet p = a * b;
  // expected coefficients: 1, 0, 0, -1 (x1^2), 0 (x1 x2), 0 (x2^2)
  CHECK(p[0] == doctest::Approx(1.0));
  const std::array<std::uint8_t, JetLayout::kMaxDim> x1sq{2, 0, 0, 0, 0, 0};
  CHECK(p[p.layout().index_of(x1sq)] == doctest::Approx(-1.0));
  double sum_abs = 0.0;
  for (int i = 0; i < p.size(); ++i) sum_abs += std::abs(p[i]);
  CHECK(sum_abs == doctest::Approx(2.0));
}

TEST_CASE("zero is absorbing") {
  CounterRng rng(3);
  Jet j(JetLayout::get(3, 4));
  for (int i = 0; i < j.size(); ++i) j[i] = rng.symmetric();
  const Jet z(JetLayout::get(3, 4));
  const Jet p = j * z;
  for (int i = 0; i < p.size(); ++i) CHECK(p[i] == 0.0);
}

TEST_CASE("dimension/order mismatch is a structured error") {
  const Jet a = Jet::constant(2, 3, 1.0);
  const Jet b = Jet::constant(2, 4, 1.0);
  const Jet c = Jet::constant(3, 3, 1.0);
  CHECK_THROWS_AS(a * b, Error);
  CHECK_THROWS_AS(a + c, Error);
}

// Oracle: truncated products agree with products of evaluations to O(t^{k+1}),
// measured by the decay rate of the remainder across shrinking offsets.
TEST_CASE("truncated product remainder decays at order k+1") {
  const int order = 4;
  CounterRng rng(17);
  Jet a(JetLayout::get(2, order)), b(JetLayout::get(2, order));
  for (int i = 0; i < a.size(); ++i) {
    a[i] = rng.symmetric();
    b[i] = rng.symmetric();
  }
  const Jet p = a * b;
  const std::array<double, 2> dir{0.7, -0.4};
  std::vector<double> errs;
  for (int j = 0; j < 5; ++j) {
    const double t = 0.5 * std::pow(0.5, j);
    const std::array<double, 2> off{t * dir[0], t * dir[1]};
    const double lhs = p.evaluate(off);
    const double rhs = a.evaluate(off) * b.evaluate(off);
    errs.push_back(std::abs(lhs - rhs));
  }
  // log2 slope between successive halvings should approach k+1 = 5
  for (std::size_t j = 0; j + 1 < errs.size(); ++j) {
    const double slope = std::log2(errs[j] / errs[j + 1]);
    CHECK(slope > 4.5);
    CHECK(slope < 5.5);
  }
}

TEST_CASE("derivative and composition match closed forms") {
  // d/dx1 of cos(x1) at order 6 equals -sin(x1) at order 5
  const Jet c = cos(Jet::coordinate(2, 6, 0));
  const Jet mds = -sin(Jet::coordinate(2, 5, 0));
  const Jet d = c.derivative(0);
  for (int i = 0; i < d.size(); ++i) CHECK(d[i] == doctest::Approx(mds[i]).epsilon(1e-14));
}

TEST_CASE("metric inverse: identity and geometric series") {
  // g = delta
  const JetTensor<double> id = charts::flat_metric(3, 4);
  const JetTensor<double> inv = jet_metric_inverse(id);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int c = 0; c < inv.at(i, j).size(); ++c)
        CHECK(inv.at(i, j)[c] == doctest::Approx(i == j && c == 0 ? 1.0 : 0.0));

  // g = (1 + x1) delta in n=2 at order 3: inverse is (1 - x1 + x1^2 - x1^3) delta
  JetTensor<double> g(2, 2, 3);
  Jet f = Jet::coordinate(2, 3, 0);
  f[0] += 1.0;
  for (int i = 0; i < 2; ++i) g.at(i, i) = f;
  const JetTensor<double> gi = jet_metric_inverse(g);
  const Jet expected = recip(f);
  for (int c = 0; c < expected.size(); ++c)
    CHECK(gi.at(0, 0)[c] == doctest::Approx(expected[c]).epsilon(1e-14));
  // and the closed geometric series 1 - x1 + x1^2 - x1^3
  std::array<std::uint8_t, JetLayout::kMaxDim> e{};
  for (int p = 0; p <= 3; ++p) {
    e[0] = static_cast<std::uint8_t>(p);
    CHECK(gi.at(0, 0)[gi.at(0, 0).layout().index_of(e)] ==
          doctest::Approx(p % 2 ? -1.0 : 1.0));
  }
}

TEST_CASE("metric inverse: random jets multiply back to the identity") {
  CounterRng rng(11);
  const JetTensor<double> g = charts::random_metric(3, 5, rng);
  const JetTensor<double> gi = jet_metric_inverse(g);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Jet s(JetLayout::get(3, 5));
      for (int k = 0; k < 3; ++k) s += g.at(i, k) * gi.at(k, j);
      if (i == j) s[0] -= 1.0;
      CHECK(s.sup_norm() < 1e-13);
    }
}

TEST_CASE("degenerate metric at base point is rejected") {
  JetTensor<double> g(2, 2, 3);  // zero matrix
  CHECK_THROWS_WITH_AS(jet_metric_inverse(g), "degenerate metric at base point", Error);
}

TEST_CASE("truncation order consistency across composite expressions") {
  // recomputing at order k+2 and truncating to k reproduces order-k results
  const int k = 4;
  CounterRng rng_a(29), rng_b(29);
  const JetTensor<double> g_hi = charts::random_metric(2, k + 2, rng_a);
  const JetTensor<double> g_lo_direct = charts::random_metric(2, k, rng_b);
  // same random stream, so truncation of g_hi equals g_lo_direct on shared coefficients
  const JetTensor<double> g_lo = g_hi.truncated(k);
  // composite: metric inverse
  const JetTensor<double> hi = jet_metric_inverse(g_hi).truncated(k);
  const JetTensor<double> lo = jet_metric_inverse(g_lo);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      double scale = std::max(1.0, lo.at(i, j).sup_norm());
      for (int c = 0; c < lo.at(i, j).size(); ++c)
        CHECK(std::abs(hi.at(i, j)[c] - lo.at(i, j)[c]) / scale < 1e-12);
    }
}

TEST_CASE("dual coefficients differentiate a product pipeline") {
  // d/dt [(a + t b)^2] = 2 (a + t b) b at t = 0
  CounterRng rng(5);
  Jet a(JetLayout::get(2, 4)), b(JetLayout::get(2, 4));
  for (int i = 0; i < a.size(); ++i) {
    a[i] = rng.symmetric();
    b[i] = rng.symmetric();
  }
  DualJet ad(JetLayout::get(2, 4));
  for (int i = 0; i < a.size(); ++i) ad[i] = Dual{a[i], b[i]};
  const DualJet sq = ad * ad;
  const Jet expected = (a * b) * 2.0;
  for (int i = 0; i < sq.size(); ++i)
    CHECK(sq[i].d == doctest::Approx(expected[i]).epsilon(1e-13));
}

TEST_SUITE_END();
