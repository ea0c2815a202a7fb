// SPDX-License-Identifier: MIT
#include <doctest.h>

#include <cmath>

#include "ricciforge/bounds.hpp"

using namespace ricciforge;

TEST_SUITE_BEGIN("bounds");

TEST_CASE("constant curvature: extrema collapse to K and the bound is tight") {
  for (const int n : {2, 3, 4}) {
    const PointCurvatureData data = constant_curvature_data(n, 1.0);
    const auto [kmin, kmax] = sectional_extrema(data, ExtremaMethod::EigenBound);
    CHECK(kmin == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(kmax == doctest::Approx(1.0).epsilon(1e-12));
    const auto [smin, smax] = sectional_extrema(data, ExtremaMethod::GridSearch, 2000);
    CHECK(smin == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(smax == doctest::Approx(1.0).epsilon(1e-10));

    const FujitaniReport rep = fujitani_check(data);
    CHECK(rep.exact_min == doctest::Approx(static_cast<double>(n)).epsilon(1e-12));
    CHECK(rep.bound == doctest::Approx(static_cast<double>(n)).epsilon(1e-12));
    CHECK(std::abs(rep.margin) < 1e-10);
  }
  // flat: minimum and bound are both zero
  const PointCurvatureData flat = constant_curvature_data(3, 0.0);
  const FujitaniReport rep = fujitani_check(flat);
  CHECK(std::abs(rep.exact_min) < 1e-14);
  CHECK(std::abs(rep.bound) < 1e-14);
  const auto [fk0, fk1] = sectional_extrema(flat, ExtremaMethod::GridSearch, 500);
  CHECK(std::abs(fk0) < 1e-14);
  CHECK(std::abs(fk1) < 1e-14);
}

TEST_CASE("product of two sphere blocks: K_min = 0 on mixed planes, K_max = 2") {
  const PointCurvatureData data = product_curvature_data({{2, 1.0}, {2, 2.0}});
  // oracle: exhaustive coordinate planes plus random sampling inside GridSearch
  const auto [kmin, kmax] = sectional_extrema(data, ExtremaMethod::GridSearch, 20000, 5);
  CHECK(kmin == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(std::abs(kmax - 2.0) < 1e-6);
  // eigen brackets contain the sampled extrema
  const auto [bmin, bmax] = sectional_extrema(data, ExtremaMethod::EigenBound);
  CHECK(bmin <= kmin + 1e-12);
  CHECK(bmax >= kmax - 1e-12);
  // Ricci of the product: block curvatures (n_b - 1) K_b = 1 and 2
  CHECK(data.ric(0, 0) == doctest::Approx(1.0));
  CHECK(data.ric(2, 2) == doctest::Approx(2.0));
}

TEST_CASE("random algebraic curvature: the bound holds for every sample") {
  for (const int n : {3, 4}) {
    for (int s = 0; s < 25; ++s) {
      CounterRng rng(2024, 100 * n + s);
      const Tensor4Value riem = random_algebraic_curvature(n, rng);
      const PointCurvatureData data =
          PointCurvatureData::from_riemann(SymMatrixValue::identity(n), riem);
      const FujitaniReport rep = fujitani_check(data);
      CHECK(rep.pass);
      CHECK(rep.exact_min >= rep.bound - 1e-10);
    }
  }
}

TEST_CASE("derived Ricci matches the (1,3)-trace invariant") {
  CounterRng rng(7);
  const Tensor4Value riem = random_algebraic_curvature(3, rng);
  const SymMatrixValue g = SymMatrixValue::identity(3);
  const PointCurvatureData data = PointCurvatureData::from_riemann(g, riem);
  for (int b = 0; b < 3; ++b)
    for (int d = 0; d < 3; ++d) {
      double s = 0.0;
      for (int a = 0; a < 3; ++a) s += riem(a, b, a, d);
      CHECK(data.ric(b, d) == doctest::Approx(s).epsilon(1e-11));
    }
}

TEST_CASE("tensors without curvature symmetries are rejected") {
  Tensor4Value bad(3);
  bad(0, 0, 0, 0) = 1.0;  // violates antisymmetry
  CHECK_THROWS_AS(PointCurvatureData::from_riemann(SymMatrixValue::identity(3), bad), Error);
}

TEST_SUITE_END();
