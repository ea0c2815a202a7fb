// SPDX-License-Identifier: MIT
#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "ricciforge/chart_ops.hpp"
#include "ricciforge/chart_samples.hpp"

using namespace ricciforge;

namespace {

// ---------------------------------------------------------------------------
// Finite-difference oracle on closed-form metrics: Richardson-extrapolated
// central differences feed the same curvature formulas through a fully
// independent plain-double code path.
// ---------------------------------------------------------------------------

using MetricFn = std::function<double(int, int, const std::vector<double>&)>;

double richardson_d1(const std::function<double(double)>& f, double h0 = 0.1, int levels = 6) {
  std::vector<double> row(levels);
  for (int j = 0; j < levels; ++j) {
    const double h = h0 / std::pow(2.0, j);
    row[j] = (f(h) - f(-h)) / (2.0 * h);
  }
  for (int m = 1; m < levels; ++m)
    for (int j = levels - 1; j >= m; --j)
      row[j] = (std::pow(4.0, m) * row[j] - row[j - 1]) / (std::pow(4.0, m) - 1.0);
  return row[levels - 1];
}

double fd_dg(const MetricFn& g, int a, int i, int j, std::vector<double> x) {
  return richardson_d1([&](double h) {
    std::vector<double> y = x;
    y[a] += h;
    return g(i, j, y);
  });
}

struct FdGeometry {
  int n;
  std::vector<double> g, gi;          // n*n
  std::vector<double> gamma;          // n*n*n: [k][i][j]
  std::vector<double> dgamma;         // n*n*n*n: [a][k][i][j]
  std::vector<double> ric;            // n*n

  double& G(int k, int i, int j) { return gamma[(k * n + i) * n + j]; }
  double& dG(int a, int k, int i, int j) { return dgamma[((a * n + k) * n + i) * n + j]; }
};

std::vector<double> invert_dense(const std::vector<double>& m, int n) {
  std::vector<double> inv(n * n, 0.0), a = m;
  for (int i = 0; i < n; ++i) inv[i * n + i] = 1.0;
  for (int c = 0; c < n; ++c) {
    const double p = a[c * n + c];
    for (int j = 0; j < n; ++j) {
      a[c * n + j] /= p;
      inv[c * n + j] /= p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[r * n + c];
      for (int j = 0; j < n; ++j) {
        a[r * n + j] -= f * a[c * n + j];
        inv[r * n + j] -= f * inv[c * n + j];
      }
    }
  }
  return inv;
}

std::vector<double> fd_christoffel(const MetricFn& g, int n, const std::vector<double>& x) {
  std::vector<double> gv(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) gv[i * n + j] = g(i, j, x);
  const std::vector<double> gi = invert_dense(gv, n);
  std::vector<double> gamma(n * n * n, 0.0);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l)
          s += gi[k * n + l] *
               (fd_dg(g, i, j, l, x) + fd_dg(g, j, i, l, x) - fd_dg(g, l, i, j, x));
        gamma[(k * n + i) * n + j] = 0.5 * s;
      }
  return gamma;
}

FdGeometry fd_geometry(const MetricFn& g, int n, const std::vector<double>& x) {
  FdGeometry out;
  out.n = n;
  out.g.resize(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.g[i * n + j] = g(i, j, x);
  out.gi = invert_dense(out.g, n);
  out.gamma = fd_christoffel(g, n, x);
  out.dgamma.assign(n * n * n * n, 0.0);
  for (int a = 0; a < n; ++a) {
    // Richardson on each Christoffel entry
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          out.dG(a, k, i, j) = richardson_d1([&](double h) {
            std::vector<double> y = x;
            y[a] += h;
            return fd_christoffel(g, n, y)[(k * n + i) * n + j];
          }, 0.05, 5);
        }
  }
  out.ric.assign(n * n, 0.0);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) {
        s += out.dG(i, i, j, k) - out.dG(j, i, i, k);
        for (int m = 0; m < n; ++m)
          s += out.G(i, i, m) * out.G(m, j, k) - out.G(i, j, m) * out.G(m, i, k);
      }
      out.ric[k * n + j] = s;
    }
  return out;
}

}  // namespace

TEST_SUITE_BEGIN("chart_geometry");

TEST_CASE("flat chart: zero connection and curvature") {
  const auto geom = build_geometry(charts::flat_metric(3, 6));
  CHECK(geom.gamma.sup_norm_all_coefficients() == 0.0);
  CHECK(geom.riem.sup_norm_all_coefficients() == 0.0);
  CHECK(geom.ric.sup_norm_all_coefficients() == 0.0);
}

TEST_CASE("christoffel pins: e^{2 x1} delta in n=2") {
  const auto g = charts::exponential_metric(2, 6);
  const auto gam = christoffel(g, jet_metric_inverse(g));
  CHECK(gam.at(0, 0, 0).value() == doctest::Approx(1.0));
  CHECK(gam.at(0, 1, 1).value() == doctest::Approx(-1.0));
  CHECK(gam.at(1, 0, 1).value() == doctest::Approx(1.0));
  // symmetry in the lower pair holds for random jets too
  CounterRng rng(3);
  const auto gr = charts::random_metric(3, 5, rng);
  const auto gmr = christoffel(gr, jet_metric_inverse(gr));
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        Jet diff = gmr.at(k, i, j) - gmr.at(k, j, i);
        CHECK(diff.sup_norm() == 0.0);
      }
}

TEST_CASE("christoffel pre: order must allow one derivative") {
  const auto g = charts::flat_metric(2, 0);
  CHECK_THROWS_AS(christoffel(g, g), Error);
}

TEST_CASE("sphere chart: Ric(0) = g(0) = 4 delta, R = 2; matches FD oracle") {
  const auto geom = build_geometry(charts::sphere_metric(2, 6));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(geom.ric.at(i, j).value() == doctest::Approx(i == j ? 4.0 : 0.0).epsilon(1e-12));
  CHECK(geom.scal.value() == doctest::Approx(2.0).epsilon(1e-12));

  const MetricFn sphere = [](int i, int j, const std::vector<double>& x) {
    if (i != j) return 0.0;
    double s = 0.0;
    for (const double c : x) s += c * c;
    return 4.0 / ((1.0 + s) * (1.0 + s));
  };
  // FD oracle evaluated away from the origin; jet engine recentered there
  const std::vector<double> x0{0.21, -0.13};
  FdGeometry fd = fd_geometry(sphere, 2, x0);
  // jets centered at x0: substitute y = x - x0 into the closed form
  Jet s = Jet::constant(2, 6, 0.0);
  for (int a = 0; a < 2; ++a) {
    const Jet xa = Jet::coordinate(2, 6, a, x0[a]);
    s += xa * xa;
  }
  Jet q = s;
  q[0] += 1.0;
  const Jet f = recip(q * q) * 4.0;
  JetTensor<double> gjet(2, 2, 6);
  for (int i = 0; i < 2; ++i) gjet.at(i, i) = f;
  const auto jet_geom = build_geometry(gjet);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(jet_geom.ric.at(i, j).value() ==
            doctest::Approx(fd.ric[i * 2 + j]).epsilon(1e-9));
}

TEST_CASE("hyperbolic chart n=3: Ric(0) = -2 g(0)") {
  const auto geom = build_geometry(charts::hyperbolic_metric(3, 6));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(geom.ric.at(i, j).value() == doctest::Approx(i == j ? -8.0 : 0.0).epsilon(1e-12));
}

TEST_CASE("riemann jets satisfy the algebraic-curvature symmetries") {
  CounterRng rng(7);
  const auto geom = build_geometry(charts::random_metric(3, 5, rng));
  const auto& r = geom.riem;
  double worst = 0.0;
  const double scale = std::max(r.sup_norm_at_base(), 1e-30);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          const double t = r.at(i, j, k, l).value();
          worst = std::max(worst, std::abs(t + r.at(j, i, k, l).value()));
          worst = std::max(worst, std::abs(t + r.at(i, j, l, k).value()));
          worst = std::max(worst, std::abs(t - r.at(k, l, i, j).value()));
          worst = std::max(worst,
                           std::abs(t + r.at(i, k, l, j).value() + r.at(i, l, j, k).value()));
        }
  CHECK(worst / scale < 1e-12);
}

TEST_CASE("covariant derivative: metric compatibility and Leibniz") {
  CounterRng rng(9);
  const auto g = charts::random_metric(3, 5, rng);
  const auto geom = build_geometry(g);
  // nabla g = 0
  const auto dg = covariant_derivative(geom.g, geom);
  CHECK(dg.sup_norm_all_coefficients() < 1e-12 * g.sup_norm_all_coefficients());

  // nabla(f g) = df tensor g for a scalar jet f
  Jet f(JetLayout::get(3, 5));
  for (int i = 0; i < f.size(); ++i) f[i] = rng.symmetric();
  JetTensor<double> fg(3, 2, 5);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) fg.at(i, j) = f * g.at(i, j);
  const auto dfg = covariant_derivative(fg, geom);
  const auto df = differential(f);
  const int w = dfg.order();
  double worst = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        Jet expect = df.at(a).truncated(w) * g.at(i, j).truncated(w);
        Jet diff = dfg.at(a, i, j) - expect;
        worst = std::max(worst, diff.sup_norm());
      }
  CHECK(worst < 1e-12 * fg.sup_norm_all_coefficients());

  // flat chart: covariant derivative reduces to the coordinate derivative
  const auto flat = build_geometry(charts::flat_metric(3, 5));
  const auto u = charts::random_sym2(3, 5, rng);
  const auto du = covariant_derivative(u, flat);
  for (int a = 0; a < 3; ++a)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        Jet diff = du.at(a, i, j) - u.at(i, j).derivative(a);
        CHECK(diff.sup_norm() == 0.0);
      }
}

TEST_CASE("rough laplacian: sign anchor and FD oracle on the sphere chart") {
  const auto flat = build_geometry(charts::flat_metric(2, 6));
  JetTensor<double> f(2, 0, 6);
  f.at() = cos(Jet::coordinate(2, 6, 0));
  const auto lap = rough_laplacian(f, flat);
  CHECK(lap.at().value() == doctest::Approx(1.0));  // Delta cos(x1) = +cos(x1) at 0

  // constant tensor on a flat chart
  JetTensor<double> c(2, 2, 6);
  c.at(0, 0)[0] = 3.0;
  c.at(1, 1)[0] = -2.0;
  CHECK(rough_laplacian(c, flat).sup_norm_all_coefficients() == 0.0);

  // sphere chart, f = x1: Delta f = g^{ij} Gamma^1_{ij} via the FD oracle
  const auto geom = build_geometry(charts::sphere_metric(2, 6));
  JetTensor<double> x1(2, 0, 6);
  x1.at() = Jet::coordinate(2, 6, 0);
  const auto lap_sphere = rough_laplacian(x1, geom);
  const MetricFn sphere = [](int i, int j, const std::vector<double>& x) {
    if (i != j) return 0.0;
    double s = 0.0;
    for (const double c2 : x) s += c2 * c2;
    return 4.0 / ((1.0 + s) * (1.0 + s));
  };
  const std::vector<double> x0{0.0, 0.0};
  FdGeometry fd = fd_geometry(sphere, 2, x0);
  double expect = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) expect += fd.gi[i * 2 + j] * fd.G(0, i, j);
  CHECK(lap_sphere.at().value() == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("truncation consistency of the full curvature pipeline") {
  // curvature computed at order k+2 and truncated to the order of the k-run
  // reproduces it coefficientwise
  const int k = 4;
  CounterRng rng(61);
  const auto g_hi = charts::random_metric(3, k + 2, rng);
  const auto geom_hi = build_geometry(g_hi);
  const auto geom_lo = build_geometry(g_hi.truncated(k));
  const auto ric_hi = geom_hi.ric.truncated(k - 2);
  const auto& ric_lo = geom_lo.ric;
  const double scale = std::max(1.0, ric_lo.sup_norm_all_coefficients());
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int c = 0; c < ric_lo.at(i, j).size(); ++c)
        CHECK(std::abs(ric_hi.at(i, j)[c] - ric_lo.at(i, j)[c]) / scale < 1e-12);
}

TEST_CASE("order budget exhaustion raises structured errors") {
  const auto g = charts::flat_metric(2, 2);
  const auto geom = build_geometry(g);
  JetTensor<double> u(2, 2, 1);
  CHECK_THROWS_AS(rough_laplacian(u, geom), Error);
}

TEST_SUITE_END();
