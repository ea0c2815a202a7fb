// SPDX-License-Identifier: MIT
#include "ricciforge/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "ricciforge/linalg.hpp"

namespace ricciforge {

namespace {

/// Orthonormal frame columns E with E^T g E = I (from the Cholesky factor).
std::vector<double> orthonormal_frame(const SymMatrixValue& g) {
  const int n = g.dim();
  std::vector<double> l = g.full();
  require(linalg::cholesky(l, n), "curvature data: metric not positive definite");
  // frame = L^{-T}: solve L^T X = I column by column
  std::vector<double> frame(static_cast<std::size_t>(n) * n, 0.0);
  for (int col = 0; col < n; ++col) {
    std::vector<double> x(n, 0.0);
    x[col] = 1.0;
    linalg::solve_lower_transposed(l, n, x);
    for (int i = 0; i < n; ++i) frame[static_cast<std::size_t>(i) * n + col] = x[i];
  }
  return frame;
}

/// Curvature tensor in an orthonormal frame (so g = delta afterwards).
Tensor4Value to_frame(const Tensor4Value& riem, const std::vector<double>& frame, int n) {
  Tensor4Value out(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double s = 0.0;
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                  s += riem(i, j, k, l) * frame[static_cast<std::size_t>(i) * n + a] *
                       frame[static_cast<std::size_t>(j) * n + b] *
                       frame[static_cast<std::size_t>(k) * n + c] *
                       frame[static_cast<std::size_t>(l) * n + d];
          out(a, b, c, d) = s;
        }
  return out;
}

/// Curvature operator on Lambda^2 in an orthonormal frame; pairs (i<j).
std::vector<double> curvature_operator(const Tensor4Value& r, int n, int* pairs_out) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  const int m = static_cast<int>(pairs.size());
  std::vector<double> op(static_cast<std::size_t>(m) * m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      op[static_cast<std::size_t>(a) * m + b] =
          r(pairs[a].first, pairs[a].second, pairs[b].first, pairs[b].second);
  *pairs_out = m;
  return op;
}

}  // namespace

PointCurvatureData PointCurvatureData::from_riemann(const SymMatrixValue& g,
                                                    const Tensor4Value& riem) {
  const int n = g.dim();
  require(n >= 2 && n <= 4, "curvature data: dim must be in {2,3,4}");
  require(riem.dim() == n, "curvature data: dimension mismatch");
  require(riem.curvature_symmetry_violation() < 1e-10,
          "curvature data: tensor fails the algebraic-curvature symmetries");

  PointCurvatureData data;
  data.dim = n;
  data.g = g;
  data.riem = riem;

  // Ric_{bd} = g^{ac} Riem_{abcd} — the (1,3) trace.
  std::vector<double> gi;
  require(linalg::invert(g.full(), n, gi), "curvature data: singular metric");
  data.ric = SymMatrixValue(n);
  for (int b = 0; b < n; ++b)
    for (int d = b; d < n; ++d) {
      double s = 0.0;
      for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c) s += gi[static_cast<std::size_t>(a) * n + c] * riem(a, b, c, d);
      data.ric(b, d) = s;
    }

  data.ric_min = sym2_min_eigenvalue(data.ric, g);

  const auto frame = orthonormal_frame(g);
  const Tensor4Value rf = to_frame(riem, frame, n);
  int m = 0;
  const auto op = curvature_operator(rf, n, &m);
  std::vector<double> evals;
  linalg::jacobi_eigen(op, m, evals, nullptr);
  data.k_min_bound = evals.front();
  data.k_max_bound = evals.back();
  return data;
}

double sectional_curvature(const PointCurvatureData& data, const std::vector<double>& u,
                           const std::vector<double>& v) {
  const int n = data.dim;
  double ruvuv = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) ruvuv += data.riem(i, j, k, l) * u[i] * v[j] * u[k] * v[l];
  double uu = 0.0, vv = 0.0, uv = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      uu += data.g(i, j) * u[i] * u[j];
      vv += data.g(i, j) * v[i] * v[j];
      uv += data.g(i, j) * u[i] * v[j];
    }
  const double denom = uu * vv - uv * uv;
  require(denom > 1e-14, "sectional curvature: degenerate plane");
  return ruvuv / denom;
}

std::pair<double, double> sectional_extrema(const PointCurvatureData& data, ExtremaMethod method,
                                            int planes, std::uint64_t seed) {
  if (method == ExtremaMethod::EigenBound) return {data.k_min_bound, data.k_max_bound};

  const int n = data.dim;
  CounterRng rng(seed, 7001);
  double k_min = std::numeric_limits<double>::infinity();
  double k_max = -k_min;
  std::vector<double> best_min_u, best_min_v, best_max_u, best_max_v;

  auto g_dot = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += data.g(i, j) * a[i] * b[j];
    return s;
  };
  // Gram-Schmidt keeps the plane but makes the denominator O(1), so the
  // curvature ratio never amplifies roundoff near degenerate samples.
  auto consider = [&](std::vector<double> u, std::vector<double> v) {
    const double nu = std::sqrt(g_dot(u, u));
    if (nu < 1e-8) return;
    for (int i = 0; i < n; ++i) u[i] /= nu;
    const double uv = g_dot(u, v);
    for (int i = 0; i < n; ++i) v[i] -= uv * u[i];
    const double nv = std::sqrt(g_dot(v, v));
    if (nv < 1e-6) return;
    for (int i = 0; i < n; ++i) v[i] /= nv;
    const double k = sectional_curvature(data, u, v);
    if (k < k_min) {
      k_min = k;
      best_min_u = u;
      best_min_v = v;
    }
    if (k > k_max) {
      k_max = k;
      best_max_u = u;
      best_max_v = v;
    }
  };

  // structured frames: coordinate planes and Ricci eigenvector planes
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      std::vector<double> u(n, 0.0), v(n, 0.0);
      u[i] = 1.0;
      v[j] = 1.0;
      consider(u, v);
    }
  {
    const GeneralizedEigen eig = sym2_eigen(data.ric, data.g);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        std::vector<double> u(n), v(n);
        for (int r = 0; r < n; ++r) {
          u[r] = eig.eigenvectors[static_cast<std::size_t>(r) * n + i];
          v[r] = eig.eigenvectors[static_cast<std::size_t>(r) * n + j];
        }
        consider(u, v);
      }
  }
  // random sampling
  for (int s = 0; s < planes; ++s) {
    std::vector<double> u(n), v(n);
    for (int i = 0; i < n; ++i) {
      u[i] = rng.normal();
      v[i] = rng.normal();
    }
    consider(u, v);
  }
  // local refinement of both extremal candidates with a shrinking step
  auto refine = [&](std::vector<double> u, std::vector<double> v) {
    double step = 0.3;
    for (int round = 0; round < 200; ++round) {
      std::vector<double> up(n), vp(n);
      for (int i = 0; i < n; ++i) {
        up[i] = u[i] + step * rng.normal();
        vp[i] = v[i] + step * rng.normal();
      }
      consider(up, vp);
      step *= 0.97;
    }
  };
  if (!best_min_u.empty()) refine(best_min_u, best_min_v);
  if (!best_max_u.empty()) refine(best_max_u, best_max_v);

  return {k_min, k_max};
}

FujitaniReport fujitani_check(const PointCurvatureData& data) {
  const int n = data.dim;
  const auto frame = orthonormal_frame(data.g);
  const Tensor4Value rf = to_frame(data.riem, frame, n);

  // Ricci in the frame.
  SymMatrixValue ric(n);
  for (int b = 0; b < n; ++b)
    for (int d = b; d < n; ++d) {
      double s = 0.0;
      for (int a = 0; a < n; ++a) s += rf(a, b, a, d);
      ric(b, d) = s;
    }

  // Orthonormal basis of trace-free symmetric matrices in the frame:
  // off-diagonal pairs (i<j) scaled by 1/sqrt2, plus n-1 diagonal combinations.
  std::vector<SymMatrixValue> basis;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      SymMatrixValue e(n);
      e(i, j) = 1.0 / std::sqrt(2.0);
      basis.push_back(e);
    }
  for (int m = 1; m < n; ++m) {
    // diag(1,...,1,-m,0,...)/sqrt(m(m+1)) with m ones
    SymMatrixValue e(n);
    const double norm = std::sqrt(static_cast<double>(m) * (m + 1));
    for (int i = 0; i < m; ++i) e(i, i) = 1.0 / norm;
    e(m, m) = -static_cast<double>(m) / norm;
    basis.push_back(e);
  }

  auto action = [&](const SymMatrixValue& u) {
    SymMatrixValue out(n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += 0.5 * (ric(i, k) * u(k, j) + ric(j, k) * u(k, i));
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) s -= rf(i, k, j, l) * u(k, l);
        out(i, j) = s;
      }
    return out;
  };
  auto dot = [&](const SymMatrixValue& a, const SymMatrixValue& b) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += a(i, j) * b(i, j);
    return s;
  };

  const int m = static_cast<int>(basis.size());
  std::vector<double> op(static_cast<std::size_t>(m) * m);
  for (int a = 0; a < m; ++a) {
    const SymMatrixValue img = action(basis[a]);
    for (int b = 0; b < m; ++b) op[static_cast<std::size_t>(b) * m + a] = dot(img, basis[b]);
  }
  // symmetrize away roundoff
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) {
      const double s = 0.5 * (op[static_cast<std::size_t>(a) * m + b] +
                              op[static_cast<std::size_t>(b) * m + a]);
      op[static_cast<std::size_t>(a) * m + b] = op[static_cast<std::size_t>(b) * m + a] = s;
    }

  std::vector<double> evals;
  linalg::jacobi_eigen(op, m, evals, nullptr);

  FujitaniReport report;
  report.ric_min = data.ric_min;
  report.k_min = data.k_min_bound;
  report.k_max = data.k_max_bound;
  report.bound = std::min(2.0 * report.ric_min - (n - 2.0) * report.k_max,
                          n * report.k_min);
  report.exact_min = evals.front();
  report.margin = report.exact_min - report.bound;
  report.pass = report.exact_min >= report.bound - 1e-10;
  if (!report.pass)
    fail("eigenvalue bound violated (exact " + std::to_string(report.exact_min) + " < bound " +
         std::to_string(report.bound) + "); check curvature conventions");
  return report;
}

PointCurvatureData constant_curvature_data(int dim, double curvature) {
  const SymMatrixValue g = SymMatrixValue::identity(dim);
  return PointCurvatureData::from_riemann(g, constant_curvature_tensor(g, curvature));
}

PointCurvatureData product_curvature_data(const std::vector<std::pair<int, double>>& blocks) {
  int n = 0;
  for (const auto& b : blocks) n += b.first;
  SymMatrixValue g = SymMatrixValue::identity(n);
  Tensor4Value riem(n);
  int offset = 0;
  for (const auto& b : blocks) {
    SymMatrixValue gb(n);  // indicator metric of the block inside the big space
    for (int i = 0; i < b.first; ++i) gb(offset + i, offset + i) = 1.0;
    Tensor4Value kn = kulkarni_nomizu(gb, gb);
    kn.scale(0.5 * b.second);
    riem += kn;
    offset += b.first;
  }
  return PointCurvatureData::from_riemann(g, riem);
}

}  // namespace ricciforge
