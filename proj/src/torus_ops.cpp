// SPDX-License-Identifier: MIT
#include "ricciforge/torus_ops.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "ricciforge/linalg.hpp"
#include "ricciforge/parallel.hpp"
#include "ricciforge/rng.hpp"

namespace ricciforge {

namespace {

/// Closed-form symmetric inverse for n = 2, 3 (packed storage).
void sym_inverse_node(int n, const double* in, double* out) {
  if (n == 2) {
    const double a = in[0], b = in[1], c = in[2];  // 11, 12, 22
    const double det = a * c - b * b;
    out[0] = c / det;
    out[1] = -b / det;
    out[2] = a / det;
  } else {
    const double a = in[0], b = in[1], c = in[2];  // 11 12 13
    const double d = in[3], e = in[4];             // 22 23
    const double f = in[5];                        // 33
    const double A = d * f - e * e;
    const double B = c * e - b * f;
    const double C = b * e - c * d;
    const double det = a * A + b * B + c * C;
    out[0] = A / det;
    out[1] = B / det;
    out[2] = C / det;
    out[3] = (a * f - c * c) / det;
    out[4] = (b * c - a * e) / det;
    out[5] = (a * d - b * b) / det;
  }
}

double sym_min_eigenvalue_node(int n, const double* packed) {
  if (n == 2) {
    const double a = packed[0], b = packed[1], c = packed[2];
    const double tr = a + c;
    const double disc = std::sqrt(std::max(0.0, (a - c) * (a - c) + 4.0 * b * b));
    return 0.5 * (tr - disc);
  }
  std::vector<double> full(9);
  full[0] = packed[0];
  full[1] = full[3] = packed[1];
  full[2] = full[6] = packed[2];
  full[4] = packed[3];
  full[5] = full[7] = packed[4];
  full[8] = packed[5];
  return linalg::min_eigenvalue(full, 3);
}

}  // namespace

GridGeometry flat_geometry(const TorusGrid& grid) {
  GridGeometry geom;
  geom.grid = grid;
  geom.metric = Sym2Field::identity(grid);
  geom.metric_inv = geom.metric;
  const int n = grid.dim;
  const int d = sym2_count(n);
  geom.christoffel.assign(static_cast<std::size_t>(n) * d * grid.nodes(), 0.0);
  geom.flat = true;
  geom.has_curvature = true;
  geom.riem.assign(static_cast<std::size_t>(n) * n * n * n * grid.nodes(), 0.0);
  geom.ricci = Sym2Field(grid);
  geom.scalar = ScalarField(grid);
  return geom;
}

GridGeometry build_grid_geometry(const Sym2Field& metric, bool with_riemann) {
  const TorusGrid grid = metric.grid;
  const int n = grid.dim;
  const int d = sym2_count(n);
  const std::size_t nodes = grid.nodes();
  require(metric.finite(), "grid geometry: non-finite metric values");
  for (int c = 0; c < metric.comps; ++c) {
    const double frac = tail_energy_fraction(grid, metric.comp(c));
    if (frac > 1e-8) {
      std::fprintf(stderr,
                   "ricciforge: warning: metric component %d poorly resolved "
                   "(tail energy fraction %.3e)\n",
                   c, frac);
      break;
    }
  }

  GridGeometry geom;
  geom.grid = grid;
  geom.metric = metric;
  geom.metric_inv = Sym2Field(grid);

  // Pointwise inverse, guarded by the positivity basin.
  for (std::size_t node = 0; node < nodes; ++node) {
    double in[6], out[6];
    for (int c = 0; c < d; ++c) in[c] = metric.comp(c)[node];
    const double mineig = sym_min_eigenvalue_node(n, in);
    if (!(mineig > 0.1))
      fail("grid geometry: metric not positive definite at node " + std::to_string(node) +
           " (min eigenvalue " + std::to_string(mineig) + ")");
    sym_inverse_node(n, in, out);
    for (int c = 0; c < d; ++c) geom.metric_inv.comp(c)[node] = out[c];
  }
  dealias(geom.metric_inv);

  // dg[a][s] = d_a g_s
  std::vector<double> dg(static_cast<std::size_t>(n) * d * nodes);
  for (int a = 0; a < n; ++a)
    for (int s = 0; s < d; ++s)
      spectral_derivative_comp(grid, metric.comp(s), a,
                               dg.data() + (static_cast<std::size_t>(a) * d + s) * nodes);

  auto dg_at = [&](int a, int i, int j, std::size_t node) {
    return dg[(static_cast<std::size_t>(a) * d + sym2_index(n, i, j)) * nodes + node];
  };

  geom.christoffel.assign(static_cast<std::size_t>(n) * d * nodes, 0.0);
  parallel_for(nodes, [&](std::size_t node) {
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          double s = 0.0;
          for (int l = 0; l < n; ++l)
            s += geom.metric_inv.at(k, l, node) *
                 (dg_at(i, j, l, node) + dg_at(j, i, l, node) - dg_at(l, i, j, node));
          geom.christoffel[(static_cast<std::size_t>(k) * d + sym2_index(n, i, j)) * nodes +
                           node] = 0.5 * s;
        }
  });
  for (int c = 0; c < n * d; ++c)
    dealias_comp(grid, geom.christoffel.data() + static_cast<std::size_t>(c) * nodes);

  // dgam[b][k][s] = d_b Gamma^k_s
  std::vector<double> dgam(static_cast<std::size_t>(n) * n * d * nodes);
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n * d; ++c)
      spectral_derivative_comp(
          grid, geom.christoffel.data() + static_cast<std::size_t>(c) * nodes, b,
          dgam.data() + (static_cast<std::size_t>(b) * n * d + c) * nodes);
  auto dgam_at = [&](int b, int k, int i, int j, std::size_t node) {
    return dgam[(static_cast<std::size_t>(b) * n * d + static_cast<std::size_t>(k) * d +
                 sym2_index(n, i, j)) *
                    nodes +
                node];
  };

  // Ricci directly from the mixed curvature contraction.
  geom.ricci = Sym2Field(grid);
  parallel_for(nodes, [&](std::size_t node) {
    for (int k = 0; k < n; ++k)
      for (int j = k; j < n; ++j) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
          s += dgam_at(i, i, j, k, node) - dgam_at(j, i, i, k, node);
          for (int m = 0; m < n; ++m)
            s += geom.gamma(i, i, m, node) * geom.gamma(m, j, k, node) -
                 geom.gamma(i, j, m, node) * geom.gamma(m, i, k, node);
        }
        geom.ricci.at(k, j, node) = s;
      }
  });
  dealias(geom.ricci);

  geom.scalar = ScalarField(grid);
  parallel_for(nodes, [&](std::size_t node) {
    double s = 0.0;
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        s += geom.metric_inv.at(k, j, node) * geom.ricci.at(k, j, node);
    geom.scalar.at(node) = s;
  });
  dealias(geom.scalar);

  if (with_riemann) {
    geom.riem.assign(static_cast<std::size_t>(n) * n * n * n * nodes, 0.0);
    parallel_for(nodes, [&](std::size_t node) {
      for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k)
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
              double up = dgam_at(i, l, j, k, node) - dgam_at(j, l, i, k, node);
              for (int m = 0; m < n; ++m)
                up += geom.gamma(l, i, m, node) * geom.gamma(m, j, k, node) -
                      geom.gamma(l, j, m, node) * geom.gamma(m, i, k, node);
              // store mixed first, lower in a second pass below
              const std::size_t c = ((static_cast<std::size_t>(l) * n + k) * n + i) * n + j;
              geom.riem[c * nodes + node] = up;
            }
      // lower the first index in place
      double lowered[81];
      for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k)
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
              double s = 0.0;
              for (int m = 0; m < n; ++m) {
                const std::size_t c = ((static_cast<std::size_t>(m) * n + k) * n + i) * n + j;
                s += geom.metric.at(l, m, node) * geom.riem[c * nodes + node];
              }
              lowered[((l * n + k) * n + i) * n + j] = s;
            }
      for (int c = 0; c < n * n * n * n; ++c)
        geom.riem[static_cast<std::size_t>(c) * nodes + node] = lowered[c];
    });
    for (int c = 0; c < n * n * n * n; ++c)
      dealias_comp(grid, geom.riem.data() + static_cast<std::size_t>(c) * nodes);
    geom.has_curvature = true;
  }
  return geom;
}

FieldStorage sym2_to_full(const Sym2Field& u) {
  const int n = u.grid.dim;
  FieldStorage out(u.grid, n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double* src = u.comp(sym2_index(n, i, j));
      double* dst = out.comp(i * n + j);
      std::copy(src, src + u.grid.nodes(), dst);
    }
  return out;
}

Sym2Field full_to_sym2(const FieldStorage& f) {
  const int n = f.grid.dim;
  Sym2Field out(f.grid);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double* a = f.comp(i * n + j);
      const double* b = f.comp(j * n + i);
      double* dst = out.comp(sym2_index(n, i, j));
      for (std::size_t node = 0; node < f.grid.nodes(); ++node)
        dst[node] = 0.5 * (a[node] + b[node]);
    }
  return out;
}

FieldStorage grid_covariant_derivative(const FieldStorage& t, int rank,
                                       const GridGeometry& geom) {
  const TorusGrid grid = t.grid;
  const int n = grid.dim;
  const std::size_t nodes = grid.nodes();
  std::size_t comp_count = 1;
  for (int r = 0; r < rank; ++r) comp_count *= static_cast<std::size_t>(n);
  require(t.comps == static_cast<int>(comp_count), "grid covariant derivative: comps mismatch");

  FieldStorage out(grid, n * static_cast<int>(comp_count));
  // partial derivatives
  for (int a = 0; a < n; ++a)
    for (std::size_t c = 0; c < comp_count; ++c)
      spectral_derivative_comp(grid, t.comp(static_cast<int>(c)), a,
                               out.comp(static_cast<int>(a * comp_count + c)));
  if (geom.flat || rank == 0) return out;

  // connection corrections
  std::vector<int> idx(rank);
  for (std::size_t flat = 0; flat < comp_count; ++flat) {
    std::size_t rem = flat;
    for (int s = rank - 1; s >= 0; --s) {
      idx[s] = static_cast<int>(rem % n);
      rem /= n;
    }
    for (int a = 0; a < n; ++a) {
      double* dst = out.comp(static_cast<int>(a * comp_count + flat));
      for (int slot = 0; slot < rank; ++slot) {
        std::size_t stride = 1;
        for (int r = rank - 1; r > slot; --r) stride *= static_cast<std::size_t>(n);
        const std::size_t base = flat - static_cast<std::size_t>(idx[slot]) * stride;
        for (int m = 0; m < n; ++m) {
          const double* src = t.comp(static_cast<int>(base + static_cast<std::size_t>(m) * stride));
          for (std::size_t node = 0; node < nodes; ++node)
            dst[node] -= geom.gamma(m, a, idx[slot], node) * src[node];
        }
      }
    }
  }
  dealias(out);
  return out;
}

ScalarField grid_trace(const Sym2Field& u, const GridGeometry& geom) {
  const int n = u.grid.dim;
  ScalarField out(u.grid);
  for (std::size_t node = 0; node < u.grid.nodes(); ++node) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += geom.metric_inv.at(i, j, node) * u.at(i, j, node);
    out.at(node) = s;
  }
  if (!geom.flat) dealias(out);
  return out;
}

OneFormField grid_differential(const ScalarField& f) {
  OneFormField out(f.grid);
  for (int a = 0; a < f.grid.dim; ++a)
    spectral_derivative_comp(f.grid, f.comp(0), a, out.comp(a));
  return out;
}

OneFormField grid_divergence(const Sym2Field& u, const GridGeometry& geom) {
  const int n = u.grid.dim;
  const FieldStorage du = grid_covariant_derivative(sym2_to_full(u), 2, geom);
  OneFormField out(u.grid);
  for (std::size_t node = 0; node < u.grid.nodes(); ++node)
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int a = 0; a < n; ++a)
        for (int j = 0; j < n; ++j)
          s -= geom.metric_inv.at(a, j, node) * du.comp((a * n + j) * n + i)[node];
      out.at(i, node) = s;
    }
  if (!geom.flat) dealias(out);
  return out;
}

ScalarField grid_codifferential(const OneFormField& w, const GridGeometry& geom) {
  const int n = w.grid.dim;
  FieldStorage in(w.grid, n);
  in.v = w.v;
  const FieldStorage dw = grid_covariant_derivative(in, 1, geom);
  ScalarField out(w.grid);
  for (std::size_t node = 0; node < w.grid.nodes(); ++node) {
    double s = 0.0;
    for (int a = 0; a < n; ++a)
      for (int i = 0; i < n; ++i) s -= geom.metric_inv.at(a, i, node) * dw.comp(a * n + i)[node];
    out.at(node) = s;
  }
  if (!geom.flat) dealias(out);
  return out;
}

Sym2Field grid_killing(const OneFormField& w, const GridGeometry& geom) {
  const int n = w.grid.dim;
  FieldStorage in(w.grid, n);
  in.v = w.v;
  const FieldStorage dw = grid_covariant_derivative(in, 1, geom);
  Sym2Field out(w.grid);
  for (std::size_t node = 0; node < w.grid.nodes(); ++node)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        out.at(i, j, node) = 0.5 * (dw.comp(i * n + j)[node] + dw.comp(j * n + i)[node]);
  return out;
}

OneFormField grid_bianchi(const Sym2Field& h, const GridGeometry& geom) {
  OneFormField out = grid_divergence(h, geom);
  const OneFormField dtr = grid_differential(grid_trace(h, geom));
  for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] += 0.5 * dtr.v[i];
  return out;
}

OneFormField grid_gen_bianchi(const Sym2Field& e, const GridGeometry& geom, double kappa) {
  const int n = e.grid.dim;
  require(std::abs(1.0 + kappa * n) > 1e-12, "gen_bianchi: kappa = -1/n is excluded");
  const double c = (2.0 * kappa + 1.0) / (2.0 * (1.0 + kappa * n));
  OneFormField out = grid_divergence(e, geom);
  const OneFormField dtr = grid_differential(grid_trace(e, geom));
  for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] += c * dtr.v[i];
  return out;
}

namespace {

FieldStorage rough_laplacian_generic(const FieldStorage& t, int rank, const GridGeometry& geom) {
  const int n = t.grid.dim;
  const std::size_t nodes = t.grid.nodes();
  const FieldStorage d1 = grid_covariant_derivative(t, rank, geom);
  const FieldStorage d2 = grid_covariant_derivative(d1, rank + 1, geom);
  std::size_t comp_count = static_cast<std::size_t>(t.comps);
  FieldStorage out(t.grid, t.comps);
  for (std::size_t flat = 0; flat < comp_count; ++flat) {
    double* dst = out.comp(static_cast<int>(flat));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const double* src = d2.comp(static_cast<int>((static_cast<std::size_t>(a) * n + b) *
                                                         comp_count +
                                                     flat));
        for (std::size_t node = 0; node < nodes; ++node)
          dst[node] -= geom.metric_inv.at(a, b, node) * src[node];
      }
  }
  if (!geom.flat) dealias(out);
  return out;
}

}  // namespace

ScalarField grid_rough_laplacian(const ScalarField& f, const GridGeometry& geom) {
  FieldStorage in(f.grid, 1);
  in.v = f.v;
  const FieldStorage r = rough_laplacian_generic(in, 0, geom);
  ScalarField out(f.grid);
  out.v = r.v;
  return out;
}

OneFormField grid_rough_laplacian(const OneFormField& w, const GridGeometry& geom) {
  FieldStorage in(w.grid, w.grid.dim);
  in.v = w.v;
  const FieldStorage r = rough_laplacian_generic(in, 1, geom);
  OneFormField out(w.grid);
  out.v = r.v;
  return out;
}

Sym2Field grid_rough_laplacian(const Sym2Field& u, const GridGeometry& geom) {
  return full_to_sym2(rough_laplacian_generic(sym2_to_full(u), 2, geom));
}

OneFormField grid_hodge(const OneFormField& w, const GridGeometry& geom) {
  const int n = w.grid.dim;
  OneFormField out = grid_rough_laplacian(w, geom);
  for (std::size_t node = 0; node < w.grid.nodes(); ++node)
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int k = 0; k < n; ++k)
        for (int a = 0; a < n; ++a)
          s += geom.metric_inv.at(k, a, node) * geom.ricci.at(i, a, node) * w.at(k, node);
      out.at(i, node) += s;
    }
  if (!geom.flat) dealias(out);
  return out;
}

Sym2Field grid_ricci_action(const Sym2Field& u, const GridGeometry& geom) {
  const int n = u.grid.dim;
  Sym2Field out(u.grid);
  for (std::size_t node = 0; node < u.grid.nodes(); ++node) {
    double up[3][3];
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int a = 0; a < n; ++a) s += geom.metric_inv.at(k, a, node) * u.at(a, j, node);
        up[k][j] = s;
      }
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (int k = 0; k < n; ++k)
          s += geom.ricci.at(i, k, node) * up[k][j] + geom.ricci.at(j, k, node) * up[k][i];
        out.at(i, j, node) = 0.5 * s;
      }
  }
  if (!geom.flat) dealias(out);
  return out;
}

Sym2Field grid_riemann_action(const Sym2Field& u, const GridGeometry& geom) {
  require(geom.has_curvature && !geom.riem.empty(),
          "riemann action: geometry built without the Riemann tensor");
  const int n = u.grid.dim;
  Sym2Field out(u.grid);
  for (std::size_t node = 0; node < u.grid.nodes(); ++node) {
    double up[3][3];
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            s += geom.metric_inv.at(a, i, node) * geom.metric_inv.at(b, j, node) *
                 u.at(i, j, node);
        up[a][b] = s;
      }
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) s += geom.riemann(i, k, j, l, node) * up[k][l];
        out.at(i, j, node) = s;
      }
  }
  if (!geom.flat) dealias(out);
  return out;
}

Sym2Field grid_lichnerowicz(const Sym2Field& u, const GridGeometry& geom) {
  Sym2Field out = grid_rough_laplacian(u, geom);
  const Sym2Field rc = grid_ricci_action(u, geom);
  const Sym2Field rm = grid_riemann_action(u, geom);
  for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] += 2.0 * (rc.v[i] - rm.v[i]);
  return out;
}

Tensor3Field grid_d_operator(const Sym2Field& u, const GridGeometry& geom) {
  const int n = u.grid.dim;
  const FieldStorage du = grid_covariant_derivative(sym2_to_full(u), 2, geom);
  const double inv_sqrt2 = 0.70710678118654752440;
  Tensor3Field out(u.grid);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double* dst = out.comp(out.comp_index(k, i, j));
        const double* a = du.comp((k * n + i) * n + j);
        const double* b = du.comp((j * n + i) * n + k);
        for (std::size_t node = 0; node < u.grid.nodes(); ++node)
          dst[node] = inv_sqrt2 * (a[node] - b[node]);
      }
  return out;
}

Sym2Field grid_dstar_operator(const Tensor3Field& t, const GridGeometry& geom) {
  const int n = t.grid.dim;
  FieldStorage in(t.grid, n * n * n);
  in.v = t.v;
  const FieldStorage dt = grid_covariant_derivative(in, 3, geom);
  const double c = 1.0 / (2.0 * std::sqrt(2.0));
  Sym2Field out(t.grid);
  for (std::size_t node = 0; node < t.grid.nodes(); ++node)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (int a = 0; a < n; ++a)
          for (int k = 0; k < n; ++k) {
            const double term = dt.comp(((a * n + i) * n + j) * n + k)[node] +
                                dt.comp(((a * n + j) * n + i) * n + k)[node] -
                                dt.comp(((a * n + k) * n + i) * n + j)[node] -
                                dt.comp(((a * n + k) * n + j) * n + i)[node];
            s += geom.metric_inv.at(a, k, node) * term;
          }
        out.at(i, j, node) = c * s;
      }
  if (!geom.flat) dealias(out);
  return out;
}

Sym2Field grid_ein(const GridGeometry& geom, double kappa, double lambda) {
  const int n = geom.grid.dim;
  Sym2Field out = geom.ricci;
  for (std::size_t node = 0; node < geom.grid.nodes(); ++node)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        out.at(i, j, node) +=
            (kappa * geom.scalar.at(node) + lambda) * geom.metric.at(i, j, node);
  if (!geom.flat) dealias(out);
  return out;
}

namespace {
double weighted_sum(const FieldStorage& a, const FieldStorage& b,
                    const std::vector<double>& weights) {
  require(a.grid == b.grid && a.comps == b.comps, "l2_inner: shape mismatch");
  double total = 0.0;
  for (int c = 0; c < a.comps; ++c) {
    const double* pa = a.comp(c);
    const double* pb = b.comp(c);
    double s = 0.0;
    for (std::size_t i = 0; i < a.grid.nodes(); ++i) s += pa[i] * pb[i];
    total += weights[c] * s;
  }
  return total * a.grid.cell_volume();
}
}  // namespace

double l2_inner(const ScalarField& a, const ScalarField& b) {
  return weighted_sum(a, b, {1.0});
}

double l2_inner(const OneFormField& a, const OneFormField& b) {
  return weighted_sum(a, b, std::vector<double>(a.comps, 1.0));
}

double l2_inner(const Sym2Field& a, const Sym2Field& b) {
  const int n = a.grid.dim;
  std::vector<double> w(a.comps, 2.0);
  for (int i = 0; i < n; ++i) w[sym2_index(n, i, i)] = 1.0;
  return weighted_sum(a, b, w);
}

double l2_inner(const Tensor3Field& a, const Tensor3Field& b) {
  return weighted_sum(a, b, std::vector<double>(a.comps, 1.0));
}

namespace {
void fill_band_limited(const TorusGrid& grid, CounterRng& rng, int max_mode, double* comp) {
  const int N = grid.n_axis;
  std::vector<std::complex<double>> spec(grid.nodes(), 0.0);
  for (std::size_t node = 0; node < grid.nodes(); ++node) {
    const auto idx = grid.node_indices(node);
    bool in_band = true;
    for (int a = 0; a < grid.dim; ++a)
      if (std::abs(signed_freq(idx[a], N)) > max_mode) in_band = false;
    if (in_band) spec[node] = {rng.symmetric(), rng.symmetric()};
  }
  // Hermitian symmetrization for a real field.
  std::vector<std::complex<double>> sym(grid.nodes());
  for (std::size_t node = 0; node < grid.nodes(); ++node) {
    const auto idx = grid.node_indices(node);
    std::array<int, 3> neg{0, 0, 0};
    for (int a = 0; a < grid.dim; ++a) neg[a] = (N - idx[a]) % N;
    const std::size_t mirror = grid.node_at(neg);
    sym[node] = 0.5 * (spec[node] + std::conj(spec[mirror]));
  }
  // unnormalized spectra invert with 1/N^dim; rescale to O(1) amplitudes
  const double scale = static_cast<double>(grid.nodes()) /
                       std::pow(2.0 * max_mode + 1.0, grid.dim);
  for (auto& z : sym) z *= scale;
  fft_inverse(grid, std::move(sym), comp);
}
}  // namespace

ScalarField random_scalar_field(const TorusGrid& grid, CounterRng& rng, int max_mode) {
  ScalarField f(grid);
  fill_band_limited(grid, rng, max_mode, f.comp(0));
  return f;
}

OneFormField random_one_form_field(const TorusGrid& grid, CounterRng& rng, int max_mode) {
  OneFormField f(grid);
  for (int c = 0; c < f.comps; ++c) fill_band_limited(grid, rng, max_mode, f.comp(c));
  return f;
}

Sym2Field random_sym2_field(const TorusGrid& grid, CounterRng& rng, int max_mode) {
  Sym2Field f(grid);
  for (int c = 0; c < f.comps; ++c) fill_band_limited(grid, rng, max_mode, f.comp(c));
  return f;
}

Tensor3Field random_tensor3_field(const TorusGrid& grid, CounterRng& rng, int max_mode) {
  Tensor3Field f(grid);
  for (int c = 0; c < f.comps; ++c) fill_band_limited(grid, rng, max_mode, f.comp(c));
  return f;
}

FieldStorage grid_ein4(const GridGeometry& geom, double a, double kappa, double lambda) {
  const int n = geom.grid.dim;
  check_ein_kappa_guards(n, kappa);
  require(geom.has_curvature && !geom.riem.empty(),
          "grid_ein4: geometry built without the Riemann tensor");
  const double b = (kappa * (1.0 + a * (n - 2.0)) - a) / (2.0 * (n - 1.0));
  const double c = (1.0 + (n - 2.0) * a) * lambda / (2.0 * (n - 1.0));
  const std::size_t nodes = geom.grid.nodes();

  FieldStorage out(geom.grid, n * n * n * n);
  parallel_for(nodes, [&](std::size_t node) {
    double inner[3][3];  // a Ric + b R g + c g
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        inner[i][j] = a * geom.ricci.at(i, j, node) +
                      (b * geom.scalar.at(node) + c) * geom.metric.at(i, j, node);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            const double kn = geom.metric.at(i, k, node) * inner[j][l] +
                              geom.metric.at(j, l, node) * inner[i][k] -
                              geom.metric.at(i, l, node) * inner[j][k] -
                              geom.metric.at(j, k, node) * inner[i][l];
            out.comp(((i * n + j) * n + k) * n + l)[node] =
                geom.riemann(i, j, k, l, node) + kn;
          }
  });
  if (!geom.flat) dealias(out);
  return out;
}

GridOperatorResult apply_operator_grid(OperatorTag tag, const GridOperatorInput& input,
                                       const GridGeometry& geom, const OperatorParams& params) {
  const int n = geom.grid.dim;
  GridOperatorResult out;
  auto need_sym2 = [&]() -> const Sym2Field& {
    require(input.sym2 != nullptr, "apply_operator_grid: rank-2 input expected");
    return *input.sym2;
  };
  auto need_one_form = [&]() -> const OneFormField& {
    require(input.one_form != nullptr, "apply_operator_grid: one-form input expected");
    return *input.one_form;
  };
  switch (tag) {
    case OperatorTag::RoughLaplacian:
      if (input.sym2) {
        out.rank = 2;
        out.sym2 = grid_rough_laplacian(*input.sym2, geom);
      } else if (input.one_form) {
        out.rank = 1;
        out.one_form = grid_rough_laplacian(*input.one_form, geom);
      } else {
        require(input.scalar != nullptr, "apply_operator_grid: input field expected");
        out.rank = 0;
        out.scalar = grid_rough_laplacian(*input.scalar, geom);
      }
      break;
    case OperatorTag::Lichnerowicz:
      out.rank = 2;
      out.sym2 = grid_lichnerowicz(need_sym2(), geom);
      break;
    case OperatorTag::Hodge:
      out.rank = 1;
      out.one_form = grid_hodge(need_one_form(), geom);
      break;
    case OperatorTag::Divergence:
      out.rank = 1;
      out.one_form = grid_divergence(need_sym2(), geom);
      break;
    case OperatorTag::KillingSym:
      out.rank = 2;
      out.sym2 = grid_killing(need_one_form(), geom);
      break;
    case OperatorTag::Codifferential:
      out.rank = 0;
      out.scalar = grid_codifferential(need_one_form(), geom);
      break;
    case OperatorTag::Bianchi:
      out.rank = 1;
      out.one_form = grid_bianchi(need_sym2(), geom);
      break;
    case OperatorTag::GenBianchi:
      check_ein_kappa_guards(n, params.kappa);
      out.rank = 1;
      out.one_form = grid_gen_bianchi(need_sym2(), geom, params.kappa);
      break;
    case OperatorTag::D:
      out.rank = 3;
      out.tensor3 = grid_d_operator(need_sym2(), geom);
      break;
    case OperatorTag::DStar:
      require(input.tensor3 != nullptr, "apply_operator_grid: rank-3 input expected");
      out.rank = 2;
      out.sym2 = grid_dstar_operator(*input.tensor3, geom);
      break;
    case OperatorTag::Kodaira: {
      const Sym2Field& u = need_sym2();
      out.rank = 2;
      out.sym2 = grid_dstar_operator(grid_d_operator(u, geom), geom);
      const Sym2Field lls = grid_killing(grid_divergence(u, geom), geom);
      for (std::size_t i = 0; i < out.sym2.v.size(); ++i) out.sym2.v[i] += lls.v[i];
      break;
    }
    case OperatorTag::Ein:
      check_ein_kappa_guards(n, params.kappa);
      out.rank = 2;
      out.sym2 = grid_ein(geom, params.kappa, params.lambda);
      break;
    case OperatorTag::Ein4:
      out.rank = 4;
      out.tensor4 = grid_ein4(geom, params.a, params.kappa, params.lambda);
      break;
    case OperatorTag::RicContra: {
      out.rank = 2;
      out.sym2 = Sym2Field(geom.grid);
      for (std::size_t node = 0; node < geom.grid.nodes(); ++node)
        for (int i = 0; i < n; ++i)
          for (int j = i; j < n; ++j) {
            double s = 0.0;
            for (int a = 0; a < n; ++a)
              for (int b = 0; b < n; ++b)
                s += geom.metric_inv.at(i, a, node) * geom.metric_inv.at(j, b, node) *
                     geom.ricci.at(a, b, node);
            out.sym2.at(i, j, node) = s;
          }
      if (!geom.flat) dealias(out.sym2);
      break;
    }
    case OperatorTag::BianchiContra: {
      const Sym2Field& r_up = need_sym2();
      Sym2Field lowered(geom.grid);
      for (std::size_t node = 0; node < geom.grid.nodes(); ++node)
        for (int i = 0; i < n; ++i)
          for (int j = i; j < n; ++j) {
            double s = 0.0;
            for (int a = 0; a < n; ++a)
              for (int b = 0; b < n; ++b)
                s += geom.metric.at(i, a, node) * r_up.at(a, b, node) *
                     geom.metric.at(b, j, node);
            lowered.at(i, j, node) = s;
          }
      if (!geom.flat) dealias(lowered);
      out.rank = 1;
      out.one_form = grid_bianchi(lowered, geom);
      break;
    }
  }
  require(out.rank >= 0, "apply_operator_grid: unknown tag");
  return out;
}

}  // namespace ricciforge
