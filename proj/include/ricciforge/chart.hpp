// SPDX-License-Identifier: MIT
#pragma once

#include <optional>

#include "ricciforge/jet_tensor.hpp"

namespace ricciforge {

/// Metric on a coordinate chart given as jets, with an optional perturbation
/// direction used by directional linearizations of t -> g + t h.
struct ChartMetricJet {
  JetTensor<double> g;
  std::optional<JetTensor<double>> direction;

  int dim() const { return g.dim(); }
  int order() const { return g.order(); }
};

/// Connection and curvature jets derived from a chart metric.
///
/// Each differentiation spends one order of the jet budget: with a metric of
/// order k, christoffel holds order k-1 and the curvature blocks order k-2.
/// riem stores the fully lowered tensor R_{lkij} = g_{lm} R^m_{kij} with
/// R^l_{kij} = d_i Gamma^l_{jk} - d_j Gamma^l_{ik} + Gamma^l_{im} Gamma^m_{jk}
///           - Gamma^l_{jm} Gamma^m_{ik},
/// the sign for which the round sphere has positive sectional curvature.
template <class Ring>
struct ChartGeometry {
  JetTensor<Ring> g;        // order k
  JetTensor<Ring> g_inv;    // order k
  JetTensor<Ring> gamma;    // [k][i][j] = Gamma^k_{ij}, order k-1
  JetTensor<Ring> riem;     // R_{lkij}, order k-2
  JetTensor<Ring> riem_up;  // R^l_{kij}, order k-2
  JetTensor<Ring> ric;      // order k-2
  TaylorJet<Ring> scal;     // order k-2

  int dim() const { return g.dim(); }
  int metric_order() const { return g.order(); }
  int curvature_order() const { return riem.valid() ? riem.order() : -1; }
  bool has_curvature() const { return riem.valid(); }
};

/// Gamma^k_{ij} = (1/2) g^{kl} (d_i g_{jl} + d_j g_{il} - d_l g_{ij}).
template <class Ring>
JetTensor<Ring> christoffel(const JetTensor<Ring>& g, const JetTensor<Ring>& g_inv) {
  const int n = g.dim();
  require(g.order() >= 1, "christoffel: jet order budget exhausted");
  const int out_order = g.order() - 1;

  JetTensor<Ring> dg(n, 3, out_order);  // dg[a][i][j] = d_a g_{ij}
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) dg.at(a, i, j) = g.at(i, j).derivative(a);

  const JetTensor<Ring> gi = g_inv.truncated(out_order);
  JetTensor<Ring> gamma(n, 3, out_order);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        TaylorJet<Ring> s(JetLayout::get(n, out_order));
        for (int l = 0; l < n; ++l) {
          TaylorJet<Ring> term = dg.at(i, j, l) + dg.at(j, i, l) - dg.at(l, i, j);
          s += gi.at(k, l) * term;
        }
        s.scale(Ring{0.5});
        gamma.at(k, i, j) = s;
        if (j != i) gamma.at(k, j, i) = s;
      }
  return gamma;
}

template <class Ring>
ChartGeometry<Ring> build_geometry(const JetTensor<Ring>& g) {
  require(g.rank() == 2, "build_geometry: metric must be rank 2");
  require(g.order() >= 2, "build_geometry: jet order budget exhausted");
  const int n = g.dim();

  ChartGeometry<Ring> geom;
  geom.g = g;
  geom.g_inv = jet_metric_inverse(g);
  geom.gamma = christoffel(g, geom.g_inv);

  const int co = g.order() - 2;  // curvature order
  const JetTensor<Ring> gam = geom.gamma;

  JetTensor<Ring> dgam(n, 4, co);  // dgam[a][l][i][j] = d_a Gamma^l_{ij}
  for (int a = 0; a < n; ++a)
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) dgam.at(a, l, i, j) = gam.at(l, i, j).derivative(a);

  const JetTensor<Ring> gam_t = gam.truncated(co);
  JetTensor<Ring> riem_up(n, 4, co);
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          TaylorJet<Ring> s = dgam.at(i, l, j, k) - dgam.at(j, l, i, k);
          for (int m = 0; m < n; ++m) {
            s += gam_t.at(l, i, m) * gam_t.at(m, j, k);
            s -= gam_t.at(l, j, m) * gam_t.at(m, i, k);
          }
          riem_up.at(l, k, i, j) = s;
        }
  geom.riem_up = riem_up;

  const JetTensor<Ring> g_t = g.truncated(co);
  JetTensor<Ring> riem(n, 4, co);
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          TaylorJet<Ring> s(JetLayout::get(n, co));
          for (int m = 0; m < n; ++m) s += g_t.at(l, m) * riem_up.at(m, k, i, j);
          riem.at(l, k, i, j) = s;
        }
  geom.riem = riem;

  JetTensor<Ring> ric(n, 2, co);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) {
      TaylorJet<Ring> s(JetLayout::get(n, co));
      for (int i = 0; i < n; ++i) s += riem_up.at(i, k, i, j);
      ric.at(k, j) = s;
    }
  geom.ric = ric;

  const JetTensor<Ring> gi_t = geom.g_inv.truncated(co);
  TaylorJet<Ring> scal(JetLayout::get(n, co));
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) scal += gi_t.at(k, j) * ric.at(k, j);
  geom.scal = scal;

  return geom;
}

/// Directional linearization: evaluates fn on the dual-seeded metric
/// g + t * direction and returns the exact t-derivative of its output at
/// t = 0. fn maps JetTensor<Dual> -> JetTensor<Dual>.
template <class F>
JetTensor<double> linearize(const ChartMetricJet& metric, F&& fn) {
  require(metric.direction.has_value(), "linearize: missing direction");
  return dual_derivative_part(fn(seed_dual(metric.g, *metric.direction)));
}

/// Covariant derivative; the derivative slot comes first:
/// (nabla T)_{a, i1..ir} = d_a T_{i1..ir} - sum_s Gamma^m_{a i_s} T_{..m..}.
template <class Ring>
JetTensor<Ring> covariant_derivative(const JetTensor<Ring>& t, const ChartGeometry<Ring>& geom) {
  const int n = t.dim();
  const int rank = t.rank();
  require(t.order() >= 1, "covariant derivative: jet order budget exhausted");
  const int out_order = std::min(t.order() - 1, geom.gamma.order());
  require(out_order >= 0, "covariant derivative: jet order budget exhausted");
  require(rank + 1 <= 4, "covariant derivative: rank overflow");

  const JetTensor<Ring> tt = t.truncated(std::min(t.order(), out_order + 1));
  const JetTensor<Ring> gam = geom.gamma.truncated(out_order);

  JetTensor<Ring> out(n, rank + 1, out_order);
  std::vector<int> idx(rank, 0);
  const std::size_t comp_count = t.size();
  for (std::size_t flat = 0; flat < comp_count; ++flat) {
    // decode row-major component indices
    std::size_t rem = flat;
    for (int s = rank - 1; s >= 0; --s) {
      idx[s] = static_cast<int>(rem % n);
      rem /= n;
    }
    for (int a = 0; a < n; ++a) {
      TaylorJet<Ring> s = tt[flat].derivative(a).truncated(out_order);
      for (int slot = 0; slot < rank; ++slot) {
        std::size_t stride = 1;
        for (int r = rank - 1; r > slot; --r) stride *= static_cast<std::size_t>(n);
        const std::size_t base = flat - static_cast<std::size_t>(idx[slot]) * stride;
        for (int m = 0; m < n; ++m)
          s -= gam.at(m, a, idx[slot]) * tt[base + static_cast<std::size_t>(m) * stride].truncated(out_order);
      }
      out[a * comp_count + flat] = s;
    }
  }
  return out;
}

/// Rough Laplacian (geometer's sign): Delta T = -g^{ab} (nabla nabla T)_{ab...},
/// so that Delta cos(x1) = +cos(x1) on a flat chart.
template <class Ring>
JetTensor<Ring> rough_laplacian(const JetTensor<Ring>& t, const ChartGeometry<Ring>& geom) {
  require(t.order() >= 2, "rough laplacian: jet order budget exhausted");
  const JetTensor<Ring> d1 = covariant_derivative(t, geom);
  const JetTensor<Ring> d2 = covariant_derivative(d1, geom);
  const int n = t.dim();
  const int out_order = d2.order();
  const JetTensor<Ring> gi = geom.g_inv.truncated(out_order);

  JetTensor<Ring> out(n, t.rank(), out_order);
  const std::size_t comp_count = t.size();
  for (std::size_t flat = 0; flat < comp_count; ++flat) {
    TaylorJet<Ring> s(JetLayout::get(n, out_order));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        s -= gi.at(a, b) * d2[(static_cast<std::size_t>(a) * n + b) * comp_count + flat];
    out[flat] = s;
  }
  return out;
}

}  // namespace ricciforge
