// SPDX-License-Identifier: MIT
#pragma once

#include <cmath>

#include "ricciforge/chart.hpp"
#include "ricciforge/operator_tags.hpp"

namespace ricciforge {

// ---------------------------------------------------------------------------
// Contractions
// ---------------------------------------------------------------------------

template <class Ring>
TaylorJet<Ring> trace_g(const JetTensor<Ring>& u, const ChartGeometry<Ring>& geom) {
  const int n = u.dim();
  const int w = std::min(u.order(), geom.g_inv.order());
  const JetTensor<Ring> gi = geom.g_inv.truncated(w);
  TaylorJet<Ring> s(JetLayout::get(n, w));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s += gi.at(i, j) * u.at(i, j).truncated(w);
  return s;
}

/// <u, v>_g = g^{ia} g^{jb} u_{ij} v_{ab} for rank-2 tensors.
template <class Ring>
TaylorJet<Ring> inner_g(const JetTensor<Ring>& u, const JetTensor<Ring>& v,
                        const ChartGeometry<Ring>& geom) {
  const int n = u.dim();
  const int w = std::min({u.order(), v.order(), geom.g_inv.order()});
  const JetTensor<Ring> gi = geom.g_inv.truncated(w);
  JetTensor<Ring> u_up(n, 2, w);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      TaylorJet<Ring> s(JetLayout::get(n, w));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          s += gi.at(a, i) * gi.at(b, j) * u.at(i, j).truncated(w);
      u_up.at(a, b) = s;
    }
  TaylorJet<Ring> s(JetLayout::get(n, w));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) s += u_up.at(a, b) * v.at(a, b).truncated(w);
  return s;
}

/// u with both slots raised: u^{ab} = g^{ai} g^{bj} u_{ij}.
template <class Ring>
JetTensor<Ring> raise_both(const JetTensor<Ring>& u, const ChartGeometry<Ring>& geom) {
  const int n = u.dim();
  const int w = std::min(u.order(), geom.g_inv.order());
  const JetTensor<Ring> gi = geom.g_inv.truncated(w);
  JetTensor<Ring> out(n, 2, w);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      TaylorJet<Ring> s(JetLayout::get(n, w));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += gi.at(a, i) * gi.at(b, j) * u.at(i, j).truncated(w);
      out.at(a, b) = s;
    }
  return out;
}

/// Action of a symmetric 2-tensor as an endomorphism of one-forms:
/// (S w)_i = S_i^k w_k = g^{ka} S_{ia} w_k.
template <class Ring>
JetTensor<Ring> endo_apply(const JetTensor<Ring>& s2, const JetTensor<Ring>& omega,
                           const ChartGeometry<Ring>& geom) {
  const int n = omega.dim();
  const int w = std::min({s2.order(), omega.order(), geom.g_inv.order()});
  const JetTensor<Ring> gi = geom.g_inv.truncated(w);
  JetTensor<Ring> out(n, 1, w);
  for (int i = 0; i < n; ++i) {
    TaylorJet<Ring> s(JetLayout::get(n, w));
    for (int k = 0; k < n; ++k)
      for (int a = 0; a < n; ++a)
        s += gi.at(k, a) * s2.at(i, a).truncated(w) * omega.at(k).truncated(w);
    out.at(i) = s;
  }
  return out;
}

// ---------------------------------------------------------------------------
// First-order operators
// ---------------------------------------------------------------------------

/// (div u)_i = -nabla^j u_{ji}.
template <class Ring>
JetTensor<Ring> divergence(const JetTensor<Ring>& u, const ChartGeometry<Ring>& geom) {
  const int n = u.dim();
  const JetTensor<Ring> du = covariant_derivative(u, geom);  // (a, j, i)
  const int w = du.order();
  const JetTensor<Ring> gi = geom.g_inv.truncated(w);
  JetTensor<Ring> out(n, 1, w);
  for (int i = 0; i < n; ++i) {
    TaylorJet<Ring> s(JetLayout::get(n, w));
    for (int a = 0; a < n; ++a)
      for (int j = 0; j < n; ++j) s -= gi.at(a, j) * du.at(a, j, i);
    out.at(i) = s;
  }
  return out;
}

/// d* omega = -nabla^i omega_i.
template <class Ring>
TaylorJet<Ring> codifferential(const JetTensor<Ring>& omega, const ChartGeometry<Ring>& geom) {
  const int n = omega.dim();
  const JetTensor<Ring> dw = covariant_derivative(omega, geom);
  const int w = dw.order();
  const JetTensor<Ring> gi = geom.g_inv.truncated(w);
  TaylorJet<Ring> s(JetLayout::get(n, w));
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i) s -= gi.at(a, i) * dw.at(a, i);
  return s;
}

/// (L omega)_{ij} = (1/2)(nabla_i omega_j + nabla_j omega_i).
template <class Ring>
JetTensor<Ring> killing_operator(const JetTensor<Ring>& omega, const ChartGeometry<Ring>& geom) {
  const int n = omega.dim();
  const JetTensor<Ring> dw = covariant_derivative(omega, geom);
  JetTensor<Ring> out(n, 2, dw.order());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      TaylorJet<Ring> s = dw.at(i, j) + dw.at(j, i);
      s.scale(Ring{0.5});
      out.at(i, j) = s;
    }
  return out;
}

/// Differential of a scalar jet as a one-form.
template <class Ring>
JetTensor<Ring> differential(const TaylorJet<Ring>& f) {
  const int n = f.dim();
  JetTensor<Ring> out(n, 1, f.order() - 1);
  for (int a = 0; a < n; ++a) out.at(a) = f.derivative(a);
  return out;
}

/// B_g(h) = div_g h + (1/2) d(Tr_g h).
template <class Ring>
JetTensor<Ring> bianchi_operator(const JetTensor<Ring>& h, const ChartGeometry<Ring>& geom) {
  JetTensor<Ring> out = divergence(h, geom);
  const JetTensor<Ring> dtr = differential(trace_g(h, geom));
  const int w = std::min(out.order(), dtr.order());
  out = out.truncated(w);
  for (int i = 0; i < h.dim(); ++i) out.at(i) += dtr.at(i).truncated(w) * Ring{0.5};
  return out;
}

/// Generalized Bianchi operator of the Ein prescription:
/// script-B_g(E) = div_g E + (2 kappa + 1) / (2 (1 + kappa n)) d(Tr_g E).
template <class Ring>
JetTensor<Ring> gen_bianchi_operator(const JetTensor<Ring>& e, const ChartGeometry<Ring>& geom,
                                     double kappa) {
  const int n = e.dim();
  require(std::abs(1.0 + kappa * n) > 1e-12, "gen_bianchi: kappa = -1/n is excluded");
  const double c = (2.0 * kappa + 1.0) / (2.0 * (1.0 + kappa * n));
  JetTensor<Ring> out = divergence(e, geom);
  const JetTensor<Ring> dtr = differential(trace_g(e, geom));
  const int w = std::min(out.order(), dtr.order());
  out = out.truncated(w);
  for (int i = 0; i < n; ++i) out.at(i) += dtr.at(i).truncated(w) * Ring{c};
  return out;
}

// ---------------------------------------------------------------------------
// Curvature actions and second-order operators
// ---------------------------------------------------------------------------

/// (Ric u)_{ij} = (1/2)(Ric_{ik} u^k_j + Ric_{jk} u^k_i).
template <class Ring>
JetTensor<Ring> ricci_action(const JetTensor<Ring>& u, const ChartGeometry<Ring>& geom) {
  const int n = u.dim();
  const int w = std::min(u.order(), geom.curvature_order());
  const JetTensor<Ring> gi = geom.g_inv.truncated(w);
  const JetTensor<Ring> ric = geom.ric.truncated(w);
  const JetTensor<Ring> ut = u.truncated(w);
  JetTensor<Ring> up(n, 2, w);  // u^k_j = g^{ka} u_{aj}
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) {
      TaylorJet<Ring> s(JetLayout::get(n, w));
      for (int a = 0; a < n; ++a) s += gi.at(k, a) * ut.at(a, j);
      up.at(k, j) = s;
    }
  JetTensor<Ring> out(n, 2, w);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      TaylorJet<Ring> s(JetLayout::get(n, w));
      for (int k = 0; k < n; ++k) s += ric.at(i, k) * up.at(k, j) + ric.at(j, k) * up.at(k, i);
      s.scale(Ring{0.5});
      out.at(i, j) = s;
    }
  return out;
}

/// (Riem u)_{ij} = Riem_{ikjl} u^{kl}.
template <class Ring>
JetTensor<Ring> riemann_action(const JetTensor<Ring>& u, const ChartGeometry<Ring>& geom) {
  const int n = u.dim();
  const int w = std::min(u.order(), geom.curvature_order());
  const JetTensor<Ring> up = raise_both(u.truncated(w), geom);
  const JetTensor<Ring> riem = geom.riem.truncated(w);
  JetTensor<Ring> out(n, 2, w);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      TaylorJet<Ring> s(JetLayout::get(n, w));
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) s += riem.at(i, k, j, l) * up.at(k, l);
      out.at(i, j) = s;
    }
  return out;
}

/// Lichnerowicz Laplacian: Delta_L u = Delta u + 2 (Ric u - Riem u).
template <class Ring>
JetTensor<Ring> lichnerowicz(const JetTensor<Ring>& u, const ChartGeometry<Ring>& geom) {
  JetTensor<Ring> lap = rough_laplacian(u, geom);
  JetTensor<Ring> rc = ricci_action(u, geom);
  JetTensor<Ring> rm = riemann_action(u, geom);
  const int w = std::min({lap.order(), rc.order(), rm.order()});
  JetTensor<Ring> out = lap.truncated(w);
  out += rc.truncated(w).scale(Ring{2.0});
  out -= rm.truncated(w).scale(Ring{2.0});
  return out;
}

/// Hodge-de Rham Laplacian on one-forms: Delta_H = Delta + Ric.
template <class Ring>
JetTensor<Ring> hodge_laplacian(const JetTensor<Ring>& omega, const ChartGeometry<Ring>& geom) {
  JetTensor<Ring> lap = rough_laplacian(omega, geom);
  JetTensor<Ring> rw = endo_apply(geom.ric, omega, geom);
  const int w = std::min(lap.order(), rw.order());
  JetTensor<Ring> out = lap.truncated(w);
  out += rw.truncated(w);
  return out;
}

/// (D u)_{kij} = (1/sqrt2)(nabla_k u_{ij} - nabla_j u_{ik}).
template <class Ring>
JetTensor<Ring> d_operator(const JetTensor<Ring>& u, const ChartGeometry<Ring>& geom) {
  const int n = u.dim();
  const JetTensor<Ring> du = covariant_derivative(u, geom);
  const double inv_sqrt2 = 0.70710678118654752440;
  JetTensor<Ring> out(n, 3, du.order());
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        TaylorJet<Ring> s = du.at(k, i, j) - du.at(j, i, k);
        s.scale(Ring{inv_sqrt2});
        out.at(k, i, j) = s;
      }
  return out;
}

/// (D* T)_{ij} = (1/(2 sqrt2)) (-nabla^k T_{kij} - nabla^k T_{kji}
///                              + nabla^k T_{ijk} + nabla^k T_{jik}).
template <class Ring>
JetTensor<Ring> dstar_operator(const JetTensor<Ring>& t, const ChartGeometry<Ring>& geom) {
  const int n = t.dim();
  const JetTensor<Ring> dt = covariant_derivative(t, geom);  // (a, p, q, r)
  const int w = dt.order();
  const JetTensor<Ring> gi = geom.g_inv.truncated(w);
  const double c = 1.0 / (2.0 * std::sqrt(2.0));
  JetTensor<Ring> out(n, 2, w);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      TaylorJet<Ring> s(JetLayout::get(n, w));
      for (int a = 0; a < n; ++a)
        for (int k = 0; k < n; ++k) {
          TaylorJet<Ring> term = dt.at(a, i, j, k) + dt.at(a, j, i, k) - dt.at(a, k, i, j) -
                                 dt.at(a, k, j, i);
          s += gi.at(a, k) * term;
        }
      s.scale(Ring{c});
      out.at(i, j) = s;
    }
  return out;
}

/// Weitzenboeck combination D*D + L L* (acting on symmetric 2-tensors).
template <class Ring>
JetTensor<Ring> kodaira_laplacian(const JetTensor<Ring>& u, const ChartGeometry<Ring>& geom) {
  JetTensor<Ring> a = dstar_operator(d_operator(u, geom), geom);
  JetTensor<Ring> b = killing_operator(divergence(u, geom), geom);
  const int w = std::min(a.order(), b.order());
  JetTensor<Ring> out = a.truncated(w);
  out += b.truncated(w);
  return out;
}

// ---------------------------------------------------------------------------
// Ein family
// ---------------------------------------------------------------------------

/// Ein(g) = Ric(g) + kappa R(g) g + Lambda g.
template <class Ring>
JetTensor<Ring> ein_tensor(const ChartGeometry<Ring>& geom, double kappa, double lambda) {
  const int n = geom.dim();
  check_ein_kappa_guards(n, kappa);
  const int w = geom.curvature_order();
  const JetTensor<Ring> g = geom.g.truncated(w);
  JetTensor<Ring> out = geom.ric;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out.at(i, j) += (geom.scal * Ring{kappa} + TaylorJet<Ring>::constant(n, w, Ring{lambda})) *
                      g.at(i, j);
  return out;
}

/// Kulkarni-Nomizu product on rank-2 jets:
/// (a kn b)_{ijkl} = a_{ik} b_{jl} + a_{jl} b_{ik} - a_{il} b_{jk} - a_{jk} b_{il}.
template <class Ring>
JetTensor<Ring> kulkarni_nomizu_jets(const JetTensor<Ring>& a, const JetTensor<Ring>& b) {
  const int n = a.dim();
  const int w = std::min(a.order(), b.order());
  const JetTensor<Ring> at = a.truncated(w);
  const JetTensor<Ring> bt = b.truncated(w);
  JetTensor<Ring> out(n, 4, w);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          out.at(i, j, k, l) = at.at(i, k) * bt.at(j, l) + at.at(j, l) * bt.at(i, k) -
                               at.at(i, l) * bt.at(j, k) - at.at(j, k) * bt.at(i, l);
  return out;
}

/// g-trace of a rank-4 tensor over its second and fourth slots.
template <class Ring>
JetTensor<Ring> trace_24(const JetTensor<Ring>& t, const ChartGeometry<Ring>& geom) {
  const int n = t.dim();
  const int w = std::min(t.order(), geom.g_inv.order());
  const JetTensor<Ring> gi = geom.g_inv.truncated(w);
  JetTensor<Ring> out(n, 2, w);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      TaylorJet<Ring> s(JetLayout::get(n, w));
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) s += gi.at(j, l) * t.at(i, j, k, l).truncated(w);
      out.at(i, k) = s;
    }
  return out;
}

/// Rank-4 curvature-type prescription tensor:
/// script-Ein(g) = Riem(g) + g kn (a Ric(g) + b R(g) g + c g) with
/// b = (kappa (1 + a(n-2)) - a) / (2(n-1)) and c = (1 + (n-2) a) Lambda / (2(n-1)).
template <class Ring>
JetTensor<Ring> ein4_tensor(const ChartGeometry<Ring>& geom, double a, double kappa,
                            double lambda) {
  const int n = geom.dim();
  check_ein_kappa_guards(n, kappa);
  const double b = (kappa * (1.0 + a * (n - 2.0)) - a) / (2.0 * (n - 1.0));
  const double c = (1.0 + (n - 2.0) * a) * lambda / (2.0 * (n - 1.0));
  const int w = geom.curvature_order();
  const JetTensor<Ring> g = geom.g.truncated(w);

  JetTensor<Ring> inner(n, 2, w);  // a Ric + b R g + c g
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      inner.at(i, j) = geom.ric.at(i, j) * Ring{a} +
                       (geom.scal * Ring{b} + TaylorJet<Ring>::constant(n, w, Ring{c})) * g.at(i, j);

  JetTensor<Ring> out = kulkarni_nomizu_jets(g, inner);
  out += geom.riem;
  return out;
}

/// Contravariant Ricci: components g^{ik} g^{jl} Ric_{kl}.
template <class Ring>
JetTensor<Ring> ricci_contravariant(const ChartGeometry<Ring>& geom) {
  return raise_both(geom.ric, geom);
}

/// bar-B_g(R) = B_g(g R g) for a contravariant symmetric 2-tensor R.
template <class Ring>
JetTensor<Ring> bianchi_contravariant(const JetTensor<Ring>& r_up,
                                      const ChartGeometry<Ring>& geom) {
  const int n = r_up.dim();
  const int w = std::min(r_up.order(), geom.g.order());
  const JetTensor<Ring> g = geom.g.truncated(w);
  JetTensor<Ring> lowered(n, 2, w);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      TaylorJet<Ring> s(JetLayout::get(n, w));
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) s += g.at(i, a) * r_up.at(a, b).truncated(w) * g.at(b, j);
      lowered.at(i, j) = s;
    }
  return bianchi_operator(lowered, geom);
}

// ---------------------------------------------------------------------------
// Gauge operators on one-forms
// ---------------------------------------------------------------------------

enum class GaugeVariant { Ricci, Contra, Ein };

/// Second-order gauge operator P acting on a one-form, assembled from its
/// defining pieces (B_g after the Killing operator plus the curvature term).
template <class Ring>
JetTensor<Ring> gauge_operator(const JetTensor<Ring>& omega, const ChartGeometry<Ring>& geom,
                               GaugeVariant variant, double kappa = 0.0, double lambda = 0.0) {
  JetTensor<Ring> bl = bianchi_operator(killing_operator(omega, geom), geom);
  JetTensor<Ring> curv;
  switch (variant) {
    case GaugeVariant::Ricci:
      curv = endo_apply(geom.ric, omega, geom);
      break;
    case GaugeVariant::Contra:
      curv = endo_apply(geom.ric, omega, geom);
      curv.scale(Ring{-1.0});
      break;
    case GaugeVariant::Ein:
      curv = endo_apply(ein_tensor(geom, kappa, lambda), omega, geom);
      break;
  }
  const int w = std::min(bl.order(), curv.order());
  JetTensor<Ring> out = bl.truncated(w);
  out += curv.truncated(w);
  return out;
}

// ---------------------------------------------------------------------------
// Transport terms of the Bianchi-operator linearizations
// ---------------------------------------------------------------------------

/// [T(g,R) h]_j = (1/2)(nabla^k R^l_j + nabla^l R^k_j - nabla_j R^{kl}) h_{kl}.
template <class Ring>
JetTensor<Ring> curvature_transport_term(const JetTensor<Ring>& r, const JetTensor<Ring>& h,
                                         const ChartGeometry<Ring>& geom) {
  const int n = r.dim();
  const JetTensor<Ring> dr = covariant_derivative(r, geom);  // (a, b, j) = nabla_a R_{bj}
  const int w = std::min(dr.order(), h.order());
  const JetTensor<Ring> gi = geom.g_inv.truncated(w);
  const JetTensor<Ring> ht = h.truncated(w);
  JetTensor<Ring> out(n, 1, w);
  for (int j = 0; j < n; ++j) {
    TaylorJet<Ring> s(JetLayout::get(n, w));
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l)
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) {
            // nabla^k R^l_j h_{kl} + nabla^l R^k_j h_{kl} - nabla_j R^{kl} h_{kl}
            const TaylorJet<Ring> gka_glb = gi.at(k, a) * gi.at(l, b);
            s += gka_glb * (dr.at(a, b, j).truncated(w) + dr.at(b, a, j).truncated(w) -
                            dr.at(j, a, b).truncated(w)) *
                 ht.at(k, l);
          }
    s.scale(Ring{0.5});
    out.at(j) = s;
  }
  return out;
}

/// T(E,h)_j = (1/2)(nabla_k E_{jl} + nabla_l E_{kj} - nabla_j E_{kl}) h^{kl}.
template <class Ring>
JetTensor<Ring> prescription_transport_term(const JetTensor<Ring>& e, const JetTensor<Ring>& h,
                                            const ChartGeometry<Ring>& geom) {
  const int n = e.dim();
  const JetTensor<Ring> de = covariant_derivative(e, geom);
  const int w = std::min(de.order(), h.order());
  const JetTensor<Ring> hup = raise_both(h.truncated(w), geom);
  JetTensor<Ring> out(n, 1, w);
  for (int j = 0; j < n; ++j) {
    TaylorJet<Ring> s(JetLayout::get(n, w));
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l)
        s += (de.at(k, j, l).truncated(w) + de.at(l, k, j).truncated(w) -
              de.at(j, k, l).truncated(w)) *
             hup.at(k, l);
    s.scale(Ring{0.5});
    out.at(j) = s;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tagged dispatch (request-driven callers: CLI suites, serialization)
// ---------------------------------------------------------------------------

/// Applies the tagged operator; `input` must have the rank the operator
/// expects (2 for tensor operators, 1 for one-form operators; metric-only
/// tags ignore it). Scalar-valued results come back as rank-0 tensors.
template <class Ring>
JetTensor<Ring> apply_operator(OperatorTag tag, const JetTensor<Ring>& input,
                               const ChartGeometry<Ring>& geom, const OperatorParams& p = {}) {
  auto as_rank0 = [&](const TaylorJet<Ring>& f) {
    JetTensor<Ring> t(geom.dim(), 0, f.order());
    t.at() = f;
    return t;
  };
  switch (tag) {
    case OperatorTag::RoughLaplacian:
      return rough_laplacian(input, geom);
    case OperatorTag::Lichnerowicz:
      return lichnerowicz(input, geom);
    case OperatorTag::Hodge:
      require(input.rank() == 1, "hodge: one-form input expected");
      return hodge_laplacian(input, geom);
    case OperatorTag::Divergence:
      require(input.rank() == 2, "divergence: rank-2 input expected");
      return divergence(input, geom);
    case OperatorTag::KillingSym:
      require(input.rank() == 1, "killing: one-form input expected");
      return killing_operator(input, geom);
    case OperatorTag::Codifferential:
      require(input.rank() == 1, "codifferential: one-form input expected");
      return as_rank0(codifferential(input, geom));
    case OperatorTag::Bianchi:
      require(input.rank() == 2, "bianchi: rank-2 input expected");
      return bianchi_operator(input, geom);
    case OperatorTag::GenBianchi:
      require(input.rank() == 2, "gen_bianchi: rank-2 input expected");
      check_ein_kappa_guards(geom.dim(), p.kappa);
      return gen_bianchi_operator(input, geom, p.kappa);
    case OperatorTag::D:
      require(input.rank() == 2, "d operator: rank-2 input expected");
      return d_operator(input, geom);
    case OperatorTag::DStar:
      require(input.rank() == 3, "d* operator: rank-3 input expected");
      return dstar_operator(input, geom);
    case OperatorTag::Kodaira:
      require(input.rank() == 2, "kodaira: rank-2 input expected");
      return kodaira_laplacian(input, geom);
    case OperatorTag::Ein:
      return ein_tensor(geom, p.kappa, p.lambda);
    case OperatorTag::Ein4:
      return ein4_tensor(geom, p.a, p.kappa, p.lambda);
    case OperatorTag::RicContra:
      return ricci_contravariant(geom);
    case OperatorTag::BianchiContra:
      require(input.rank() == 2, "bianchi_contra: rank-2 input expected");
      return bianchi_contravariant(input, geom);
  }
  fail("apply_operator: unknown tag");
}

}  // namespace ricciforge
