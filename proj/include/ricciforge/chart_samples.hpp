// SPDX-License-Identifier: MIT
#pragma once

#include <vector>

#include "ricciforge/jet_tensor.hpp"
#include "ricciforge/rng.hpp"

namespace ricciforge {

/// Sample chart metrics with known geometry, plus seeded random jets.
/// All jets are centered at the chart origin.
namespace charts {

inline JetTensor<double> flat_metric(int n, int order) {
  JetTensor<double> g(n, 2, order);
  for (int i = 0; i < n; ++i) g.at(i, i)[0] = 1.0;
  return g;
}

/// Stereographic round metric of constant sectional curvature K > 0:
/// g = (4/K) delta / (1 + |x|^2)^2.
inline JetTensor<double> sphere_metric(int n, int order, double curvature = 1.0) {
  Jet s = Jet::constant(n, order, 0.0);
  for (int a = 0; a < n; ++a) {
    const Jet xa = Jet::coordinate(n, order, a);
    s += xa * xa;
  }
  Jet q = s;
  q[0] += 1.0;
  const Jet f = recip(q * q) * (4.0 / curvature);
  JetTensor<double> g(n, 2, order);
  for (int i = 0; i < n; ++i) g.at(i, i) = f;
  return g;
}

/// Ball-model metric of constant sectional curvature -1: g = 4 delta / (1 - |x|^2)^2.
inline JetTensor<double> hyperbolic_metric(int n, int order) {
  Jet s = Jet::constant(n, order, 0.0);
  for (int a = 0; a < n; ++a) {
    const Jet xa = Jet::coordinate(n, order, a);
    s += xa * xa;
  }
  Jet q = -s;
  q[0] += 1.0;
  const Jet f = recip(q * q) * 4.0;
  JetTensor<double> g(n, 2, order);
  for (int i = 0; i < n; ++i) g.at(i, i) = f;
  return g;
}

/// Conformally flat chart e^{2 x_1} delta.
inline JetTensor<double> exponential_metric(int n, int order) {
  const Jet f = exp(Jet::coordinate(n, order, 0) * 2.0);
  JetTensor<double> g(n, 2, order);
  for (int i = 0; i < n; ++i) g.at(i, i) = f;
  return g;
}

struct Block {
  int dim;
  double curvature;  // 0 gives a flat block
};

/// Block-diagonal product of constant-curvature factors; Ricci-parallel by
/// construction (each factor is Einstein and the blocks do not mix).
inline JetTensor<double> product_metric(const std::vector<Block>& blocks, int order) {
  int n = 0;
  for (const auto& b : blocks) n += b.dim;
  JetTensor<double> g(n, 2, order);
  int offset = 0;
  for (const auto& b : blocks) {
    if (b.curvature == 0.0) {
      for (int i = 0; i < b.dim; ++i) g.at(offset + i, offset + i)[0] = 1.0;
    } else {
      Jet s = Jet::constant(n, order, 0.0);
      for (int a = 0; a < b.dim; ++a) {
        const Jet xa = Jet::coordinate(n, order, offset + a);
        s += xa * xa;
      }
      Jet q = b.curvature > 0.0 ? s : -s;
      q[0] += 1.0;
      const Jet f = recip(q * q) * (4.0 / std::abs(b.curvature));
      for (int i = 0; i < b.dim; ++i) g.at(offset + i, offset + i) = f;
    }
    offset += b.dim;
  }
  return g;
}

/// delta + amplitude * (random polynomial jets with coefficients in [-1, 1]).
/// The default amplitude keeps the base point safely positive definite.
inline JetTensor<double> random_metric(int n, int order, CounterRng& rng,
                                       double amplitude = 0.1) {
  JetTensor<double> g(n, 2, order);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Jet p(JetLayout::get(n, order));
      for (int c = 0; c < p.size(); ++c) p[c] = amplitude * rng.symmetric();
      g.at(i, j) = p;
      if (j != i) g.at(j, i) = p;
    }
  for (int i = 0; i < n; ++i) g.at(i, i)[0] += 1.0;
  return g;
}

inline JetTensor<double> random_sym2(int n, int order, CounterRng& rng, double amplitude = 1.0) {
  JetTensor<double> u(n, 2, order);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Jet p(JetLayout::get(n, order));
      for (int c = 0; c < p.size(); ++c) p[c] = amplitude * rng.symmetric();
      u.at(i, j) = p;
      if (j != i) u.at(j, i) = p;
    }
  return u;
}

inline JetTensor<double> random_one_form(int n, int order, CounterRng& rng,
                                         double amplitude = 1.0) {
  JetTensor<double> w(n, 1, order);
  for (int i = 0; i < n; ++i) {
    Jet p(JetLayout::get(n, order));
    for (int c = 0; c < p.size(); ++c) p[c] = amplitude * rng.symmetric();
    w.at(i) = p;
  }
  return w;
}

inline JetTensor<double> random_tensor3(int n, int order, CounterRng& rng,
                                        double amplitude = 1.0) {
  JetTensor<double> t(n, 3, order);
  for (std::size_t c = 0; c < t.size(); ++c) {
    Jet p(JetLayout::get(n, order));
    for (int i = 0; i < p.size(); ++i) p[i] = amplitude * rng.symmetric();
    t[c] = p;
  }
  return t;
}

/// Torus-mode conformal metric delta * (1 + eps cos(x_1 + phase)) expanded
/// at a chart point; matches the grid metric delta + eps cos(x_1) delta when
/// phase is the node coordinate.
inline JetTensor<double> cosine_mode_metric(int n, int order, double eps, double phase) {
  Jet arg = Jet::coordinate(n, order, 0, phase);
  Jet f = cos(arg) * eps;
  f[0] += 1.0;
  JetTensor<double> g(n, 2, order);
  for (int i = 0; i < n; ++i) g.at(i, i) = f;
  return g;
}

}  // namespace charts
}  // namespace ricciforge
