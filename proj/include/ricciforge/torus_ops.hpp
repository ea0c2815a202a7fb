// SPDX-License-Identifier: MIT
#pragma once

#include "ricciforge/operator_tags.hpp"
#include "ricciforge/rng.hpp"
#include "ricciforge/torus.hpp"

namespace ricciforge {

/// Pointwise geometry of a grid metric, all derivatives spectral.
/// christoffel is stored packed over the symmetric lower pair:
/// component (k * sym2_count + sym2_index(i,j)).
struct GridGeometry {
  TorusGrid grid;
  Sym2Field metric;
  Sym2Field metric_inv;
  std::vector<double> christoffel;
  bool flat = false;
  bool has_curvature = false;
  std::vector<double> riem;  // lowered R_{lkij}, n^4 components, node-major per comp
  Sym2Field ricci;
  ScalarField scalar;

  double gamma(int k, int i, int j, std::size_t node) const {
    const int d = sym2_count(grid.dim);
    return christoffel[(static_cast<std::size_t>(k) * d + sym2_index(grid.dim, i, j)) *
                           grid.nodes() +
                       node];
  }
  double riemann(int l, int k, int i, int j, std::size_t node) const {
    const int n = grid.dim;
    const std::size_t c = ((static_cast<std::size_t>(l) * n + k) * n + i) * n + j;
    return riem[c * grid.nodes() + node];
  }
};

/// Exact flat geometry (identity metric, zero connection and curvature).
GridGeometry flat_geometry(const TorusGrid& grid);

/// Builds connection and curvature of a grid metric. Requires the metric to
/// be safely positive definite (min eigenvalue > 0.1 at every node); the
/// Riemann tensor is optional since first-order work only needs Christoffels.
GridGeometry build_grid_geometry(const Sym2Field& metric, bool with_riemann = true);

// Generic full-component covariant derivative: input has n^rank components,
// output n^(rank+1) with the derivative slot first.
FieldStorage grid_covariant_derivative(const FieldStorage& t, int rank,
                                       const GridGeometry& geom);

FieldStorage sym2_to_full(const Sym2Field& u);
Sym2Field full_to_sym2(const FieldStorage& f);

ScalarField grid_trace(const Sym2Field& u, const GridGeometry& geom);
OneFormField grid_differential(const ScalarField& f);
OneFormField grid_divergence(const Sym2Field& u, const GridGeometry& geom);
ScalarField grid_codifferential(const OneFormField& w, const GridGeometry& geom);
Sym2Field grid_killing(const OneFormField& w, const GridGeometry& geom);
OneFormField grid_bianchi(const Sym2Field& h, const GridGeometry& geom);
OneFormField grid_gen_bianchi(const Sym2Field& e, const GridGeometry& geom, double kappa);

ScalarField grid_rough_laplacian(const ScalarField& f, const GridGeometry& geom);
OneFormField grid_rough_laplacian(const OneFormField& w, const GridGeometry& geom);
Sym2Field grid_rough_laplacian(const Sym2Field& u, const GridGeometry& geom);
OneFormField grid_hodge(const OneFormField& w, const GridGeometry& geom);

Sym2Field grid_ricci_action(const Sym2Field& u, const GridGeometry& geom);
Sym2Field grid_riemann_action(const Sym2Field& u, const GridGeometry& geom);
Sym2Field grid_lichnerowicz(const Sym2Field& u, const GridGeometry& geom);

Tensor3Field grid_d_operator(const Sym2Field& u, const GridGeometry& geom);
Sym2Field grid_dstar_operator(const Tensor3Field& t, const GridGeometry& geom);

Sym2Field grid_ein(const GridGeometry& geom, double kappa, double lambda);

/// L2 pairing with uniform-grid quadrature (grid sum times cell volume).
/// Symmetric rank-2 fields count off-diagonal components twice, matching the
/// full index sum.
double l2_inner(const ScalarField& a, const ScalarField& b);
double l2_inner(const OneFormField& a, const OneFormField& b);
double l2_inner(const Sym2Field& a, const Sym2Field& b);
double l2_inner(const Tensor3Field& a, const Tensor3Field& b);

/// Band-limited random fields (modes with every |k_a| <= max_mode).
ScalarField random_scalar_field(const TorusGrid& grid, CounterRng& rng, int max_mode);
OneFormField random_one_form_field(const TorusGrid& grid, CounterRng& rng, int max_mode);
Sym2Field random_sym2_field(const TorusGrid& grid, CounterRng& rng, int max_mode);
Tensor3Field random_tensor3_field(const TorusGrid& grid, CounterRng& rng, int max_mode);

/// Tag-driven dispatch over the grid operators, mirroring the chart-level
/// dispatcher. Supply the input field matching the operator's expected rank;
/// metric-only tags need none.
struct GridOperatorInput {
  const ScalarField* scalar = nullptr;
  const OneFormField* one_form = nullptr;
  const Sym2Field* sym2 = nullptr;
  const Tensor3Field* tensor3 = nullptr;
};

struct GridOperatorResult {
  int rank = -1;  // 0 scalar, 1 one-form, 2 symmetric, 3 rank-3, 4 full rank-4
  ScalarField scalar;
  OneFormField one_form;
  Sym2Field sym2;
  Tensor3Field tensor3;
  FieldStorage tensor4;  // n^4 components, row-major slots
};

/// Rank-4 curvature-type prescription tensor on the grid:
/// Riem + g kn (a Ric + b R g + c g) with the trace-normalizing b, c.
FieldStorage grid_ein4(const GridGeometry& geom, double a, double kappa, double lambda);

GridOperatorResult apply_operator_grid(OperatorTag tag, const GridOperatorInput& input,
                                       const GridGeometry& geom,
                                       const OperatorParams& params = {});

}  // namespace ricciforge
