// SPDX-License-Identifier: MIT
#include <doctest.h>

#include <cmath>

#include "ricciforge/solver.hpp"

using namespace ricciforge;

TEST_SUITE_BEGIN("solver");

TEST_CASE("residual vanishes at the trivial solution") {
  const TorusGrid grid(2, 16);
  const Sym2Field zero(grid);
  for (const double kappa : {0.0, 0.1}) {
    const Sym2Field r = ein_residual(zero, zero, kappa, 1.0);
    CHECK(r.sup_norm() < 1e-12);
  }
}

TEST_CASE("residual at h = 0 matches a term-by-term assembly") {
  const TorusGrid grid(2, 16);
  const GridGeometry flat = flat_geometry(grid);
  CounterRng rng(3);
  const Sym2Field e = random_sym2_field(grid, rng, 3);
  const double kappa = 0.1, lambda = 1.0;
  const Sym2Field lhs = ein_residual(Sym2Field(grid), e, kappa, lambda);

  // independent assembly: -e + (kappa Tr e / (1 + kappa n)) delta
  //                       - (1/lambda) L(scriptB(lambda delta + e))
  const int n = grid.dim;
  Sym2Field ein_plus_e = e;
  for (int i = 0; i < n; ++i) {
    double* c = ein_plus_e.comp(sym2_index(n, i, i));
    for (std::size_t node = 0; node < grid.nodes(); ++node) c[node] += lambda;
  }
  OneFormField omega = grid_gen_bianchi(ein_plus_e, flat, kappa);
  omega.scale(1.0 / lambda);
  const Sym2Field gauge = grid_killing(omega, flat);
  const ScalarField tre = grid_trace(e, flat);
  double worst = 0.0;
  for (std::size_t node = 0; node < grid.nodes(); ++node)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const double expect = -e.at(i, j, node) +
                              (kappa * tre.at(node) / (1.0 + kappa * n)) * (i == j ? 1.0 : 0.0) -
                              gauge.at(i, j, node);
        worst = std::max(worst, std::abs(lhs.at(i, j, node) - expect));
      }
  CHECK(worst < 1e-12);
}

TEST_CASE("linearization multipliers: pinned values") {
  const TorusGrid grid(2, 16);
  // kappa = 0, lambda = 1: multiplier (|k|^2 + 2)/2 on every component; 1 at k=0
  const MultiplierOperator lin = linearization_at_zero(grid, 0.0, 1.0);
  CHECK(lin.scalar_form());
  CHECK(lin.mode_eigenvalues({0, 0, 0})[0] == doctest::Approx(1.0));
  CHECK(lin.mode_eigenvalues({1, 0, 0})[0] == doctest::Approx(1.5));
  CHECK(lin.mode_eigenvalues({1, 1, 0})[0] == doctest::Approx(2.0));

  // kappa = 0.1, n = 2, lambda = 1: the trace-free eigenvalue at |k|^2 = 1 is 3/2
  const MultiplierOperator lin2 = linearization_at_zero(grid, 0.1, 1.0);
  CHECK(!lin2.scalar_form());
  const auto evs = lin2.mode_eigenvalues({1, 0, 0});
  double closest = 1e9;
  for (const double e : evs) closest = std::min(closest, std::abs(e - 1.5));
  CHECK(closest < 1e-12);
}

TEST_CASE("linearization against finite differences of the residual") {
  const TorusGrid grid(2, 16);
  CounterRng rng(7);
  for (const double kappa : {0.0, 0.1}) {
    const double lambda = 1.0;
    const MultiplierOperator lin = linearization_at_zero(grid, kappa, lambda);
    Sym2Field h = random_sym2_field(grid, rng, 3);
    h.scale(1.0 / std::max(1.0, h.sup_norm()));
    const Sym2Field zero(grid);
    const FieldStorage lh = lin.apply(h);

    double prev_err = -1.0;
    for (const double t : {1e-4, 1e-5}) {
      Sym2Field th = h;
      th.scale(t);
      const Sym2Field ft = ein_residual(th, zero, kappa, lambda);
      double err = 0.0;
      for (std::size_t i = 0; i < ft.v.size(); ++i)
        err = std::max(err, std::abs(ft.v[i] / t - lh.v[i]));
      if (prev_err > 0.0) {
        // slope O(t): one decade in t buys about a decade in error
        CHECK(err < 0.2 * prev_err);
      }
      CHECK(err < 10.0 * t);
      prev_err = err;
    }
  }
}

TEST_CASE("quadratic remainder: residual minus linear part scales like eps^2") {
  const TorusGrid grid(2, 32);
  const MultiplierOperator lin = linearization_at_zero(grid, 0.0, 1.0);
  double prev = -1.0;
  for (const double eps : {1e-2, 1e-3, 1e-4}) {
    const Sym2Field h = cosine_mode_prescription(grid, eps);
    const Sym2Field f = ein_residual(h, Sym2Field(grid), 0.0, 1.0);
    const FieldStorage lh = lin.apply(h);
    double err = 0.0;
    for (std::size_t i = 0; i < f.v.size(); ++i)
      err = std::max(err, std::abs(f.v[i] - lh.v[i]));
    if (prev > 0.0) {
      const double slope = std::log10(prev / err);
      CHECK(slope > 1.7);  // quadratic: two decades per decade of eps
      CHECK(slope < 2.3);
    }
    prev = err;
  }
}

TEST_CASE("trivial prescription solves immediately") {
  SolveConfig cfg;
  cfg.dim = 2;
  cfg.n_axis = 16;
  cfg.prescription = Sym2Field(cfg.grid());
  const SolveReport rep = newton_chord_solve(cfg);
  CHECK(rep.accepted());
  CHECK(rep.h.sup_norm() == 0.0);
  CHECK(rep.residual_history.size() == 1);
}

TEST_CASE("newton-chord solve at N=32 with direct and gauge verification") {
  SolveConfig cfg;
  cfg.dim = 2;
  cfg.n_axis = 32;
  cfg.kappa = 0.0;
  cfg.lambda = 1.0;
  cfg.prescription = cosine_mode_prescription(cfg.grid(), 1e-2);
  const SolveReport rep = newton_chord_solve(cfg);
  CHECK(rep.accepted());
  CHECK(rep.residual_history.back() < 1e-10);
  CHECK(rep.gauge_sup_norm < 1e-9);
  CHECK(rep.direct_check_error < 1e-9);
  CHECK(rep.projection_coefficients.empty());
  CHECK(rep.h_sup_norm == doctest::Approx(2.0 / 3.0 * 1e-2).epsilon(0.05));

  // residual history decreases after the second iteration
  for (std::size_t i = 2; i < rep.residual_history.size(); ++i)
    CHECK(rep.residual_history[i] <= rep.residual_history[i - 1] * (1.0 + 1e-9));

  // full-Newton cross-check mode lands on the same solution
  SolveConfig cfg2 = cfg;
  cfg2.mode = SolveConfig::Mode::FullNewtonFd;
  const SolveReport rep2 = newton_chord_solve(cfg2);
  CHECK(rep2.accepted());
  double diff = 0.0;
  for (std::size_t i = 0; i < rep.h.v.size(); ++i)
    diff = std::max(diff, std::abs(rep.h.v[i] - rep2.h.v[i]));
  CHECK(diff < 1e-9);
}

TEST_CASE("translation equivariance of the solve") {
  SolveConfig cfg;
  cfg.dim = 2;
  cfg.n_axis = 32;
  cfg.prescription = cosine_mode_prescription(cfg.grid(), 1e-2);
  const SolveReport rep = newton_chord_solve(cfg);

  // shift e by 8 nodes along axis 0 and solve again
  const TorusGrid grid = cfg.grid();
  SolveConfig shifted = cfg;
  shifted.prescription = Sym2Field(grid);
  const int shift = 8;
  for (std::size_t node = 0; node < grid.nodes(); ++node) {
    auto idx = grid.node_indices(node);
    idx[0] = (idx[0] + shift) % grid.n_axis;
    const std::size_t src = grid.node_at(idx);
    for (int c = 0; c < shifted.prescription.comps; ++c)
      shifted.prescription.comp(c)[node] = cfg.prescription.comp(c)[src];
  }
  const SolveReport rep2 = newton_chord_solve(shifted);
  CHECK(rep2.accepted());
  double worst = 0.0;
  for (std::size_t node = 0; node < grid.nodes(); ++node) {
    auto idx = grid.node_indices(node);
    idx[0] = (idx[0] + shift) % grid.n_axis;
    const std::size_t src = grid.node_at(idx);
    for (int c = 0; c < rep.h.comps; ++c)
      worst = std::max(worst, std::abs(rep2.h.comp(c)[node] - rep.h.comp(c)[src]));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("projection: trivial for nonzero lambda, zero-mode otherwise") {
  const TorusGrid grid(2, 16);
  CHECK(solver_projection(grid, 0.0, 1.0).trivial);
  // with a vanishing constant term both blocks keep their zero-mode kernel
  const SolverProjection proj = solver_projection(grid, 0.0, 0.0);
  CHECK(!proj.trivial);
  CHECK(proj.basis.size() == 3);
  CounterRng rng(19);
  const Sym2Field u = random_sym2_field(grid, rng, 3);
  const Sym2Field pu = proj(u);
  const auto means = component_means(u);
  for (int c = 0; c < u.comps; ++c)
    for (std::size_t node = 0; node < grid.nodes(); ++node)
      CHECK(pu.comp(c)[node] == doctest::Approx(means[c]).epsilon(1e-12));
}

TEST_CASE("gauge check of the trivial solution and the injectivity witness") {
  const TorusGrid grid(2, 16);
  const Sym2Field zero(grid);
  const GaugeCheck check = gauge_verify(zero, zero, 0.0, 1.0);
  CHECK(check.sup_norm < 1e-13);
  CHECK(check.min_gauge_multiplier == doctest::Approx(1.0));  // lambda at k = 0
}

TEST_CASE("config validation rejects excluded parameters") {
  SolveConfig cfg;
  cfg.dim = 2;
  cfg.n_axis = 16;
  cfg.prescription = Sym2Field(cfg.grid());
  cfg.kappa = -0.5;  // -1/n for n=2
  CHECK_THROWS_AS(newton_chord_solve(cfg), Error);
  cfg.kappa = 0.0;
  cfg.lambda = 0.0;  // degenerate Ein of the background
  CHECK_THROWS_AS(newton_chord_solve(cfg), Error);
  cfg.lambda = -0.5;  // |k|^2 + 2 lambda vanishes at |k|^2 = 1: gauge multiplier zero
  CHECK_THROWS_AS(newton_chord_solve(cfg), Error);
}

TEST_CASE("divergence is reported honestly for oversized prescriptions") {
  SolveConfig cfg;
  cfg.dim = 2;
  cfg.n_axis = 16;
  cfg.max_iterations = 25;
  cfg.prescription = cosine_mode_prescription(cfg.grid(), 2.5);  // far beyond the basin
  const SolveReport rep = newton_chord_solve(cfg);
  CHECK(!rep.accepted());
  CHECK((rep.verdict == "diverged" || rep.verdict == "positivity_lost" ||
         rep.verdict == "max_iterations"));
}

TEST_CASE("linear response prediction matches the small-eps solve") {
  const TorusGrid grid(2, 32);
  const double eps = 1e-3;
  SolveConfig cfg;
  cfg.dim = 2;
  cfg.n_axis = 32;
  cfg.prescription = cosine_mode_prescription(grid, eps);
  const SolveReport rep = newton_chord_solve(cfg);
  const double prediction = linear_response_prediction(grid, 0.0, 1.0, cfg.prescription);
  CHECK(rep.h_sup_norm / prediction == doctest::Approx(1.0).epsilon(5e-3));
}

TEST_SUITE_END();
