// SPDX-License-Identifier: MIT
//
// Acceptance suite: one pass/fail line per criterion, exit status equals the
// number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "ricciforge/bounds.hpp"
#include "ricciforge/identities.hpp"
#include "ricciforge/linalg.hpp"
#include "ricciforge/solver.hpp"

using namespace ricciforge;

namespace {

int g_failures = 0;
int g_index = 0;

void report(const std::string& name, bool pass, const std::string& detail) {
  ++g_index;
  if (!pass) ++g_failures;
  std::printf("%s [%d/8] %s — %s\n", pass ? "PASS" : "FAIL", g_index, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Regression pins for the solved fields (sup norms), recorded from the first
// accepted run of this suite; derived values, not externally given.
constexpr double kPinnedHSupT2Kappa0 = 6.674057625354240e-03;
constexpr double kPinnedHSupT2Kappa01 = 6.256879587118842e-03;
constexpr double kPinnedHSupT3Kappa0 = 6.672242013819251e-03;
constexpr double kPinRelTol = 1e-6;

bool check_pin(double value, double pinned, std::string& note) {
  if (pinned < 0.0) {
    note += " [UNPINNED value " + std::to_string(value) + "]";
    return false;
  }
  const bool ok = std::abs(value - pinned) <= kPinRelTol * std::abs(pinned);
  if (!ok) note += " [regression drift: " + std::to_string(value) + " vs pinned " +
                   std::to_string(pinned) + "]";
  return ok;
}

// -- criterion 1: identity suite ---------------------------------------------

void criterion_identity_suite() {
  const auto t0 = std::chrono::steady_clock::now();
  bool pass = true;
  std::string detail;
  double worst = 0.0;
  for (const int n : {2, 3}) {
    for (int s = 0; s < 20; ++s) {
      CounterRng rng(1, 16 * static_cast<std::uint64_t>(s) + n);
      const auto g = charts::random_metric(n, 6, rng);
      const auto h = charts::random_sym2(n, 6, rng);
      const auto u = charts::random_sym2(n, 6, rng);
      const auto e = charts::random_sym2(n, 6, rng);
      const double kappa = rng.range(-0.2, 0.5);
      const auto geom = build_geometry(g);
      worst = std::max(worst, bianchi_ricci_residual(geom));
      worst = std::max(worst, gen_bianchi_ein_residual(geom, kappa, rng.range(-1.0, 1.0)));
      worst = std::max(worst, weitzenbock_residual(geom, u));
      worst = std::max(worst, dric_residual(g, h));
      worst = std::max(worst, dric_contra_residual(g, h));
      worst = std::max(worst, dgen_bianchi_residual(g, h, e, kappa));
    }
  }
  const double elapsed = seconds_since(t0);
  pass = worst < 1e-9 && elapsed < 30.0;
  char buf[160];
  std::snprintf(buf, sizeof buf, "max relative residual %.3e (tol 1e-9), runtime %.1fs (< 30s)",
                worst, elapsed);
  report("identity suite: Bianchi, Weitzenboeck, linearizations", pass, buf);
}

// -- criterion 2: parallel-Ricci commutations ---------------------------------

void criterion_commutations() {
  CounterRng rng(2, 1);
  bool pass = true;
  std::string detail;

  const auto flat = build_geometry(charts::flat_metric(3, 6));
  const auto rep_flat = parallel_ricci_commutations(flat, charts::random_sym2(3, 6, rng));
  pass = pass && rep_flat.div_residual < 1e-10 && rep_flat.trace_residual < 1e-10;

  const auto prod = build_geometry(charts::product_metric({{2, 1.0}, {2, 2.0}}, 5));
  const auto rep_prod = parallel_ricci_commutations(prod, charts::random_sym2(4, 5, rng));
  pass = pass && rep_prod.ricci_parallel_gate < 1e-10 && rep_prod.div_residual < 1e-10 &&
         rep_prod.trace_residual < 1e-10;

  const auto generic = build_geometry(charts::random_metric(3, 6, rng));
  const auto rep_gen = parallel_ricci_commutations(generic, charts::random_sym2(3, 6, rng));
  pass = pass && rep_gen.div_residual > 1e-3;

  char buf[200];
  std::snprintf(buf, sizeof buf,
                "flat %.2e, product %.2e (tol 1e-10); generic control %.2e (> 1e-3)",
                std::max(rep_flat.div_residual, rep_flat.trace_residual),
                std::max(rep_prod.div_residual, rep_prod.trace_residual), rep_gen.div_residual);
  report("parallel-Ricci commutations with negative control", pass, buf);
}

// -- criterion 3: projected-operator spectrum on T^2 --------------------------

void criterion_spectrum() {
  const auto t0 = std::chrono::steady_clock::now();
  const TorusGrid grid(2, 8);
  const int d = sym2_count(grid.dim);
  const MultiplierOperator lap = laplacian_multiplier(grid, d);
  bool pass = true;
  double worst = 0.0;
  for (const double c : {0.5, 1.0, 2.0}) {
    const auto matrix = dense_operator_matrix(
        [&](const Sym2Field& u) { return apply_shifted(lap, c, u); }, grid);
    const double dense = linalg::min_eigenvalue(matrix, d * static_cast<int>(grid.nodes()));
    const double expected = std::min(c, 1.0);
    worst = std::max(worst, std::abs(dense - expected));
    pass = pass && std::abs(dense - expected) < 1e-8;
  }
  const double elapsed = seconds_since(t0);
  pass = pass && elapsed < 10.0;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "dense vs min(c,1) max deviation %.2e (tol 1e-8), runtime %.1fs (< 10s)", worst,
                elapsed);
  report("projected-operator spectrum equals min(c, 1) on T^2", pass, buf);
}

// -- criterion 4: pointwise eigenvalue bound ----------------------------------

void criterion_eigenvalue_bound() {
  bool pass = true;
  double worst_margin = 1e300;
  for (const int n : {3, 4}) {
    for (int s = 0; s < 50; ++s) {
      CounterRng rng(4, 100 * static_cast<std::uint64_t>(n) + s);
      const Tensor4Value riem = random_algebraic_curvature(n, rng);
      const PointCurvatureData data =
          PointCurvatureData::from_riemann(SymMatrixValue::identity(n), riem);
      const FujitaniReport rep = fujitani_check(data);
      worst_margin = std::min(worst_margin, rep.margin);
      pass = pass && rep.exact_min >= rep.bound - 1e-10;
    }
  }
  double equality_gap = 0.0;
  for (const int n : {3, 4}) {
    const FujitaniReport rep = fujitani_check(constant_curvature_data(n, 1.0));
    equality_gap = std::max(equality_gap, std::abs(rep.margin));
    equality_gap = std::max(equality_gap, std::abs(rep.exact_min - n));
    pass = pass && std::abs(rep.margin) < 1e-10 && std::abs(rep.exact_min - n) < 1e-10;
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "100 random samples hold (worst margin %.3e >= -1e-10); equality gap %.2e",
                worst_margin, equality_gap);
  report("pointwise eigenvalue bound with tight constant-curvature case", pass, buf);
}

// -- criterion 5: prescribed-curvature solves ---------------------------------

void criterion_solves() {
  const auto t0 = std::chrono::steady_clock::now();
  bool pass = true;
  std::string note;

  auto run = [&](int dim, int N, double kappa, double pinned, const char* tag) {
    SolveConfig cfg;
    cfg.dim = dim;
    cfg.n_axis = N;
    cfg.kappa = kappa;
    cfg.lambda = 1.0;
    cfg.prescription = cosine_mode_prescription(cfg.grid(), 1e-2);
    const SolveReport rep = newton_chord_solve(cfg);
    const bool ok = rep.accepted() && rep.residual_history.back() < 1e-10 &&
                    rep.iterations <= 40 && rep.gauge_sup_norm < 1e-9 &&
                    rep.direct_check_error < 1e-9;
    if (!ok)
      note += std::string(" [") + tag + " verdict " + rep.verdict + " residual " +
              std::to_string(rep.residual_history.back()) + " gauge " +
              std::to_string(rep.gauge_sup_norm) + " direct " +
              std::to_string(rep.direct_check_error) + "]";
    bool pin_ok = check_pin(rep.h_sup_norm, pinned, note);
    pass = pass && ok && pin_ok;
  };

  run(2, 64, 0.0, kPinnedHSupT2Kappa0, "T2 kappa=0");
  run(2, 64, 0.1, kPinnedHSupT2Kappa01, "T2 kappa=0.1");
  run(3, 16, 0.0, kPinnedHSupT3Kappa0, "T3 kappa=0");

  const double elapsed = seconds_since(t0);
  pass = pass && elapsed < 60.0;
  char buf[320];
  std::snprintf(buf, sizeof buf,
                "three solves converged with gauge and direct checks%s, runtime %.1fs (< 60s)",
                note.c_str(), elapsed);
  report("flat-torus prescribed-curvature solves", pass, buf);
}

// -- criterion 6: linear response ----------------------------------------------

void criterion_linear_response() {
  const TorusGrid grid(2, 64);
  bool pass = true;
  double prev_dev = -1.0;
  std::string note;
  for (const double eps : {1e-2, 1e-3, 1e-4}) {
    SolveConfig cfg;
    cfg.dim = 2;
    cfg.n_axis = 64;
    cfg.prescription = cosine_mode_prescription(grid, eps);
    const SolveReport rep = newton_chord_solve(cfg);
    const double prediction =
        linear_response_prediction(grid, 0.0, 1.0, cfg.prescription) / eps;
    const double response = rep.h_sup_norm / eps;
    const double dev = std::abs(response - prediction) / prediction;
    pass = pass && rep.accepted() && dev < 0.05;
    if (prev_dev >= 0.0) pass = pass && dev <= std::max(0.3 * prev_dev, 1e-6);
    char frag[80];
    std::snprintf(frag, sizeof frag, " eps=%.0e dev=%.2e", eps, dev);
    note += frag;
    prev_dev = dev;
  }
  report("linear response tracks the multiplier inverse (5%, shrinking)", pass, note);
}

// -- criterion 7: adjointness on the flat torus --------------------------------

void criterion_adjointness() {
  const TorusGrid grid(2, 32);
  const GridGeometry flat = flat_geometry(grid);
  CounterRng rng(7, 1);
  bool pass = true;
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const OneFormField w = random_one_form_field(grid, rng, 5);
    const Sym2Field u = random_sym2_field(grid, rng, 5);
    const Tensor3Field t = random_tensor3_field(grid, rng, 5);
    const double a1 = l2_inner(grid_killing(w, flat), u);
    const double b1 = l2_inner(w, grid_divergence(u, flat));
    const double a2 = l2_inner(grid_d_operator(u, flat), t);
    const double b2 = l2_inner(u, grid_dstar_operator(t, flat));
    worst = std::max(worst, std::abs(a1 - b1) / std::max(1.0, std::abs(a1)));
    worst = std::max(worst, std::abs(a2 - b2) / std::max(1.0, std::abs(a2)));
  }
  pass = worst < 1e-10;
  char buf[120];
  std::snprintf(buf, sizeof buf, "10 random band-limited pairs, worst defect %.2e (tol 1e-10)",
                worst);
  report("L2 adjointness of the first-order operator pairs", pass, buf);
}

// -- criterion 8: rank-4 trace identity ----------------------------------------

void criterion_trace_identity() {
  bool pass = true;
  double worst = 0.0;
  for (const int n : {2, 3}) {
    for (int s = 0; s < 10; ++s) {
      CounterRng rng(8, 64 * static_cast<std::uint64_t>(n) + s);
      const auto g = charts::random_metric(n, 6, rng);
      const auto geom = build_geometry(g);
      const double a = rng.range(-1.0, 1.0);
      const double kappa = rng.range(-0.2, 0.5);
      const double lambda = rng.range(-1.0, 1.0);
      worst = std::max(worst, trace_ein4_residual(geom, a, kappa, lambda));
    }
  }
  pass = worst < 1e-11;
  char buf[120];
  std::snprintf(buf, sizeof buf, "20 random charts, max relative residual %.3e (tol 1e-11)",
                worst);
  report("rank-4 prescription-tensor trace identity", pass, buf);
}

}  // namespace

int main() {
  criterion_identity_suite();
  criterion_commutations();
  criterion_spectrum();
  criterion_eigenvalue_bound();
  criterion_solves();
  criterion_linear_response();
  criterion_adjointness();
  criterion_trace_identity();
  std::printf("%d/8 criteria passed\n", 8 - g_failures);
  return g_failures;
}
