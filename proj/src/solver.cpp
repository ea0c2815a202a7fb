// SPDX-License-Identifier: MIT
#include "ricciforge/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace ricciforge {

void SolveConfig::validate() const {
  const TorusGrid g = grid();
  require(std::abs(kappa + 1.0 / g.dim) > 1e-12, "solve config: kappa = -1/n is excluded");
  require(std::abs(kappa + 1.0 / (2.0 * (g.dim - 1))) > 1e-12,
          "solve config: kappa = -1/(2(n-1)) is excluded");
  require(std::abs(lambda) > 1e-12, "solve config: Ein of the flat metric is degenerate at lambda = 0");
  require(prescription.grid == g && prescription.comps == sym2_count(g.dim),
          "solve config: prescription shape mismatch");
  require(tolerance_residual > 0 && tolerance_gauge > 0, "solve config: tolerances must be positive");
  require(max_iterations >= 1, "solve config: max_iterations must be positive");

  const MultiplierOperator lin = linearization_at_zero(g, kappa, lambda);
  if (!lin.all_invertible()) {
    const auto k = lin.first_singular_mode();
    fail("solve config: zero linearization multiplier at mode (" + std::to_string(k[0]) + "," +
         std::to_string(k[1]) + "," + std::to_string(k[2]) + "); configuration rejected");
  }
  // gauge operator multipliers (|k|^2 + 2 lambda)/2 on one-forms
  const MultiplierOperator gauge = MultiplierOperator::scalar(
      g, g.dim, [&](const std::array<int, 3>& k) {
        double k2 = 0.0;
        for (int a = 0; a < 3; ++a) k2 += static_cast<double>(k[a]) * k[a];
        return 0.5 * (k2 + 2.0 * lambda);
      });
  if (!gauge.all_invertible()) {
    const auto k = gauge.first_singular_mode();
    fail("solve config: gauge operator has a zero multiplier at mode (" + std::to_string(k[0]) +
         "," + std::to_string(k[1]) + "," + std::to_string(k[2]) + ")");
  }
}

Sym2Field cosine_mode_prescription(const TorusGrid& grid, double eps, int axis) {
  Sym2Field e(grid);
  for (std::size_t node = 0; node < grid.nodes(); ++node) {
    const double c = eps * std::cos(grid.coords(node)[axis]);
    for (int i = 0; i < grid.dim; ++i) e.at(i, i, node) = c;
  }
  return e;
}

Sym2Field SolverProjection::operator()(const Sym2Field& h) const {
  if (trivial) {
    Sym2Field zero(h.grid);
    return zero;
  }
  ZeroModeProjection proj;
  return proj(h);
}

SolverProjection solver_projection(const TorusGrid& grid, double kappa, double lambda) {
  (void)grid;
  (void)kappa;
  SolverProjection p;
  // Scalar block multiplier (1 + 2(n-1)kappa)|k|^2 + 2 lambda and trace-free
  // block |k|^2 + 2 lambda both vanish at k = 0 exactly when lambda = 0.
  p.trivial = std::abs(lambda) > 1e-14;
  if (!p.trivial) {
    KernelProjection kp = lichnerowicz_flat_kernel(grid);
    p.basis = std::move(kp.basis.fields);
  }
  return p;
}

MultiplierOperator linearization_at_zero(const TorusGrid& grid, double kappa, double lambda) {
  const int n = grid.dim;
  require(std::abs(1.0 + kappa * n) > 1e-12, "linearization: kappa = -1/n is excluded");
  const int d = sym2_count(n);
  if (kappa == 0.0) {
    return MultiplierOperator::scalar(grid, d, [&](const std::array<int, 3>& k) {
      double k2 = 0.0;
      for (int a = 0; a < 3; ++a) k2 += static_cast<double>(k[a]) * k[a];
      return 0.5 * k2 + lambda;
    });
  }
  const double trace_hess = (n - 2.0) * kappa / (2.0 * (1.0 + kappa * n));
  const double trace_metric = kappa * lambda / (1.0 + kappa * n);
  return MultiplierOperator::matrix(grid, d, [&, n, d](const std::array<int, 3>& k,
                                                       std::vector<double>& block) {
    double k2 = 0.0;
    for (int a = 0; a < 3; ++a) k2 += static_cast<double>(k[a]) * k[a];
    const double diag = 0.5 * k2 + lambda;
    std::fill(block.begin(), block.end(), 0.0);
    for (int c = 0; c < d; ++c) block[static_cast<std::size_t>(c) * d + c] = diag;
    // trace coupling: + [trace_hess * k_a k_b - trace_metric * delta_ab] tr(h)
    int row = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j, ++row) {
        const double w =
            trace_hess * k[i] * k[j] - (i == j ? trace_metric : 0.0);
        for (int c = 0; c < n; ++c) {
          const int col = sym2_index(n, c, c);
          block[static_cast<std::size_t>(row) * d + col] += w;
        }
      }
  });
}

namespace {

Sym2Field perturbed_metric(const Sym2Field& h) {
  Sym2Field metric = h;
  for (int i = 0; i < h.grid.dim; ++i) {
    double* c = metric.comp(sym2_index(h.grid.dim, i, i));
    for (std::size_t node = 0; node < h.grid.nodes(); ++node) c[node] += 1.0;
  }
  return metric;
}

/// E = Ein(g) + e - (1/2) proj(h) = lambda delta + e - (1/2) proj(h).
Sym2Field prescription_field(const Sym2Field& h, const Sym2Field& e, double lambda,
                             const SolverProjection& proj) {
  Sym2Field E = e;
  for (int i = 0; i < h.grid.dim; ++i) {
    double* c = E.comp(sym2_index(h.grid.dim, i, i));
    for (std::size_t node = 0; node < h.grid.nodes(); ++node) c[node] += lambda;
  }
  if (!proj.trivial) {
    const Sym2Field ph = proj(h);
    for (std::size_t i = 0; i < E.v.size(); ++i) E.v[i] -= 0.5 * ph.v[i];
  }
  return E;
}

Sym2Field ein_residual_impl(const Sym2Field& h, const Sym2Field& e, double kappa, double lambda,
                            const SolverProjection& proj) {
  const TorusGrid grid = h.grid;
  const int n = grid.dim;
  require(std::abs(lambda) > 1e-12, "ein residual: degenerate Ein of the background metric");
  require(std::abs(1.0 + kappa * n) > 1e-12, "ein residual: kappa = -1/n is excluded");

  const Sym2Field metric = perturbed_metric(h);
  const GridGeometry geom = build_grid_geometry(metric, /*with_riemann=*/false);
  const GridGeometry flat = flat_geometry(grid);

  const Sym2Field E = prescription_field(h, e, lambda, proj);
  const ScalarField trE = grid_trace(E, geom);

  // gauge term: L_g [ Ein_g^{-1} scriptB_{g+h}(E) ], background g flat
  OneFormField omega = grid_gen_bianchi(E, geom, kappa);
  omega.scale(1.0 / lambda);
  const Sym2Field gauge = grid_killing(omega, flat);

  Sym2Field residual = geom.ricci;
  for (std::size_t node = 0; node < grid.nodes(); ++node) {
    const double factor = (kappa * trE.at(node) + lambda) / (1.0 + kappa * n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        residual.at(i, j, node) += -E.at(i, j, node) + factor * metric.at(i, j, node) -
                                   gauge.at(i, j, node);
  }
  return residual;
}

}  // namespace

Sym2Field ein_residual(const Sym2Field& h, const Sym2Field& e, double kappa, double lambda) {
  const SolverProjection proj = solver_projection(h.grid, kappa, lambda);
  return ein_residual_impl(h, e, kappa, lambda, proj);
}

GaugeCheck gauge_verify(const Sym2Field& h, const Sym2Field& e, double kappa, double lambda) {
  const TorusGrid grid = h.grid;
  const SolverProjection proj = solver_projection(grid, kappa, lambda);
  const Sym2Field metric = perturbed_metric(h);
  const GridGeometry geom = build_grid_geometry(metric, /*with_riemann=*/false);
  const GridGeometry flat = flat_geometry(grid);
  const Sym2Field E = prescription_field(h, e, lambda, proj);

  GaugeCheck check{OneFormField(grid), 0.0, 0.0, lambda};
  check.omega = grid_gen_bianchi(E, geom, kappa);
  check.omega.scale(1.0 / lambda);
  check.sup_norm = check.omega.sup_norm();

  // P_{g+h} omega = B_{g+h}(L_g omega) + Ein_g omega, with Ein_g = lambda Id.
  OneFormField p_omega = grid_bianchi(grid_killing(check.omega, flat), geom);
  for (std::size_t i = 0; i < p_omega.v.size(); ++i) p_omega.v[i] += lambda * check.omega.v[i];
  check.operator_sup_norm = p_omega.sup_norm();
  return check;
}

double direct_prescription_error(const Sym2Field& h, const Sym2Field& e, double kappa,
                                 double lambda) {
  const TorusGrid grid = h.grid;
  const int n = grid.dim;
  const SolverProjection proj = solver_projection(grid, kappa, lambda);
  const Sym2Field metric = perturbed_metric(h);
  const GridGeometry geom = build_grid_geometry(metric, /*with_riemann=*/false);

  // Ein(g+h) = Ric + kappa R metric + lambda metric, assembled from scratch.
  Sym2Field ein = geom.ricci;
  for (std::size_t node = 0; node < grid.nodes(); ++node)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        ein.at(i, j, node) += (kappa * geom.scalar.at(node) + lambda) * metric.at(i, j, node);

  const Sym2Field ph = proj(h);
  double err = 0.0;
  for (std::size_t node = 0; node < grid.nodes(); ++node)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const double target = (i == j ? lambda : 0.0) + e.at(i, j, node) - 0.5 * ph.at(i, j, node);
        err = std::max(err, std::abs(ein.at(i, j, node) - target));
      }
  return err;
}

namespace {

/// Inner solve of the full-Newton cross-check mode: iterative refinement of
/// J delta = r with finite-difference Jacobian products, preconditioned by
/// the frozen linearization.
Sym2Field fd_newton_step(const Sym2Field& h, const Sym2Field& r, const Sym2Field& e,
                         double kappa, double lambda, const MultiplierOperator& lin) {
  auto jacobian_product = [&](const Sym2Field& v) {
    const double scale = std::max(v.sup_norm(), 1e-30);
    const double t = 1e-6 / scale;
    Sym2Field hp = h;
    for (std::size_t i = 0; i < hp.v.size(); ++i) hp.v[i] += t * v.v[i];
    Sym2Field fp = ein_residual(hp, e, kappa, lambda);
    const Sym2Field f0 = ein_residual(h, e, kappa, lambda);
    for (std::size_t i = 0; i < fp.v.size(); ++i) fp.v[i] = (fp.v[i] - f0.v[i]) / t;
    return fp;
  };

  Sym2Field delta(h.grid);
  {
    const FieldStorage d0 = lin.solve(r);
    delta.v = d0.v;
  }
  for (int inner = 0; inner < 4; ++inner) {
    Sym2Field jr = jacobian_product(delta);
    Sym2Field defect = r;
    defect -= jr;
    const FieldStorage corr = lin.solve(defect);
    for (std::size_t i = 0; i < delta.v.size(); ++i) delta.v[i] += corr.v[i];
  }
  return delta;
}

}  // namespace

SolveReport newton_chord_solve(const SolveConfig& cfg) {
  cfg.validate();
  const TorusGrid grid = cfg.grid();
  const SolverProjection proj = solver_projection(grid, cfg.kappa, cfg.lambda);
  const MultiplierOperator lin = linearization_at_zero(grid, cfg.kappa, cfg.lambda);

  if (cfg.prescription.sup_norm() > 0.1 * std::abs(cfg.lambda))
    std::fprintf(stderr,
                 "ricciforge: warning: prescription sup-norm %.3e exceeds 0.1*|lambda|; "
                 "the iteration may leave the contraction basin\n",
                 cfg.prescription.sup_norm());

  SolveReport report;
  report.h = Sym2Field(grid);
  bool converged = false;
  int grew = 0;
  const double floor = std::max(8e-13, cfg.tolerance_residual * 1e-3);

  for (int m = 0; m <= cfg.max_iterations; ++m) {
    Sym2Field residual;
    try {
      residual = ein_residual_impl(report.h, cfg.prescription, cfg.kappa, cfg.lambda, proj);
    } catch (const Error& e) {
      report.verdict = std::string(e.what()).find("positive definite") != std::string::npos
                           ? "positivity_lost"
                           : "diverged";
      report.iterations = m;
      return report;
    }
    const double res = residual.sup_norm();
    report.residual_history.push_back(res);
    if (res < cfg.tolerance_residual) converged = true;
    if (report.residual_history.size() >= 2 &&
        res > report.residual_history[report.residual_history.size() - 2]) {
      ++grew;
      if (grew >= 3 && !converged) {
        report.verdict = "diverged";
        report.iterations = m;
        return report;
      }
      if (converged) break;  // polishing stopped paying off
    } else {
      grew = 0;
    }
    if (converged && res < floor) break;
    if (m == cfg.max_iterations) break;

    Sym2Field step(grid);
    if (cfg.mode == SolveConfig::Mode::FullNewtonFd) {
      step = fd_newton_step(report.h, residual, cfg.prescription, cfg.kappa, cfg.lambda, lin);
    } else {
      const FieldStorage s = lin.solve(residual);
      step.v = s.v;
    }
    for (std::size_t i = 0; i < report.h.v.size(); ++i) report.h.v[i] -= step.v[i];
  }

  report.iterations = static_cast<int>(report.residual_history.size()) - 1;
  report.h_sup_norm = report.h.sup_norm();

  if (!converged) {
    report.verdict = "max_iterations";
    return report;
  }

  const GaugeCheck gauge = gauge_verify(report.h, cfg.prescription, cfg.kappa, cfg.lambda);
  report.gauge_sup_norm = gauge.sup_norm;
  report.gauge_operator_sup_norm = gauge.operator_sup_norm;
  report.gauge_min_multiplier = gauge.min_gauge_multiplier;
  report.direct_check_error =
      direct_prescription_error(report.h, cfg.prescription, cfg.kappa, cfg.lambda);

  for (const auto& b : proj.basis)
    report.projection_coefficients.push_back(l2_inner(report.h, b));

  // linear convergence factor over the decreasing stretch of the history
  double factor = 0.0;
  int count = 0;
  for (std::size_t i = 1; i + 1 < report.residual_history.size(); ++i) {
    const double prev = report.residual_history[i - 1];
    const double cur = report.residual_history[i];
    if (prev > 0 && cur > 0 && cur < prev && cur > 1e-12) {
      factor += cur / prev;
      ++count;
    }
  }
  report.convergence_factor = count ? factor / count : 0.0;

  report.verdict = gauge.sup_norm < cfg.tolerance_gauge ? "converged" : "invalid_gauge";
  return report;
}

double linear_response_prediction(const TorusGrid& grid, double kappa, double lambda,
                                  const Sym2Field& e) {
  const MultiplierOperator lin = linearization_at_zero(grid, kappa, lambda);
  Sym2Field zero(grid);
  // F(0, e) is linear in e; the first-order response solves lin * h = -F(0, e)
  const Sym2Field f0 = ein_residual(zero, e, kappa, lambda);
  Sym2Field rhs = f0;
  rhs.scale(-1.0);
  const FieldStorage h = lin.solve(rhs);
  return h.sup_norm();
}

nlohmann::ordered_json SolveReport::to_json(const nlohmann::ordered_json& config_echo) const {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["config"] = config_echo;
  nlohmann::ordered_json iters = nlohmann::ordered_json::array();
  for (std::size_t m = 0; m < residual_history.size(); ++m)
    iters.push_back({{"m", m}, {"residual", residual_history[m]}});
  j["iterations"] = iters;
  j["h_sup_norm"] = h_sup_norm;
  j["gauge_norm"] = gauge_sup_norm;
  j["gauge_operator_norm"] = gauge_operator_sup_norm;
  j["gauge_min_multiplier"] = gauge_min_multiplier;
  j["direct_check"] = direct_check_error;
  j["projection_coefficients"] = projection_coefficients;
  j["convergence_factor"] = convergence_factor;
  j["verdict"] = verdict;
  return j;
}

}  // namespace ricciforge
