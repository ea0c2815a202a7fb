// SPDX-License-Identifier: MIT
#pragma once

#include <string>

#include <json.hpp>

#include "ricciforge/spectral_ops.hpp"

namespace ricciforge {

/// Configuration of one prescribed-curvature solve on the flat torus.
struct SolveConfig {
  int dim = 2;
  int n_axis = 64;
  double kappa = 0.0;
  double lambda = 1.0;
  Sym2Field prescription;  // e
  double tolerance_residual = 1e-10;  // sup-norm stopping rule
  double tolerance_gauge = 1e-9;
  int max_iterations = 40;
  enum class Mode { NewtonChord, FullNewtonFd } mode = Mode::NewtonChord;

  TorusGrid grid() const { return TorusGrid(dim, n_axis); }
  void validate() const;
};

struct GaugeCheck {
  OneFormField omega;
  double sup_norm = 0.0;
  double operator_sup_norm = 0.0;   // P_{g+h} omega recomputed
  double min_gauge_multiplier = 0.0;  // injectivity witness of P_g
};

struct SolveReport {
  std::vector<double> residual_history;
  Sym2Field h;
  double h_sup_norm = 0.0;
  double gauge_sup_norm = 0.0;
  double gauge_operator_sup_norm = 0.0;
  double gauge_min_multiplier = 0.0;
  double direct_check_error = 0.0;
  std::vector<double> projection_coefficients;
  double convergence_factor = 0.0;
  int iterations = 0;
  std::string verdict;  // converged | diverged | max_iterations | positivity_lost | invalid_gauge

  bool accepted() const { return verdict == "converged"; }
  nlohmann::ordered_json to_json(const nlohmann::ordered_json& config_echo) const;
};

/// e = eps cos(x_axis) * delta.
Sym2Field cosine_mode_prescription(const TorusGrid& grid, double eps, int axis = 0);

/// Trace-coupled projection used by the prescription map. Trivial whenever
/// the scalar and trace-free blocks of the linearization have no kernel
/// (lambda > 0 on the torus); otherwise it is the zero-mode projection.
struct SolverProjection {
  bool trivial = true;
  Sym2Field operator()(const Sym2Field& h) const;
  std::vector<Sym2Field> basis;  // L2-orthonormal, empty when trivial
};

SolverProjection solver_projection(const TorusGrid& grid, double kappa, double lambda);

/// Frozen linearization of the gauged prescription map at (0,0):
/// on mode k it acts as (|k|^2/2 + lambda) I
///   + [ ((n-2) kappa / (2(1+kappa n))) k kT - (kappa lambda / (1+kappa n)) delta ] tr(.)
/// which is a plain scalar multiplier (|k|^2 + 2 lambda)/2 when kappa = 0.
MultiplierOperator linearization_at_zero(const TorusGrid& grid, double kappa, double lambda);

/// Nonlinear gauged residual of the prescription equation at h (flat
/// background). Fails when Ein of the background is degenerate (lambda = 0)
/// or when the perturbed metric leaves the positivity basin.
Sym2Field ein_residual(const Sym2Field& h, const Sym2Field& e, double kappa, double lambda);

/// Gauge one-form of a candidate solution together with the recomputed
/// second-order gauge operator applied to it.
GaugeCheck gauge_verify(const Sym2Field& h, const Sym2Field& e, double kappa, double lambda);

/// Residual of the ungauged prescription recomputed from scratch (a code path
/// that never sees the gauge term): sup |Ein(g+h) - Ein(g) - e + (1/2)proj(h)|.
double direct_prescription_error(const Sym2Field& h, const Sym2Field& e, double kappa,
                                 double lambda);

SolveReport newton_chord_solve(const SolveConfig& cfg);

/// Sup-norm of the first-order response L^{-1} applied to the linear part of
/// the residual; the prediction ||h(eps)|| / eps converges to this as eps -> 0.
double linear_response_prediction(const TorusGrid& grid, double kappa, double lambda,
                                  const Sym2Field& e);

}  // namespace ricciforge
