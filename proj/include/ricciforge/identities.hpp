// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ricciforge/chart_ops.hpp"
#include "ricciforge/chart_samples.hpp"

namespace ricciforge {

// ---------------------------------------------------------------------------
// Residuals of individual operator identities on chart jets. All residuals
// are relative: sup-norm of the mismatch at the base point divided by the
// largest sup-norm among the assembled terms.
// ---------------------------------------------------------------------------

double relative(double diff, double scale);

/// Contracted second Bianchi identity: B_g(Ric(g)) = 0.
double bianchi_ricci_residual(const ChartGeometry<double>& geom);

/// Generalized contracted Bianchi identity of the prescription tensor:
/// script-B_g(Ein(g)) = 0.
double gen_bianchi_ein_residual(const ChartGeometry<double>& geom, double kappa, double lambda);

/// Two independent assemblies of the Lichnerowicz Laplacian:
/// Delta u + 2(Ric - Riem) u versus 2(D*D + L L*) u - Delta u.
double weitzenbock_residual(const ChartGeometry<double>& geom, const JetTensor<double>& u);

/// Directional derivative of Ricci against (1/2) Delta_L h - L_g B_g(h).
double dric_residual(const JetTensor<double>& g, const JetTensor<double>& h);

/// Directional derivative of g -> B_g(R) for fixed R against
/// -R B_g(h) + T(g,R) h.
double dbianchi_residual(const JetTensor<double>& g, const JetTensor<double>& h,
                         const JetTensor<double>& r);

/// Ricci-parallel special case: the transport term drops and the derivative
/// collapses to -Ric_g B_g(h).
double dbianchi_parallel_residual(const JetTensor<double>& g, const JetTensor<double>& h);

/// Directional derivative of the contravariant Ricci against
/// g^{-1} [ (1/2) Delta_L h - L_g B_g(h) - 2 Ric h ] g^{-1}.
double dric_contra_residual(const JetTensor<double>& g, const JetTensor<double>& h);

/// Directional derivative of g -> script-B_g(E) for fixed E against
/// -E B_g(h) + ((n-2) kappa / (2(1+kappa n))) d<E,h> + T(E,h).
double dgen_bianchi_residual(const JetTensor<double>& g, const JetTensor<double>& h,
                             const JetTensor<double>& e, double kappa);

/// Directional derivative of the full gauged prescription map at (0,0) on an
/// Einstein chart against its displayed closed form (projection absent).
double dein_gauged_residual(const JetTensor<double>& g, const JetTensor<double>& h, double kappa,
                            double lambda, double einstein_tau);

/// Trace identity of the rank-4 prescription tensor:
/// Tr_g script-Ein(g) = [a(n-2)+1] Ein(g).
double trace_ein4_residual(const ChartGeometry<double>& geom, double a, double kappa,
                           double lambda);

/// Gauge operator against the Hodge Laplacian: 2 P_g omega = Delta_H omega.
double hodge_gauge_residual(const ChartGeometry<double>& geom, const JetTensor<double>& omega);

/// Contravariant gauge operator against (1/2)(Delta_H - 4 Ric) omega.
double contra_gauge_residual(const ChartGeometry<double>& geom, const JetTensor<double>& omega);

/// Ein-type gauge operator against (1/2)(Delta_H + 2 kappa R + 2 Lambda) omega.
double ein_gauge_residual(const ChartGeometry<double>& geom, const JetTensor<double>& omega,
                          double kappa, double lambda);

/// Metric compatibility nabla g = 0 (absolute sup over all coefficients).
double metric_compatibility_residual(const ChartGeometry<double>& geom);

struct CommutationReport {
  double ricci_parallel_gate = 0.0;  // |nabla Ric| / |Ric| at the base point
  double div_residual = 0.0;         // div(Delta_L u) vs Delta_H(div u), relative
  double trace_residual = 0.0;       // Tr(Delta_L u) vs Delta(Tr u), relative
};

/// Commutation identities valid for parallel Ricci curvature. The div
/// commutation fails on generic metrics (the negative control); the trace
/// commutation cancels algebraically for any metric.
CommutationReport parallel_ricci_commutations(const ChartGeometry<double>& geom,
                                              const JetTensor<double>& u);

struct GaugeFormReport {
  double f_at_zero = 0.0;       // sup |F(0,0)| at the base point
  double df_residual = 0.0;     // dual derivative of F vs (1/2) Delta_L h
  double fbar_at_zero = 0.0;    // sup |Fbar(0,0)|
  double dfbar_residual = 0.0;  // dual derivative of Fbar vs (1/2) Delta_L h - 2 Ric h
};

/// Jet-level gauged prescription maps of the Ricci and contravariant-Ricci
/// problems, evaluated with a zero projection surrogate on a chart whose
/// Ricci tensor is nondegenerate (the contravariant form assumes Einstein).
GaugeFormReport ricci_gauge_forms(const JetTensor<double>& g, const JetTensor<double>& h);

/// Constant-curvature closed forms on a sphere chart: Ric = (n-1) K g,
/// Riem acting on trace-free u as -K u, and (Ric - Riem) u = n K u.
double constant_curvature_residual(int n, int order, double curvature, CounterRng& rng);

// ---------------------------------------------------------------------------
// Suite runner
// ---------------------------------------------------------------------------

struct IdentityRow {
  std::string name;
  std::string anchor;  // formula tag carried verbatim into reports
  int dim = 0;
  int seeds = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool expect_failure = false;  // negative control rows pass when residual > tolerance
  bool pass = false;
};

struct IdentitySuiteConfig {
  std::uint64_t seed = 1;
  int seeds = 20;
  int order = 6;
  std::vector<int> dims = {2, 3};
};

std::vector<IdentityRow> run_identity_suite(const IdentitySuiteConfig& cfg);

}  // namespace ricciforge
