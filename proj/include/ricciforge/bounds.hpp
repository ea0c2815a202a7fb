// SPDX-License-Identifier: MIT
#pragma once

#include "ricciforge/tensor4.hpp"

namespace ricciforge {

/// Pointwise curvature snapshot: metric, algebraic-curvature tensor, the
/// derived Ricci tensor (its (1,3)-trace) and eigenvalue/sectional extrema.
struct PointCurvatureData {
  int dim = 0;
  SymMatrixValue g;
  Tensor4Value riem;
  SymMatrixValue ric;
  double ric_min = 0.0;

  /// Rigorous sectional brackets from the curvature-operator spectrum:
  /// k_min_bound <= K <= k_max_bound for every 2-plane.
  double k_min_bound = 0.0;
  double k_max_bound = 0.0;

  static PointCurvatureData from_riemann(const SymMatrixValue& g, const Tensor4Value& riem);
};

/// Sectional curvature of the plane spanned by u, v.
double sectional_curvature(const PointCurvatureData& data, const std::vector<double>& u,
                           const std::vector<double>& v);

enum class ExtremaMethod { GridSearch, EigenBound };

/// Extrema of the sectional curvature over 2-planes. GridSearch samples
/// structured frames plus >= `planes` random planes and refines the best
/// candidates locally; EigenBound returns the rigorous curvature-operator
/// brackets (an outer enclosure of the true extrema).
std::pair<double, double> sectional_extrema(const PointCurvatureData& data, ExtremaMethod method,
                                            int planes = 10000, std::uint64_t seed = 1);

struct FujitaniReport {
  double ric_min = 0.0;
  double k_min = 0.0;
  double k_max = 0.0;
  double bound = 0.0;      // min{2 Ric_min - (n-2) K_max, n K_min}
  double exact_min = 0.0;  // smallest eigenvalue of Ric - Riem on trace-free tensors
  double margin = 0.0;     // exact_min - bound
  bool pass = false;
};

/// Pointwise eigenvalue bound check: the exact minimum of
/// <(Ric - Riem) h, h> / |h|^2 over trace-free symmetric h (a dense
/// eigensolve on the trace-free subspace) must stay above the bound.
/// A violation indicates a sign-convention bug upstream, so it throws.
FujitaniReport fujitani_check(const PointCurvatureData& data);

/// Constant-curvature data (exact equality case of the bound).
PointCurvatureData constant_curvature_data(int dim, double curvature);

/// Model data of a product of constant-curvature blocks (block-diagonal
/// metric, no cross-block curvature).
PointCurvatureData product_curvature_data(const std::vector<std::pair<int, double>>& blocks);

}  // namespace ricciforge
