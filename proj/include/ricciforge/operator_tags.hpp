// SPDX-License-Identifier: MIT
#pragma once

#include <cmath>

#include "ricciforge/error.hpp"

namespace ricciforge {

/// Tags of the request-driven operator dispatchers (chart jets and torus
/// grids share the same vocabulary).
enum class OperatorTag {
  RoughLaplacian,
  Lichnerowicz,
  Hodge,
  Divergence,
  KillingSym,
  Codifferential,
  Bianchi,
  GenBianchi,
  D,
  DStar,
  Kodaira,
  Ein,
  Ein4,
  RicContra,
  BianchiContra,
};

struct OperatorParams {
  double kappa = 0.0;
  double lambda = 0.0;
  double a = 0.0;
};

/// Shared guards of the Ein-family operators.
inline void check_ein_kappa_guards(int n, double kappa) {
  require(std::abs(kappa + 1.0 / n) > 1e-12, "ein family: kappa = -1/n is excluded");
  require(std::abs(kappa + 1.0 / (2.0 * (n - 1))) > 1e-12,
          "ein family: kappa = -1/(2(n-1)) is excluded");
}

}  // namespace ricciforge
