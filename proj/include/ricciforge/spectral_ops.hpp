// SPDX-License-Identifier: MIT
#pragma once

#include <functional>
#include <optional>
#include <string>

#include "ricciforge/torus_ops.hpp"

namespace ricciforge {

/// Constant-coefficient operator diagonal in Fourier space. Each mode carries
/// either one real multiplier acting identically on every component, or a
/// dense real comps x comps matrix (needed when the linearization couples the
/// trace into the full tensor).
class MultiplierOperator {
 public:
  static MultiplierOperator scalar(const TorusGrid& grid, int comps,
                                   const std::function<double(const std::array<int, 3>&)>& m);
  static MultiplierOperator matrix(
      const TorusGrid& grid, int comps,
      const std::function<void(const std::array<int, 3>&, std::vector<double>&)>& fill);

  const TorusGrid& grid() const { return grid_; }
  int comps() const { return comps_; }
  bool scalar_form() const { return scalar_form_; }

  FieldStorage apply(const FieldStorage& f) const;

  /// Inverse on all modes; fails on a non-invertible mode unless
  /// zero_mode_shift is given, in which case zero-multiplier modes at k = 0
  /// are divided by the shift (the projection handling of op + c Pi).
  FieldStorage solve(const FieldStorage& f, std::optional<double> zero_mode_shift = {}) const;

  bool all_invertible() const { return all_invertible_; }
  std::array<int, 3> first_singular_mode() const { return first_singular_mode_; }

  /// Smallest and largest |multiplier| over modes (matrix form uses symmetric
  /// eigenvalue magnitudes).
  double min_abs_multiplier() const { return min_abs_; }
  double max_abs_multiplier() const { return max_abs_; }

  /// Multiplier eigenvalues of one mode (scalar form: the single value).
  std::vector<double> mode_eigenvalues(const std::array<int, 3>& k) const;

  /// Modes flagged as kernel (|multiplier| < 1e-8 * max). Fails with a
  /// threshold-review error when some eigenvalue falls inside the ambiguous
  /// window [0.1 gap, gap) of the nominal spectral gap.
  std::vector<std::size_t> kernel_modes(double nominal_gap = 1.0) const;

 private:
  TorusGrid grid_;
  int comps_ = 0;
  bool scalar_form_ = true;
  std::vector<double> m_;       // modes (scalar form)
  std::vector<double> mat_;     // modes * comps^2 (matrix form)
  bool all_invertible_ = true;
  std::array<int, 3> first_singular_mode_{0, 0, 0};
  double min_abs_ = 0.0;
  double max_abs_ = 0.0;

  std::vector<double> mode_eigenvalues_by_node(std::size_t node) const;
  void finalize_stats();
};

/// |k|^2 multiplier acting on `comps` components (the flat-torus rough and
/// Lichnerowicz Laplacians agree componentwise).
MultiplierOperator laplacian_multiplier(const TorusGrid& grid, int comps);

/// Orthonormal kernel basis of a constant-coefficient operator together with
/// its L2 projection. On the flat torus the kernel of the Laplacian-type
/// operators sits at the zero mode, so the projection is the per-component
/// grid mean.
struct KernelBasis {
  std::vector<Sym2Field> fields;
  std::string tag;  // operator the basis annihilates
  double gram_error = 0.0;
  double annihilation_error = 0.0;
};

struct ZeroModeProjection {
  Sym2Field operator()(const Sym2Field& u) const;
};

struct KernelProjection {
  KernelBasis basis;
  ZeroModeProjection projection;
};

/// Kernel and projection of the flat-torus Lichnerowicz Laplacian: the
/// n(n+1)/2 constant symmetric tensors, orthonormalized in L2.
KernelProjection lichnerowicz_flat_kernel(const TorusGrid& grid);

/// Applies op + c Pi where Pi is the zero-mode projection.
Sym2Field apply_shifted(const MultiplierOperator& op, double c, const Sym2Field& u);

/// Dense matrix of a symmetric-tensor operator (size d*nodes squared),
/// assembled column by column; only sensible at small N.
std::vector<double> dense_operator_matrix(const std::function<Sym2Field(const Sym2Field&)>& op,
                                          const TorusGrid& grid);

}  // namespace ricciforge
