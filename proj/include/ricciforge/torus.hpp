// SPDX-License-Identifier: MIT
#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "ricciforge/error.hpp"

namespace ricciforge {

/// Uniform periodic grid on [0, 2pi)^dim with N points per axis.
struct TorusGrid {
  int dim = 0;
  int n_axis = 0;

  TorusGrid() = default;
  TorusGrid(int dim_, int n_axis_);

  std::size_t nodes() const {
    std::size_t n = 1;
    for (int a = 0; a < dim; ++a) n *= static_cast<std::size_t>(n_axis);
    return n;
  }
  double spacing() const { return 6.283185307179586476925286766559 / n_axis; }
  double cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < dim; ++a) v *= spacing();
    return v;
  }
  /// Coordinates of a row-major node index.
  std::array<double, 3> coords(std::size_t node) const;
  std::array<int, 3> node_indices(std::size_t node) const;
  std::size_t node_at(const std::array<int, 3>& idx) const;

  bool operator==(const TorusGrid& o) const { return dim == o.dim && n_axis == o.n_axis; }
};

inline int sym2_count(int n) { return n * (n + 1) / 2; }

/// Packed index of the (i, j) component of a symmetric 2-tensor, i <= j,
/// row-major upper triangle ("11,12,...,nn").
int sym2_index(int n, int i, int j);

/// Component labels "11,12,...,nn" (or "1,2,.." for one-forms).
std::string component_labels(int n, int rank);

struct ScalarField;
struct OneFormField;
struct Sym2Field;
struct Tensor3Field;

/// Shared storage: `comps` scalar fields over the grid, component-major.
struct FieldStorage {
  TorusGrid grid;
  int comps = 0;
  std::vector<double> v;

  FieldStorage() = default;
  FieldStorage(const TorusGrid& g, int comps_)
      : grid(g), comps(comps_), v(static_cast<std::size_t>(comps_) * g.nodes(), 0.0) {}

  double* comp(int c) { return v.data() + static_cast<std::size_t>(c) * grid.nodes(); }
  const double* comp(int c) const { return v.data() + static_cast<std::size_t>(c) * grid.nodes(); }

  double sup_norm() const;
  bool finite() const;

  FieldStorage& operator+=(const FieldStorage& r);
  FieldStorage& operator-=(const FieldStorage& r);
  FieldStorage& scale(double s);
};

struct ScalarField : FieldStorage {
  ScalarField() = default;
  explicit ScalarField(const TorusGrid& g) : FieldStorage(g, 1) {}
  double& at(std::size_t node) { return v[node]; }
  double at(std::size_t node) const { return v[node]; }
};

struct OneFormField : FieldStorage {
  OneFormField() = default;
  explicit OneFormField(const TorusGrid& g) : FieldStorage(g, g.dim) {}
  double& at(int a, std::size_t node) { return comp(a)[node]; }
  double at(int a, std::size_t node) const { return comp(a)[node]; }
};

struct Sym2Field : FieldStorage {
  Sym2Field() = default;
  explicit Sym2Field(const TorusGrid& g) : FieldStorage(g, sym2_count(g.dim)) {}
  double& at(int i, int j, std::size_t node) { return comp(sym2_index(grid.dim, i, j))[node]; }
  double at(int i, int j, std::size_t node) const {
    return comp(sym2_index(grid.dim, i, j))[node];
  }
  /// Identity metric field.
  static Sym2Field identity(const TorusGrid& g);
};

struct Tensor3Field : FieldStorage {
  Tensor3Field() = default;
  explicit Tensor3Field(const TorusGrid& g) : FieldStorage(g, g.dim * g.dim * g.dim) {}
  int comp_index(int a, int b, int c) const { return (a * grid.dim + b) * grid.dim + c; }
  double& at(int a, int b, int c, std::size_t node) { return comp(comp_index(a, b, c))[node]; }
  double at(int a, int b, int c, std::size_t node) const {
    return comp(comp_index(a, b, c))[node];
  }
};

// ---------------------------------------------------------------------------
// Spectral machinery
// ---------------------------------------------------------------------------

/// Signed integer frequency of index j on an N-point axis (j in [0, N)).
inline int signed_freq(int j, int N) { return j <= N / 2 ? j : j - N; }

/// Forward FFT of one component (unnormalized); inverse applies 1/N per axis.
std::vector<std::complex<double>> fft_forward(const TorusGrid& grid, const double* comp);
void fft_inverse(const TorusGrid& grid, std::vector<std::complex<double>> spectrum,
                 double* out_comp);

/// Exact derivative of the trigonometric interpolant along an axis.
/// Warns (stderr, once per call site batch) when the top third of the
/// spectrum carries more than 1e-8 of the total energy.
void spectral_derivative_comp(const TorusGrid& grid, const double* in, int axis, double* out,
                              bool check_tail = false);

ScalarField spectral_derivative(const ScalarField& f, int axis, bool check_tail = false);

/// Energy fraction carried by modes with any |k_a| > N/3.
double tail_energy_fraction(const TorusGrid& grid, const double* comp);

/// 2/3-rule truncation: zeroes modes with any |k_a| > N/3. Applied after
/// pointwise nonlinear products so aliasing cannot contaminate residuals.
void dealias_comp(const TorusGrid& grid, double* comp);
void dealias(FieldStorage& f);

/// Zero-mode (grid mean) per component.
std::vector<double> component_means(const FieldStorage& f);

// ---------------------------------------------------------------------------
// Serialization: one JSON header line, then node-major CSV rows or a flat
// little-endian binary payload of doubles.
// ---------------------------------------------------------------------------

void write_field(const std::string& path, const FieldStorage& f, int rank, bool binary);
FieldStorage read_field(const std::string& path, int* rank_out = nullptr);

}  // namespace ricciforge
