// SPDX-License-Identifier: MIT
#include "ricciforge/spectral_ops.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "ricciforge/linalg.hpp"
#include "ricciforge/parallel.hpp"

namespace ricciforge {

namespace {
std::string mode_string(const std::array<int, 3>& k, int dim) {
  std::string s = "(";
  for (int a = 0; a < dim; ++a) s += (a ? "," : "") + std::to_string(k[a]);
  return s + ")";
}
}  // namespace

MultiplierOperator MultiplierOperator::scalar(
    const TorusGrid& grid, int comps, const std::function<double(const std::array<int, 3>&)>& m) {
  MultiplierOperator op;
  op.grid_ = grid;
  op.comps_ = comps;
  op.scalar_form_ = true;
  op.m_.resize(grid.nodes());
  const int N = grid.n_axis;
  for (std::size_t node = 0; node < grid.nodes(); ++node) {
    const auto idx = grid.node_indices(node);
    std::array<int, 3> k{0, 0, 0};
    for (int a = 0; a < grid.dim; ++a) k[a] = signed_freq(idx[a], N);
    op.m_[node] = m(k);
  }
  op.finalize_stats();
  return op;
}

MultiplierOperator MultiplierOperator::matrix(
    const TorusGrid& grid, int comps,
    const std::function<void(const std::array<int, 3>&, std::vector<double>&)>& fill) {
  MultiplierOperator op;
  op.grid_ = grid;
  op.comps_ = comps;
  op.scalar_form_ = false;
  op.mat_.resize(grid.nodes() * static_cast<std::size_t>(comps) * comps);
  const int N = grid.n_axis;
  std::vector<double> block(static_cast<std::size_t>(comps) * comps);
  for (std::size_t node = 0; node < grid.nodes(); ++node) {
    const auto idx = grid.node_indices(node);
    std::array<int, 3> k{0, 0, 0};
    for (int a = 0; a < grid.dim; ++a) k[a] = signed_freq(idx[a], N);
    fill(k, block);
    std::copy(block.begin(), block.end(),
              op.mat_.begin() + static_cast<std::ptrdiff_t>(node * block.size()));
  }
  op.finalize_stats();
  return op;
}

void MultiplierOperator::finalize_stats() {
  min_abs_ = std::numeric_limits<double>::infinity();
  max_abs_ = 0.0;
  all_invertible_ = true;
  const int N = grid_.n_axis;
  for (std::size_t node = 0; node < grid_.nodes(); ++node) {
    const auto evs = mode_eigenvalues_by_node(node);
    double local_min = std::numeric_limits<double>::infinity();
    for (const double e : evs) {
      min_abs_ = std::min(min_abs_, std::abs(e));
      max_abs_ = std::max(max_abs_, std::abs(e));
      local_min = std::min(local_min, std::abs(e));
    }
    if (local_min <= 1e-14 * std::max(1.0, max_abs_) && all_invertible_) {
      all_invertible_ = false;
      const auto idx = grid_.node_indices(node);
      for (int a = 0; a < grid_.dim; ++a) first_singular_mode_[a] = signed_freq(idx[a], N);
    }
  }
}

std::vector<double> MultiplierOperator::mode_eigenvalues_by_node(std::size_t node) const {
  if (scalar_form_) return {m_[node]};
  std::vector<double> block(static_cast<std::size_t>(comps_) * comps_);
  std::copy(mat_.begin() + static_cast<std::ptrdiff_t>(node * block.size()),
            mat_.begin() + static_cast<std::ptrdiff_t>((node + 1) * block.size()), block.begin());
  // blocks are not symmetric in general; use symmetrized spectrum for the
  // magnitude diagnostics and exact solves elsewhere
  std::vector<double> sym(block.size());
  for (int i = 0; i < comps_; ++i)
    for (int j = 0; j < comps_; ++j)
      sym[static_cast<std::size_t>(i) * comps_ + j] =
          0.5 * (block[static_cast<std::size_t>(i) * comps_ + j] +
                 block[static_cast<std::size_t>(j) * comps_ + i]);
  std::vector<double> evals;
  linalg::jacobi_eigen(sym, comps_, evals, nullptr);
  return evals;
}

std::vector<double> MultiplierOperator::mode_eigenvalues(const std::array<int, 3>& k) const {
  const int N = grid_.n_axis;
  std::array<int, 3> idx{0, 0, 0};
  for (int a = 0; a < grid_.dim; ++a) idx[a] = (k[a] % N + N) % N;
  return mode_eigenvalues_by_node(grid_.node_at(idx));
}

FieldStorage MultiplierOperator::apply(const FieldStorage& f) const {
  require(f.grid == grid_ && f.comps == comps_, "multiplier apply: shape mismatch");
  std::vector<std::vector<std::complex<double>>> spec(comps_);
  for (int c = 0; c < comps_; ++c) spec[c] = fft_forward(grid_, f.comp(c));
  if (scalar_form_) {
    for (int c = 0; c < comps_; ++c)
      for (std::size_t node = 0; node < grid_.nodes(); ++node) spec[c][node] *= m_[node];
  } else {
    std::vector<std::complex<double>> in(comps_), out(comps_);
    for (std::size_t node = 0; node < grid_.nodes(); ++node) {
      const double* block = mat_.data() + node * static_cast<std::size_t>(comps_) * comps_;
      for (int c = 0; c < comps_; ++c) in[c] = spec[c][node];
      for (int i = 0; i < comps_; ++i) {
        std::complex<double> s = 0.0;
        for (int j = 0; j < comps_; ++j) s += block[static_cast<std::size_t>(i) * comps_ + j] * in[j];
        out[i] = s;
      }
      for (int c = 0; c < comps_; ++c) spec[c][node] = out[c];
    }
  }
  FieldStorage result(grid_, comps_);
  for (int c = 0; c < comps_; ++c) fft_inverse(grid_, std::move(spec[c]), result.comp(c));
  return result;
}

FieldStorage MultiplierOperator::solve(const FieldStorage& f,
                                       std::optional<double> zero_mode_shift) const {
  require(f.grid == grid_ && f.comps == comps_, "multiplier solve: shape mismatch");
  std::vector<std::vector<std::complex<double>>> spec(comps_);
  for (int c = 0; c < comps_; ++c) spec[c] = fft_forward(grid_, f.comp(c));
  const double tiny = 1e-14 * std::max(1.0, max_abs_);
  const int N = grid_.n_axis;
  for (std::size_t node = 0; node < grid_.nodes(); ++node) {
    const auto idx = grid_.node_indices(node);
    std::array<int, 3> k{0, 0, 0};
    bool zero_mode = true;
    for (int a = 0; a < grid_.dim; ++a) {
      k[a] = signed_freq(idx[a], N);
      if (k[a] != 0) zero_mode = false;
    }
    if (scalar_form_) {
      const double m = m_[node];
      if (std::abs(m) <= tiny) {
        if (zero_mode && zero_mode_shift) {
          for (int c = 0; c < comps_; ++c) spec[c][node] /= *zero_mode_shift;
          continue;
        }
        fail("multiplier solve: zero multiplier without kernel handling at mode " +
             mode_string(k, grid_.dim));
      }
      for (int c = 0; c < comps_; ++c) spec[c][node] /= m;
    } else {
      const double* block = mat_.data() + node * static_cast<std::size_t>(comps_) * comps_;
      std::vector<double> a(block, block + static_cast<std::size_t>(comps_) * comps_);
      std::vector<double> re(comps_), im(comps_);
      for (int c = 0; c < comps_; ++c) {
        re[c] = spec[c][node].real();
        im[c] = spec[c][node].imag();
      }
      std::vector<double> a2 = a;
      const bool ok_re = linalg::solve(std::move(a), comps_, re);
      const bool ok_im = linalg::solve(std::move(a2), comps_, im);
      if (!ok_re || !ok_im) {
        if (zero_mode && zero_mode_shift) {
          for (int c = 0; c < comps_; ++c) spec[c][node] /= *zero_mode_shift;
          continue;
        }
        fail("multiplier solve: singular mode block at mode " + mode_string(k, grid_.dim));
      }
      for (int c = 0; c < comps_; ++c) spec[c][node] = {re[c], im[c]};
    }
  }
  FieldStorage result(grid_, comps_);
  for (int c = 0; c < comps_; ++c) fft_inverse(grid_, std::move(spec[c]), result.comp(c));
  return result;
}

std::vector<std::size_t> MultiplierOperator::kernel_modes(double nominal_gap) const {
  std::vector<std::size_t> kernel;
  const double kernel_cut = 1e-8 * std::max(max_abs_, 1e-300);
  for (std::size_t node = 0; node < grid_.nodes(); ++node) {
    const auto evs = mode_eigenvalues_by_node(node);
    for (const double e : evs) {
      const double mag = std::abs(e);
      if (mag < kernel_cut) continue;
      if (mag >= 0.1 * nominal_gap && mag < (1.0 - 1e-6) * nominal_gap) {
        const auto idx = grid_.node_indices(node);
        std::array<int, 3> k{0, 0, 0};
        for (int a = 0; a < grid_.dim; ++a) k[a] = signed_freq(idx[a], grid_.n_axis);
        fail("kernel detection: ambiguous eigenvalue " + std::to_string(e) + " at mode " +
             mode_string(k, grid_.dim) + " inside [0.1 gap, gap); threshold review needed");
      }
    }
    bool is_kernel = false;
    for (const double e : evs)
      if (std::abs(e) < kernel_cut) is_kernel = true;
    if (is_kernel) kernel.push_back(node);
  }
  return kernel;
}

MultiplierOperator laplacian_multiplier(const TorusGrid& grid, int comps) {
  return MultiplierOperator::scalar(grid, comps, [&](const std::array<int, 3>& k) {
    double s = 0.0;
    for (int a = 0; a < 3; ++a) s += static_cast<double>(k[a]) * k[a];
    return s;
  });
}

Sym2Field ZeroModeProjection::operator()(const Sym2Field& u) const {
  Sym2Field out(u.grid);
  const auto means = component_means(u);
  for (int c = 0; c < u.comps; ++c) {
    double* p = out.comp(c);
    std::fill(p, p + u.grid.nodes(), means[c]);
  }
  return out;
}

KernelProjection lichnerowicz_flat_kernel(const TorusGrid& grid) {
  const int n = grid.dim;
  const double volume = std::pow(2.0 * M_PI, n);
  KernelProjection kp;
  kp.basis.tag = "lichnerowicz";
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Sym2Field e(grid);
      const double norm2 = (i == j ? 1.0 : 2.0) * volume;
      const double amp = 1.0 / std::sqrt(norm2);
      double* p = e.comp(sym2_index(n, i, j));
      std::fill(p, p + grid.nodes(), amp);
      kp.basis.fields.push_back(std::move(e));
    }

  // validate the basis: Gram matrix against identity, operator annihilation
  const MultiplierOperator lap = laplacian_multiplier(grid, sym2_count(n));
  double gram_err = 0.0, ann_err = 0.0;
  for (std::size_t a = 0; a < kp.basis.fields.size(); ++a) {
    for (std::size_t b = 0; b < kp.basis.fields.size(); ++b) {
      const double gab = l2_inner(kp.basis.fields[a], kp.basis.fields[b]);
      gram_err = std::max(gram_err, std::abs(gab - (a == b ? 1.0 : 0.0)));
    }
    const FieldStorage img = lap.apply(kp.basis.fields[a]);
    ann_err = std::max(ann_err, img.sup_norm());
  }
  kp.basis.gram_error = gram_err;
  kp.basis.annihilation_error = ann_err;
  require(gram_err < 1e-10, "kernel basis: Gram matrix deviates from identity");
  return kp;
}

Sym2Field apply_shifted(const MultiplierOperator& op, double c, const Sym2Field& u) {
  const FieldStorage img = op.apply(u);
  ZeroModeProjection proj;
  Sym2Field pu = proj(u);
  Sym2Field out(u.grid);
  out.v = img.v;
  for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] += c * pu.v[i];
  return out;
}

std::vector<double> dense_operator_matrix(const std::function<Sym2Field(const Sym2Field&)>& op,
                                          const TorusGrid& grid) {
  const int d = sym2_count(grid.dim);
  const std::size_t nodes = grid.nodes();
  const std::size_t m = static_cast<std::size_t>(d) * nodes;
  std::vector<double> mat(m * m, 0.0);
  std::vector<Sym2Field> columns(m, Sym2Field(grid));
  parallel_for(m, [&](std::size_t col) {
    Sym2Field basis(grid);
    basis.v[col] = 1.0;
    columns[col] = op(basis);
  });
  for (std::size_t col = 0; col < m; ++col)
    for (std::size_t row = 0; row < m; ++row) mat[row * m + col] = columns[col].v[row];
  return mat;
}

}  // namespace ricciforge
