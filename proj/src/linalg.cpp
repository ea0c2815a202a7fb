// SPDX-License-Identifier: MIT
#include "ricciforge/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ricciforge/error.hpp"

namespace ricciforge::linalg {

void jacobi_eigen(std::vector<double> a, int m, std::vector<double>& eigenvalues,
                  std::vector<double>* eigenvectors) {
  require(static_cast<int>(a.size()) == m * m, "jacobi_eigen: size mismatch");
  std::vector<double> v;
  if (eigenvectors) {
    v.assign(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) v[static_cast<std::size_t>(i) * m + i] = 1.0;
  }
  auto at = [&](std::vector<double>& mat, int r, int c) -> double& {
    return mat[static_cast<std::size_t>(r) * m + c];
  };

  double scale = 0.0;
  for (const double x : a) scale = std::max(scale, std::abs(x));
  const double stop = scale * 1e-15 + 1e-300;

  const int max_sweeps = 64;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < m; ++p)
      for (int q = p + 1; q < m; ++q) off = std::max(off, std::abs(at(a, p, q)));
    if (off <= stop) break;

    for (int p = 0; p < m; ++p) {
      for (int q = p + 1; q < m; ++q) {
        const double apq = at(a, p, q);
        if (std::abs(apq) <= stop * 1e-2) continue;
        const double app = at(a, p, p);
        const double aqq = at(a, q, q);
        const double theta = 0.5 * (aqq - app) / apq;
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < m; ++k) {
          const double akp = at(a, k, p);
          const double akq = at(a, k, q);
          at(a, k, p) = c * akp - s * akq;
          at(a, k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < m; ++k) {
          const double apk = at(a, p, k);
          const double aqk = at(a, q, k);
          at(a, p, k) = c * apk - s * aqk;
          at(a, q, k) = s * apk + c * aqk;
        }
        if (eigenvectors) {
          for (int k = 0; k < m; ++k) {
            const double vkp = at(v, k, p);
            const double vkq = at(v, k, q);
            at(v, k, p) = c * vkp - s * vkq;
            at(v, k, q) = s * vkp + c * vkq;
          }
        }
      }
    }
  }

  eigenvalues.resize(m);
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> diag(m);
  for (int i = 0; i < m; ++i) diag[i] = a[static_cast<std::size_t>(i) * m + i];
  std::sort(order.begin(), order.end(), [&](int x, int y) { return diag[x] < diag[y]; });
  for (int i = 0; i < m; ++i) eigenvalues[i] = diag[order[i]];
  if (eigenvectors) {
    eigenvectors->assign(static_cast<std::size_t>(m) * m, 0.0);
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i)
        (*eigenvectors)[static_cast<std::size_t>(i) * m + j] =
            v[static_cast<std::size_t>(i) * m + order[j]];
  }
}

double min_eigenvalue(const std::vector<double>& matrix, int m) {
  std::vector<double> evals;
  jacobi_eigen(matrix, m, evals, nullptr);
  return evals.front();
}

bool cholesky(std::vector<double>& a, int m) {
  for (int j = 0; j < m; ++j) {
    double d = a[static_cast<std::size_t>(j) * m + j];
    for (int k = 0; k < j; ++k) {
      const double ljk = a[static_cast<std::size_t>(j) * m + k];
      d -= ljk * ljk;
    }
    if (d <= 0.0) return false;
    const double ljj = std::sqrt(d);
    a[static_cast<std::size_t>(j) * m + j] = ljj;
    for (int i = j + 1; i < m; ++i) {
      double s = a[static_cast<std::size_t>(i) * m + j];
      for (int k = 0; k < j; ++k)
        s -= a[static_cast<std::size_t>(i) * m + k] * a[static_cast<std::size_t>(j) * m + k];
      a[static_cast<std::size_t>(i) * m + j] = s / ljj;
    }
  }
  return true;
}

void solve_lower(const std::vector<double>& l, int m, std::vector<double>& x) {
  for (int i = 0; i < m; ++i) {
    double s = x[i];
    for (int k = 0; k < i; ++k) s -= l[static_cast<std::size_t>(i) * m + k] * x[k];
    x[i] = s / l[static_cast<std::size_t>(i) * m + i];
  }
}

void solve_lower_transposed(const std::vector<double>& l, int m, std::vector<double>& x) {
  for (int i = m - 1; i >= 0; --i) {
    double s = x[i];
    for (int k = i + 1; k < m; ++k) s -= l[static_cast<std::size_t>(k) * m + i] * x[k];
    x[i] = s / l[static_cast<std::size_t>(i) * m + i];
  }
}

bool invert(std::vector<double> a, int m, std::vector<double>& inverse, double tol) {
  double scale = 0.0;
  for (const double x : a) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) return false;
  inverse.assign(static_cast<std::size_t>(m) * m, 0.0);
  for (int i = 0; i < m; ++i) inverse[static_cast<std::size_t>(i) * m + i] = 1.0;

  for (int col = 0; col < m; ++col) {
    int pivot = col;
    for (int r = col + 1; r < m; ++r)
      if (std::abs(a[static_cast<std::size_t>(r) * m + col]) >
          std::abs(a[static_cast<std::size_t>(pivot) * m + col]))
        pivot = r;
    if (std::abs(a[static_cast<std::size_t>(pivot) * m + col]) < tol * scale) return false;
    if (pivot != col) {
      for (int c = 0; c < m; ++c) {
        std::swap(a[static_cast<std::size_t>(pivot) * m + c],
                  a[static_cast<std::size_t>(col) * m + c]);
        std::swap(inverse[static_cast<std::size_t>(pivot) * m + c],
                  inverse[static_cast<std::size_t>(col) * m + c]);
      }
    }
    const double inv_p = 1.0 / a[static_cast<std::size_t>(col) * m + col];
    for (int c = 0; c < m; ++c) {
      a[static_cast<std::size_t>(col) * m + c] *= inv_p;
      inverse[static_cast<std::size_t>(col) * m + c] *= inv_p;
    }
    for (int r = 0; r < m; ++r) {
      if (r == col) continue;
      const double f = a[static_cast<std::size_t>(r) * m + col];
      if (f == 0.0) continue;
      for (int c = 0; c < m; ++c) {
        a[static_cast<std::size_t>(r) * m + c] -= f * a[static_cast<std::size_t>(col) * m + c];
        inverse[static_cast<std::size_t>(r) * m + c] -=
            f * inverse[static_cast<std::size_t>(col) * m + c];
      }
    }
  }
  return true;
}

bool solve(std::vector<double> a, int m, std::vector<double>& rhs, double tol) {
  double scale = 0.0;
  for (const double x : a) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) return false;
  for (int col = 0; col < m; ++col) {
    int pivot = col;
    for (int r = col + 1; r < m; ++r)
      if (std::abs(a[static_cast<std::size_t>(r) * m + col]) >
          std::abs(a[static_cast<std::size_t>(pivot) * m + col]))
        pivot = r;
    if (std::abs(a[static_cast<std::size_t>(pivot) * m + col]) < tol * scale) return false;
    if (pivot != col) {
      for (int c = col; c < m; ++c)
        std::swap(a[static_cast<std::size_t>(pivot) * m + c],
                  a[static_cast<std::size_t>(col) * m + c]);
      std::swap(rhs[pivot], rhs[col]);
    }
    for (int r = col + 1; r < m; ++r) {
      const double f = a[static_cast<std::size_t>(r) * m + col] /
                       a[static_cast<std::size_t>(col) * m + col];
      if (f == 0.0) continue;
      for (int c = col; c < m; ++c)
        a[static_cast<std::size_t>(r) * m + c] -= f * a[static_cast<std::size_t>(col) * m + c];
      rhs[r] -= f * rhs[col];
    }
  }
  for (int i = m - 1; i >= 0; --i) {
    double s = rhs[i];
    for (int c = i + 1; c < m; ++c) s -= a[static_cast<std::size_t>(i) * m + c] * rhs[c];
    rhs[i] = s / a[static_cast<std::size_t>(i) * m + i];
  }
  return true;
}

std::vector<double> multiply(const std::vector<double>& a, const std::vector<double>& b, int m) {
  std::vector<double> out(static_cast<std::size_t>(m) * m, 0.0);
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k) {
      const double aik = a[static_cast<std::size_t>(i) * m + k];
      if (aik == 0.0) continue;
      for (int j = 0; j < m; ++j)
        out[static_cast<std::size_t>(i) * m + j] += aik * b[static_cast<std::size_t>(k) * m + j];
    }
  return out;
}

}  // namespace ricciforge::linalg
