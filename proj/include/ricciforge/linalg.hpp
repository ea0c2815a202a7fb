// SPDX-License-Identifier: MIT
#pragma once

#include <vector>

namespace ricciforge::linalg {

/// Cyclic Jacobi eigensolve of a dense symmetric matrix (row-major m x m).
/// Eigenvalues come back ascending; if eigenvectors != nullptr it receives a
/// row-major matrix whose column j is the eigenvector of eigenvalues[j].
void jacobi_eigen(std::vector<double> matrix, int m, std::vector<double>& eigenvalues,
                  std::vector<double>* eigenvectors);

/// Smallest eigenvalue of a dense symmetric matrix.
double min_eigenvalue(const std::vector<double>& matrix, int m);

/// In-place Cholesky of a symmetric positive definite matrix; lower factor L
/// lands in the lower triangle. Returns false when the matrix is not positive.
bool cholesky(std::vector<double>& matrix, int m);

void solve_lower(const std::vector<double>& l, int m, std::vector<double>& x);
void solve_lower_transposed(const std::vector<double>& l, int m, std::vector<double>& x);

/// Dense inverse through Gauss-Jordan with partial pivoting.
/// Returns false when a pivot falls below tol * max|entry|.
bool invert(std::vector<double> matrix, int m, std::vector<double>& inverse,
            double tol = 1e-13);

/// Solves a_x = b in place (partial pivoting). Returns false on singular pivot.
bool solve(std::vector<double> matrix, int m, std::vector<double>& rhs, double tol = 1e-13);

std::vector<double> multiply(const std::vector<double>& a, const std::vector<double>& b, int m);

}  // namespace ricciforge::linalg
