#pragma once

#include <Eigen/Dense>

#include <vector>

namespace sparsebfs {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Sorted list of 0-based coordinate indices.
using Support = std::vector<int>;

// Numerical errors below this magnitude are treated as zero.
inline constexpr double kNumericZero = 1e-12;

// Indices of the (up to) j largest-magnitude entries of z, in increasing
// index order. Equal magnitudes are ranked by smaller index first.
Support top_indices(int j, const Vector& z);

// Keeps the j largest-magnitude entries of z and zeroes the rest.
Vector truncate_top(int j, const Vector& z);

// Euclidean norm of truncate_top(j, z).
double top_norm(int j, const Vector& z);

// Indices of the nonzero entries of x.
Support support_of(const Vector& x);

// Largest singular value of A by power iteration on AᵀA, started from the
// normalized all-ones vector. Stops when the relative change of the
// estimate drops below tol or after max_iters iterations.
double spectral_norm(const Matrix& A, double tol = 1e-10, int max_iters = 10000);

// Columns of A listed in idx, in that order.
Matrix gather_columns(const Matrix& A, const Support& idx);

// Entries of x listed in idx, in that order.
Vector gather(const Vector& x, const Support& idx);

}  // namespace sparsebfs
