#include "sparsebfs/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sparsebfs {

Support top_indices(int j, const Vector& z) {
  if (j < 0) throw std::invalid_argument("top_indices: j must be nonnegative");
  const int dim = static_cast<int>(z.size());
  Support order(dim);
  std::iota(order.begin(), order.end(), 0);
  if (j >= dim) return order;
  auto by_magnitude = [&z](int a, int b) {
    const double za = std::abs(z[a]);
    const double zb = std::abs(z[b]);
    return za > zb || (za == zb && a < b);
  };
  std::nth_element(order.begin(), order.begin() + j, order.end(), by_magnitude);
  order.resize(j);
  std::sort(order.begin(), order.end());
  return order;
}

Vector truncate_top(int j, const Vector& z) {
  if (j >= z.size()) return z;
  Vector out = Vector::Zero(z.size());
  for (int i : top_indices(j, z)) out[i] = z[i];
  return out;
}

double top_norm(int j, const Vector& z) {
  if (j >= z.size()) return z.norm();
  double sq = 0.0;
  for (int i : top_indices(j, z)) sq += z[i] * z[i];
  return std::sqrt(sq);
}

Support support_of(const Vector& x) {
  Support s;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (x[i] != 0.0) s.push_back(static_cast<int>(i));
  return s;
}

double spectral_norm(const Matrix& A, double tol, int max_iters) {
  if (!(tol > 0)) throw std::invalid_argument("spectral_norm: tol must be positive");
  if (A.size() == 0 || A.isZero(0.0)) return 0.0;
  Vector v = Vector::Ones(A.cols()) / std::sqrt(static_cast<double>(A.cols()));
  if ((A * v).isZero(0.0)) {
    // All-ones start is in the null space; restart on the heaviest column.
    Eigen::Index heaviest = 0;
    A.colwise().squaredNorm().maxCoeff(&heaviest);
    v = Vector::Unit(A.cols(), heaviest);
  }
  double sigma = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    const Vector w = A.transpose() * (A * v);
    // Rayleigh quotient vᵀAᵀAv with ‖v‖ = 1.
    const double next = std::sqrt(std::max(0.0, v.dot(w)));
    v = w / w.norm();
    if (std::abs(next - sigma) <= tol * next) return next;
    sigma = next;
  }
  return sigma;
}

Matrix gather_columns(const Matrix& A, const Support& idx) {
  Matrix out(A.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t c = 0; c < idx.size(); ++c) out.col(static_cast<Eigen::Index>(c)) = A.col(idx[c]);
  return out;
}

Vector gather(const Vector& x, const Support& idx) {
  Vector out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t c = 0; c < idx.size(); ++c) out[static_cast<Eigen::Index>(c)] = x[idx[c]];
  return out;
}

}  // namespace sparsebfs
