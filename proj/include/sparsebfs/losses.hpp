#pragma once

#include "sparsebfs/numeric.hpp"

#include <string>
#include <string_view>

namespace sparsebfs {

enum class LossKind { kQuadratic, kHuber, kLogistic };

std::string_view to_string(LossKind kind);
LossKind parse_loss_kind(std::string_view name);

/// Separable convex loss L(z) of the linear predictor z = Ax, with
/// observations b:
///
///   quadratic  (1/2n) Σ (b_i − z_i)²
///   huber      (1/n)  Σ l(z_i − b_i),  l(r) = r²/2 if |r| ≤ δ, δ(|r| − δ/2) otherwise
///   logistic   (1/n)  Σ log(1 + exp(−b_i z_i)),  b_i ∈ {−1, +1}
///
/// All three are (1/γ)-smooth with γ = n, n and 4n respectively, so the
/// conjugate L* is γ-strongly convex on its domain.
class Loss {
 public:
  static Loss quadratic(Vector b);
  static Loss huber(Vector b, double delta);
  static Loss logistic(Vector b);

  LossKind kind() const { return kind_; }
  const Vector& b() const { return b_; }
  double delta() const { return delta_; }
  int n() const { return static_cast<int>(b_.size()); }

  /// Smoothness parameter γ: L is (1/γ)-smooth.
  double gamma() const;

  double value(const Vector& z) const;
  Vector gradient(const Vector& z) const;

  /// L*(β); +infinity outside the effective domain.
  double conjugate(const Vector& beta) const;
  bool in_conjugate_domain(const Vector& beta) const;

  /// An element of ∂L*(β) for β in the domain. On the boundary of the
  /// logistic domain the (infinite) derivative is evaluated at a point
  /// pulled 1e-12 inside.
  Vector conjugate_gradient(const Vector& beta) const;

  /// Euclidean projection onto the effective domain of L*.
  Vector project_conjugate_domain(const Vector& beta) const;

  /// argmin_y τL(y) + ½‖y − v‖².
  Vector prox(double tau, const Vector& v) const;

  /// argmin_β τL*(β) + ½‖β − v‖² = v − τ·prox(1/τ, v/τ).
  Vector prox_conjugate(double tau, const Vector& v) const;

 private:
  Loss(LossKind kind, Vector b, double delta);
  void check_dim(const Vector& z, const char* what) const;

  LossKind kind_;
  Vector b_;
  double delta_ = 0.0;
};

}  // namespace sparsebfs
