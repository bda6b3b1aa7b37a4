#pragma once

#include "sparsebfs/losses.hpp"
#include "sparsebfs/numeric.hpp"

#include <stdexcept>
#include <string>

namespace sparsebfs {

/// min P(x) = L(Ax) + (λ/2)‖x‖²  subject to  ‖x‖₀ ≤ k.
struct Instance {
  Matrix A;
  Loss loss;
  double lambda;
  int k;

  Instance(Matrix A, Loss loss, double lambda, int k);

  int n() const { return static_cast<int>(A.rows()); }
  int d() const { return static_cast<int>(A.cols()); }

  double objective(const Vector& x) const;
  Vector gradient(const Vector& x) const;
};

struct RestrictedSolution {
  Vector x;            // dimension d, zero off the support set
  double value = 0.0;  // P(x)
  double certificate = 0.0;  // ‖∇_S P(x)‖ at the returned point
  int iterations = 0;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, RestrictedSolution best)
      : std::runtime_error(what), best_(std::move(best)) {}
  const RestrictedSolution& best() const { return best_; }

 private:
  RestrictedSolution best_;
};

struct RestrictedOptions {
  double tol = 1e-12;
  int max_iters = 100000;
};

/// Minimizes P over {x : supp(x) ⊆ S}. The quadratic loss is solved through a
/// Cholesky factorization of A_SᵀA_S/n + λI; Huber and logistic by a damped
/// (generalized) Newton method with Armijo backtracking until the restricted
/// gradient norm reaches opts.tol. Throws ConvergenceError carrying the best
/// iterate when that target cannot be met.
RestrictedSolution solve_restricted(const Instance& inst, const Support& S,
                                    const RestrictedOptions& opts = {});

}  // namespace sparsebfs
