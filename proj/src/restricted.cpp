#include "sparsebfs/restricted.hpp"

#include <cmath>
#include <limits>

namespace sparsebfs {
namespace {

// Diagonal of the (generalized) Hessian of L at z.
Vector loss_curvature(const Loss& loss, const Vector& z) {
  const double n = loss.n();
  Vector h(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    switch (loss.kind()) {
      case LossKind::kQuadratic:
        h[i] = 1.0 / n;
        break;
      case LossKind::kHuber:
        h[i] = std::abs(z[i] - loss.b()[i]) <= loss.delta() ? 1.0 / n : 0.0;
        break;
      case LossKind::kLogistic: {
        const double t = loss.b()[i] * z[i];
        const double p = 1.0 / (1.0 + std::exp(-std::abs(t)));
        h[i] = p * (1.0 - p) / n;
        break;
      }
    }
  }
  return h;
}

Vector scatter(const Vector& w, const Support& S, int d) {
  Vector x = Vector::Zero(d);
  for (std::size_t c = 0; c < S.size(); ++c) x[S[c]] = w[static_cast<Eigen::Index>(c)];
  return x;
}

}  // namespace

Instance::Instance(Matrix A_, Loss loss_, double lambda_, int k_)
    : A(std::move(A_)), loss(std::move(loss_)), lambda(lambda_), k(k_) {
  if (A.rows() < 1 || A.cols() < 1) throw std::invalid_argument("Instance: empty design matrix");
  if (!A.allFinite()) throw std::invalid_argument("Instance: design matrix must be finite");
  if (A.rows() != loss.n()) throw std::invalid_argument("Instance: loss dimension does not match A");
  if (!(lambda > 0)) throw std::invalid_argument("Instance: lambda must be positive");
  if (k < 1 || k > A.cols()) throw std::invalid_argument("Instance: need 1 <= k <= d");
}

double Instance::objective(const Vector& x) const {
  return loss.value(A * x) + 0.5 * lambda * x.squaredNorm();
}

Vector Instance::gradient(const Vector& x) const {
  return A.transpose() * loss.gradient(A * x) + lambda * x;
}

RestrictedSolution solve_restricted(const Instance& inst, const Support& S, const RestrictedOptions& opts) {
  if (!(opts.tol > 0)) throw std::invalid_argument("solve_restricted: tol must be positive");
  for (int i : S)
    if (i < 0 || i >= inst.d()) throw std::invalid_argument("solve_restricted: index out of range");

  RestrictedSolution out;
  if (S.empty()) {
    out.x = Vector::Zero(inst.d());
    out.value = inst.objective(out.x);
    return out;
  }

  const Matrix AS = gather_columns(inst.A, S);
  const Eigen::Index s = AS.cols();
  const double n = inst.n();
  const double lambda = inst.lambda;

  auto restricted_value = [&](const Vector& w) {
    return inst.loss.value(AS * w) + 0.5 * lambda * w.squaredNorm();
  };
  auto restricted_grad = [&](const Vector& z, const Vector& w) -> Vector {
    return AS.transpose() * inst.loss.gradient(z) + lambda * w;
  };

  Vector w = Vector::Zero(s);
  if (inst.loss.kind() == LossKind::kQuadratic) {
    Matrix H = AS.transpose() * AS / n;
    H.diagonal().array() += lambda;
    const Vector rhs = AS.transpose() * inst.loss.b() / n;
    w = H.llt().solve(rhs);
    out.iterations = 1;
  } else {
    Vector z = AS * w;
    Vector g = restricted_grad(z, w);
    double f = restricted_value(w);
    int it = 0;
    for (; it < opts.max_iters && g.norm() > opts.tol; ++it) {
      Matrix H = AS.transpose() * loss_curvature(inst.loss, z).asDiagonal() * AS;
      H.diagonal().array() += lambda;
      const Vector step = -H.llt().solve(g);
      const double slope = g.dot(step);
      const double gnorm = g.norm();
      double t = 1.0;
      bool moved = false;
      for (int bt = 0; bt < 60; ++bt, t *= 0.5) {
        const Vector w_try = w + t * step;
        const Vector z_try = AS * w_try;
        const double f_try = restricted_value(w_try);
        const bool armijo = f_try <= f + 1e-4 * t * slope;
        // Near the optimum the decrease in f drops below rounding; a smaller
        // gradient is then the better progress measure.
        bool flat = false;
        Vector g_try;
        if (!armijo && f_try <= f + 8 * std::numeric_limits<double>::epsilon() * std::abs(f)) {
          g_try = restricted_grad(z_try, w_try);
          flat = g_try.norm() < gnorm;
        }
        if (armijo || flat) {
          w = w_try;
          z = z_try;
          f = f_try;
          g = flat ? g_try : restricted_grad(z, w);
          moved = true;
          break;
        }
      }
      if (!moved) break;
    }
    out.iterations = it;
  }

  out.x = scatter(w, S, inst.d());
  out.value = inst.objective(out.x);
  out.certificate = restricted_grad(AS * w, w).norm();
  if (!(out.certificate <= opts.tol)) {
    // Quadratic solves are exact up to rounding; only the iterative path
    // can legitimately fall short.
    if (inst.loss.kind() != LossKind::kQuadratic || !std::isfinite(out.value))
      throw ConvergenceError("solve_restricted: gradient norm " + std::to_string(out.certificate) +
                                 " above tolerance",
                             out);
  }
  return out;
}

}  // namespace sparsebfs
