#include "oracles.hpp"

#include <doctest.h>

using namespace sparsebfs;

namespace {
const LossKind kAll[] = {LossKind::kQuadratic, LossKind::kHuber, LossKind::kLogistic};
double lambda_for(LossKind kind) { return kind == LossKind::kLogistic ? 2e-4 : 1e-3; }
}  // namespace

TEST_CASE("omp with an orthonormal design picks the largest correlation") {
  std::mt19937_64 g(71);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix Q = Eigen::HouseholderQR<Matrix>(oracle::gaussian(g, 12, 6)).householderQ() * Matrix::Identity(12, 6);
    const Vector b = oracle::gaussian(g, 12);
    const Instance inst(Q, Loss::quadratic(b), 1e-9, 1);
    const SolveReport r = omp(inst);
    Eigen::Index best;
    (Q.transpose() * b).cwiseAbs().maxCoeff(&best);
    CHECK(support_of(r.x) == Support{static_cast<int>(best)});
  }
}

TEST_CASE("baselines are feasible and never beat the optimum") {
  std::mt19937_64 g(72);
  for (LossKind kind : kAll) {
    CAPTURE(to_string(kind));
    for (int trial = 0; trial < 5; ++trial) {
      const Instance inst = oracle::random_instance(g, kind, 40, 9, 3, lambda_for(kind));
      const double best = oracle::brute_force(inst).value;
      for (const SolveReport& r : {omp(inst), iht(inst), htp(inst)}) {
        CHECK(support_of(r.x).size() <= 3u);
        CHECK(std::isfinite(r.objective));
        CHECK(r.objective >= best - 1e-10);
        CHECK(r.objective == doctest::Approx(inst.objective(r.x)).epsilon(1e-14));
        CHECK(r.solver_calls == 1);
      }
      // determinism
      CHECK(iht(inst).x == iht(inst).x);
      CHECK(htp(inst).x == htp(inst).x);
      CHECK(omp(inst).x == omp(inst).x);
    }
  }
}

TEST_CASE("k = d reduces to the unconstrained problem") {
  std::mt19937_64 g(73);
  for (LossKind kind : kAll) {
    CAPTURE(to_string(kind));
    const Instance inst = oracle::random_instance(g, kind, 40, 5, 5, 0.05);
    const double opt = solve_restricted(inst, {0, 1, 2, 3, 4}).value;
    CHECK(omp(inst).objective == doctest::Approx(opt).epsilon(1e-12));
    BaselineConfig cfg;
    cfg.tol = 1e-10;
    CHECK(iht(inst, cfg).objective == doctest::Approx(opt).epsilon(1e-10));
    CHECK(htp(inst, cfg).objective == doctest::Approx(opt).epsilon(1e-10));
  }
}

TEST_CASE("the optimum is a fixed point of hard thresholding on a well-conditioned instance") {
  std::mt19937_64 g(74);
  for (int trial = 0; trial < 5; ++trial) {
    const Instance inst = oracle::random_instance(g, LossKind::kQuadratic, 200, 8, 2, 1e-3);
    const oracle::Best best = oracle::brute_force(inst);
    const Vector x0 = solve_restricted(inst, best.support).x;
    BaselineConfig cfg;
    cfg.max_iters = 1;
    CHECK(support_of(iht(inst, cfg, x0).x) == best.support);
    CHECK(support_of(htp(inst, cfg, x0).x) == best.support);
  }
}

TEST_CASE("htp polish never increases the objective") {
  std::mt19937_64 g(75);
  const Instance inst = oracle::random_instance(g, LossKind::kHuber, 40, 10, 3, 1e-3);
  const double step = default_step_size(inst);
  for (int it = 1; it <= 6; ++it) {
    BaselineConfig cfg;
    cfg.max_iters = it;
    const Vector x = htp(inst, cfg).x;
    const Vector z = truncate_top(3, x - step * inst.gradient(x));
    CHECK(solve_restricted(inst, support_of(z)).value <= inst.objective(z) + 1e-12);
  }
}

TEST_CASE("default step size is the inverse gradient Lipschitz constant") {
  std::mt19937_64 g(76);
  const Instance inst = oracle::random_instance(g, LossKind::kHuber, 30, 6, 2, 1e-3);
  const double s = oracle::svd_norm(inst.A);
  CHECK(default_step_size(inst) == doctest::Approx(1.0 / (s * s / 30 + 1e-3)).epsilon(1e-8));
}
