#include "sparsebfs/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sparsebfs {
namespace {

using Clock = std::chrono::steady_clock;

SolveReport finish(const Instance& inst, Vector x, Clock::time_point start, bool converged) {
  SolveReport rep;
  rep.objective = inst.objective(x);
  rep.x = std::move(x);
  rep.solver_calls = 1;
  rep.converged = converged;
  rep.wall_time = Clock::now() - start;
  return rep;
}

double step_for(const Instance& inst, const BaselineConfig& cfg) {
  return cfg.step_size > 0 ? cfg.step_size : default_step_size(inst);
}

}  // namespace

std::string_view to_string(BaselineMethod method) {
  switch (method) {
    case BaselineMethod::kOmp: return "omp";
    case BaselineMethod::kIht: return "iht";
    case BaselineMethod::kHtp: return "htp";
  }
  return "unknown";
}

double default_step_size(const Instance& inst) {
  const double s = spectral_norm(inst.A);
  return 1.0 / (s * s / inst.loss.gamma() + inst.lambda);
}

SolveReport omp(const Instance& inst, const RestrictedOptions& restricted) {
  const auto start = Clock::now();
  Support S;
  std::vector<bool> chosen(inst.d(), false);
  Vector x = Vector::Zero(inst.d());
  for (int round = 0; round < inst.k; ++round) {
    const Vector g = inst.gradient(x);
    int best = -1;
    for (int i = 0; i < inst.d(); ++i) {
      if (chosen[i]) continue;
      if (best < 0 || std::abs(g[i]) > std::abs(g[best])) best = i;
    }
    chosen[best] = true;
    S.insert(std::upper_bound(S.begin(), S.end(), best), best);
    x = solve_restricted(inst, S, restricted).x;
  }
  return finish(inst, std::move(x), start, true);
}

SolveReport iht(const Instance& inst, const BaselineConfig& cfg, const std::optional<Vector>& x0) {
  const auto start = Clock::now();
  const double step = step_for(inst, cfg);
  Vector x = x0 ? truncate_top(inst.k, *x0) : Vector::Zero(inst.d());
  Support support = support_of(x);
  bool converged = false;
  for (int it = 0; it < cfg.max_iters; ++it) {
    Vector next = truncate_top(inst.k, x - step * inst.gradient(x));
    Support next_support = support_of(next);
    const double moved = (next - x).norm();
    const bool stable = next_support == support && moved <= cfg.tol * std::max(1.0, next.norm());
    x = std::move(next);
    support = std::move(next_support);
    if (stable) {
      converged = true;
      break;
    }
  }
  Vector polished = solve_restricted(inst, support, cfg.restricted).x;
  return finish(inst, std::move(polished), start, converged);
}

SolveReport htp(const Instance& inst, const BaselineConfig& cfg, const std::optional<Vector>& x0) {
  const auto start = Clock::now();
  const double step = step_for(inst, cfg);
  Vector x = x0 ? truncate_top(inst.k, *x0) : Vector::Zero(inst.d());
  Support support = support_of(x);
  bool converged = false;
  for (int it = 0; it < cfg.max_iters; ++it) {
    const Vector thresholded = truncate_top(inst.k, x - step * inst.gradient(x));
    Support next_support = support_of(thresholded);
    if (it > 0 && next_support == support) {
      converged = true;
      break;
    }
    x = solve_restricted(inst, next_support, cfg.restricted).x;
    support = std::move(next_support);
  }
  return finish(inst, std::move(x), start, converged);
}

}  // namespace sparsebfs
