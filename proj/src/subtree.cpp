#include "sparsebfs/subtree.hpp"

#include "sparsebfs/topk_prox.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace sparsebfs {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxBacktracks = 60;

bool dual_regime(const Node& node) {
  return node.size() < node.k() && node.size() + node.tail_size() > node.k();
}

// (D(β_t) − D(β_{t−1})) / P_min ≤ ε, absolute when P_min is not positive.
bool small_improvement(double improvement, double incumbent, double epsilon) {
  if (incumbent > 0 && std::isfinite(incumbent)) return improvement / incumbent <= epsilon;
  return improvement <= epsilon;
}

// Candidate on the support of the k largest entries of a primal iterate.
RestrictedSolution polish_top(const Instance& inst, const Vector& y, const RestrictedOptions& opts) {
  Support keep;
  for (int i : top_indices(inst.k, y))
    if (y[i] != 0.0) keep.push_back(i);
  return solve_restricted(inst, keep, opts);
}

BoundResult pruned(double low, const DualState& state, int iterations) {
  BoundResult r;
  r.low = low;
  r.status = BoundStatus::kPruned;
  r.final_state = state;
  r.iterations = iterations;
  r.value = kInf;
  return r;
}

}  // namespace

std::string_view to_string(DualMethod method) { return method == DualMethod::kPdal ? "pdal" : "sga"; }

DualMethod parse_dual_method(std::string_view name) {
  if (name == "pdal") return DualMethod::kPdal;
  if (name == "sga") return DualMethod::kSga;
  throw std::invalid_argument("unknown dual method: " + std::string(name));
}

std::string_view to_string(BoundStatus status) {
  switch (status) {
    case BoundStatus::kExact: return "exact";
    case BoundStatus::kDualBound: return "dual";
    case BoundStatus::kPruned: return "pruned";
  }
  return "unknown";
}

DualState initial_dual_state(const Instance& inst) { return initial_dual_state(inst, spectral_norm(inst.A)); }

DualState initial_dual_state(const Instance& inst, double spectral_norm_A) {
  if (!(spectral_norm_A > 0)) throw std::invalid_argument("initial_dual_state: A must be nonzero");
  DualState st;
  st.beta = Vector::Zero(inst.n());
  st.y = Vector::Zero(inst.d());
  st.tau = 1.0 / spectral_norm_A;
  st.rho = 1.0;
  st.theta = 1.0;
  st.eta = 1.0;
  return st;
}

bool exceeds_incumbent(double value, double incumbent) {
  return value > incumbent + kNumericZero * std::max(1.0, std::abs(incumbent));
}

double dual_value(const Instance& inst, const Node& node, const Vector& beta) {
  return dual_value(inst, node, beta, inst.A.transpose() * beta);
}

double dual_value(const Instance& inst, const Node& node, const Vector& beta, const Vector& At_beta) {
  const double conj = inst.loss.conjugate(beta);
  if (!std::isfinite(conj)) return -kInf;
  double head = 0.0;
  for (int i : node.indices()) head += At_beta[i] * At_beta[i];
  const int tail_k = node.k() - node.size();
  double tail = 0.0;
  if (tail_k > 0 && node.tail_size() > 0) {
    const double t = top_norm(tail_k, At_beta.tail(node.tail_size()));
    tail = t * t;
  }
  return -conj - (head + tail) / (2.0 * inst.lambda);
}

BoundResult pdal_maximize(const Instance& inst, const Node& node, const DualState& init, double incumbent,
                          const SolverConfig& cfg) {
  if (!dual_regime(node)) throw std::invalid_argument("pdal_maximize: node " + node.to_string() + " is solved exactly");
  const Matrix& A = inst.A;
  const double lambda = inst.lambda;
  const double gamma = inst.loss.gamma();
  const int tail_len = node.tail_size();
  const int tail_k = node.k() - node.size();

  Vector beta = init.beta;
  Vector y = init.y;
  double tau = init.tau, rho = init.rho, theta = 1.0;  // θ restarts at 1 every call

  Vector At_beta = A.transpose() * beta;
  double dual = dual_value(inst, node, beta, At_beta);
  double dual_max = dual;
  if (cfg.pruning && exceeds_incumbent(dual, incumbent)) return pruned(dual_max, init, 0);

  Vector Ay = A * y;
  Vector y_next(inst.d()), Ay_next(inst.n());
  int iterations = 0;
  bool converged = false;
  while (iterations < cfg.max_iters) {
    ++iterations;
    const Vector beta_next = inst.loss.prox_conjugate(tau, beta - tau * Ay);
    const Vector At_beta_next = A.transpose() * beta_next;
    const double dual_next = dual_value(inst, node, beta_next, At_beta_next);
    dual_max = std::max(dual_max, dual_next);
    if (cfg.pruning && exceeds_incumbent(dual_next, incumbent)) {
      DualState st{beta_next, y, tau, rho, theta, init.eta};
      return pruned(dual_max, st, iterations);
    }

    const double rho_next = rho * (1.0 + gamma * tau);
    double tau_next = tau * std::sqrt(rho / rho_next * (1.0 + theta));
    double theta_next = 1.0;
    bool accepted = false;
    for (int bt = 0; bt < kMaxBacktracks; ++bt) {
      theta_next = tau_next / tau;
      const double step = rho_next * tau_next;
      const Vector ybar = y + step * (At_beta_next + theta_next * (At_beta_next - At_beta));
      y_next.setZero();
      for (int i : node.indices()) y_next[i] = ybar[i] / (1.0 + lambda * step);
      if (tail_len > 0)
        y_next.tail(tail_len) = prox_topk_sq_conjugate(step, lambda, tail_k, ybar.tail(tail_len));
      Ay_next = A * y_next;
      if (std::sqrt(rho_next) * tau_next * (Ay_next - Ay).norm() <= (y_next - y).norm()) {
        accepted = true;
        break;
      }
      tau_next *= 0.5;
    }
    if (!accepted) throw std::runtime_error("pdal_maximize: linesearch failed at node " + node.to_string());

    converged = small_improvement(dual_next - dual, incumbent, cfg.epsilon) && dual_next >= dual_max;
    beta = beta_next;
    At_beta = At_beta_next;
    dual = dual_next;
    y = y_next;
    Ay = Ay_next;
    tau = tau_next;
    rho = rho_next;
    theta = theta_next;
    if (converged) break;
  }

  BoundResult r;
  r.low = dual_max;
  r.status = BoundStatus::kDualBound;
  r.iterations = iterations;
  r.hit_iteration_cap = !converged;
  r.final_state = DualState{beta, y, tau, rho, theta, init.eta};
  const RestrictedSolution cand = polish_top(inst, y, cfg.restricted);
  r.x_sol = cand.x;
  r.value = cand.value;
  return r;
}

BoundResult sga_maximize(const Instance& inst, const Node& node, const DualState& init, double incumbent,
                         const SolverConfig& cfg) {
  if (!dual_regime(node)) throw std::invalid_argument("sga_maximize: node " + node.to_string() + " is solved exactly");
  const Matrix& A = inst.A;
  const int tail_len = node.tail_size();
  const int tail_k = node.k() - node.size();

  // argmin over the subtree of ⟨Ax, β⟩ + (λ/2)‖x‖², given w = Aᵀβ.
  auto primal_of = [&](const Vector& w) {
    Vector x = Vector::Zero(inst.d());
    for (int i : node.indices()) x[i] = -w[i] / inst.lambda;
    if (tail_len > 0) x.tail(tail_len) = -truncate_top(tail_k, w.tail(tail_len)) / inst.lambda;
    return x;
  };

  Vector beta = inst.loss.project_conjugate_domain(init.beta);
  double eta = init.eta;
  Vector At_beta = A.transpose() * beta;
  double dual = dual_value(inst, node, beta, At_beta);
  if (cfg.pruning && exceeds_incumbent(dual, incumbent)) return pruned(dual, init, 0);

  double first_eta = eta;
  int iterations = 0;
  bool converged = false;
  while (iterations < cfg.max_iters) {
    ++iterations;
    const Vector grad = A * primal_of(At_beta) - inst.loss.conjugate_gradient(beta);
    eta *= 2.0;
    Vector beta_next = beta, At_beta_next = At_beta;
    double dual_next = dual;
    bool accepted = false;
    for (int bt = 0; bt < kMaxBacktracks; ++bt) {
      const Vector trial = inst.loss.project_conjugate_domain(beta + eta * grad);
      const Vector At_trial = A.transpose() * trial;
      const double d_trial = dual_value(inst, node, trial, At_trial);
      if (d_trial >= dual) {
        beta_next = trial;
        At_beta_next = At_trial;
        dual_next = d_trial;
        accepted = true;
        break;
      }
      eta *= 0.5;
    }
    if (iterations == 1) first_eta = eta;
    if (!accepted) {
      // No ascent step found: β is (numerically) a maximizer.
      converged = true;
      break;
    }
    if (cfg.pruning && exceeds_incumbent(dual_next, incumbent)) {
      DualState st;
      st.beta = beta_next;
      st.eta = first_eta;
      return pruned(dual_next, st, iterations);
    }
    converged = small_improvement(dual_next - dual, incumbent, cfg.epsilon);
    beta = beta_next;
    At_beta = At_beta_next;
    dual = dual_next;
    if (converged) break;
  }

  BoundResult r;
  r.low = dual;
  r.status = BoundStatus::kDualBound;
  r.iterations = iterations;
  r.hit_iteration_cap = !converged;
  r.final_state.beta = beta;
  r.final_state.eta = first_eta;
  const RestrictedSolution cand = solve_restricted(inst, support_of(primal_of(At_beta)), cfg.restricted);
  r.x_sol = cand.x;
  r.value = cand.value;
  return r;
}

BoundResult subtree_solve(const Instance& inst, const Node& node, const DualState& warm, double incumbent,
                          const SolverConfig& cfg) {
  const bool leaf = node.size() == node.k();
  const bool single_completion = node.size() + node.tail_size() <= node.k();
  if (leaf || single_completion) {
    Support S = node.indices();
    if (!leaf)
      for (int i = node.frontier(); i < node.d(); ++i) S.push_back(i);
    const RestrictedSolution sol = solve_restricted(inst, S, cfg.restricted);
    if (cfg.pruning && exceeds_incumbent(sol.value, incumbent)) return pruned(sol.value, warm, 0);
    BoundResult r;
    r.low = sol.value;
    r.x_sol = sol.x;
    r.value = sol.value;
    r.final_state = warm;
    r.iterations = sol.iterations;
    r.status = BoundStatus::kExact;
    return r;
  }
  if (cfg.method == DualMethod::kPdal) return pdal_maximize(inst, node, warm, incumbent, cfg);
  return sga_maximize(inst, node, warm, incumbent, cfg);
}

}  // namespace sparsebfs
