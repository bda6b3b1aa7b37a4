#pragma once

#include "sparsebfs/restricted.hpp"
#include "sparsebfs/state_space.hpp"

#include <string_view>

namespace sparsebfs {

enum class DualMethod { kPdal, kSga };

std::string_view to_string(DualMethod method);
DualMethod parse_dual_method(std::string_view name);

/// Iterate carried between parent and child nodes. PDAL uses (β, y, τ, ρ) and
/// reports its last θ, which the next call ignores; supergradient ascent uses (β, η).
struct DualState {
  Vector beta;
  Vector y;
  double tau = 1.0;
  double rho = 1.0;
  double theta = 1.0;
  double eta = 1.0;
};

/// Cold start: β = 0, y = 0, τ = 1/‖A‖₂, ρ = θ = η = 1.
DualState initial_dual_state(const Instance& inst);
DualState initial_dual_state(const Instance& inst, double spectral_norm_A);

struct SolverConfig {
  double epsilon = 1e-5;      // relative dual-improvement tolerance
  int max_iters = 50000;      // per dual maximization; D_max is returned at the cap
  DualMethod method = DualMethod::kPdal;
  bool warm_start = true;
  bool pruning = true;
  RestrictedOptions restricted;
};

enum class BoundStatus { kExact, kDualBound, kPruned };

std::string_view to_string(BoundStatus status);

struct BoundResult {
  double low = 0.0;    // lower bound on F(S)
  Vector x_sol;        // feasible candidate, ‖x_sol‖₀ ≤ k (empty when pruned)
  double value = 0.0;  // P(x_sol)
  DualState final_state;
  int iterations = 0;
  BoundStatus status = BoundStatus::kExact;
  bool hit_iteration_cap = false;
};

/// D(β;S) = −L*(β) − (1/2λ)‖A_Sᵀβ‖² − (1/2λ)‖A_{S>}ᵀβ‖²_{k−s,2}.
///
/// Fenchel–Young gives D(β;S) ≤ F(S) = min{P(x) : x in the subtree of S}
/// for every β. Returns −infinity outside the domain of L*.
double dual_value(const Instance& inst, const Node& node, const Vector& beta);

/// Same, reusing a precomputed Aᵀβ.
double dual_value(const Instance& inst, const Node& node, const Vector& beta, const Vector& At_beta);

/// True when a witnessed value exceeds the incumbent by more than the
/// numerical-zero tolerance (relative for |incumbent| > 1).
bool exceeds_incumbent(double value, double incumbent);

/// Primal-dual iterations with linesearch maximizing D(·;S), started from
/// init. Requires |S| < k < |S| + |S_>|. Returns status kPruned as soon as a
/// dual value above the incumbent is seen (when cfg.pruning), otherwise
/// low = max observed dual value and a candidate polished on the support of
/// the top-k entries of the final primal iterate.
BoundResult pdal_maximize(const Instance& inst, const Node& node, const DualState& init,
                          double incumbent, const SolverConfig& cfg);

/// Projected supergradient ascent with step doubling and backtracking; the
/// alternative to pdal_maximize with the same contract. Uses init.beta and
/// init.eta.
BoundResult sga_maximize(const Instance& inst, const Node& node, const DualState& init,
                         double incumbent, const SolverConfig& cfg);

/// Lower bound and candidate for a node. Nodes that are leaves, or whose
/// subtree is a single completion (|S| + |S_>| ≤ k), are solved exactly;
/// everything else goes through the configured dual method.
BoundResult subtree_solve(const Instance& inst, const Node& node, const DualState& warm,
                          double incumbent, const SolverConfig& cfg);

}  // namespace sparsebfs
