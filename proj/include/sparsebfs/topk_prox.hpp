#pragma once

#include "sparsebfs/numeric.hpp"

namespace sparsebfs {

struct TopkProxStats {
  // Candidate (start, end, level) triplets scored by the linear scan.
  int triplets_examined = 0;
  bool early_exit = false;
};

/// Proximal operator of x ↦ (μ/2)‖x‖²_{k,2}, where ‖·‖_{k,2} is the ℓ2 norm
/// of the k largest-magnitude entries:
///
///   argmin_x (μ/2)‖x‖²_{k,2} + ½‖x − v‖².
///
/// After sorting |v| non-increasingly into u, the minimizer has the shape
/// (u_1/(1+μ), …, u_{s−1}/(1+μ), ξ, …, ξ, u_{e+1}, …, u_d) with a single
/// flat run on positions s ≤ k ≤ e. The run is located by one pass over
/// candidate endpoints, scoring each in O(1) from prefix sums, so the scan
/// examines at most d triplets. Signs and positions of v are restored.
///
/// k = 0 returns v; k > dim(v) is treated as k = dim(v).
Vector prox_topk_sq(double mu, int k, const Vector& v, TopkProxStats* stats = nullptr);

/// Proximal operator of τ·h* where h = (1/(2λ))‖·‖²_{k,2}, computed through
/// Moreau's identity: v − τ·prox_{(1/(2λτ))‖·‖²_{k,2}}(v/τ).
Vector prox_topk_sq_conjugate(double tau, double lambda, int k, const Vector& v,
                              TopkProxStats* stats = nullptr);

/// (μ/2)‖x‖²_{k,2} + ½‖x − v‖², the objective minimized by prox_topk_sq.
double topk_prox_objective(double mu, int k, const Vector& x, const Vector& v);

}  // namespace sparsebfs
