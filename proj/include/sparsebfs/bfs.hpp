#pragma once

#include "sparsebfs/subtree.hpp"

#include <chrono>
#include <vector>

namespace sparsebfs {

/// One subtree solve, as seen by the search.
struct NodeRecord {
  Support node;
  double low = 0.0;
  double value = 0.0;  // P of the candidate (infinite when pruned)
  double incumbent = 0.0;  // P_min passed to the solve
  BoundStatus status = BoundStatus::kExact;
};

struct SolveReport {
  Vector x;
  double objective = 0.0;
  long solver_calls = 0;
  long pruned = 0;
  long heap_peak = 0;
  long dual_iterations = 0;
  std::chrono::duration<double> wall_time{0};
  double delta = 0.0;
  bool converged = true;  // false when an inexact method stopped at its iteration cap
  std::vector<NodeRecord> trace;  // filled when BfsOptions::record_trace
};

struct BfsOptions {
  double delta = 0.0;
  SolverConfig solver;
  bool record_trace = false;
};

/// Best-first search over the state-space tree. Nodes are popped in order of
/// their lower bound (ties FIFO); the search stops at the first popped node
/// whose candidate is within delta of its own bound, which guarantees
/// P(x) ≤ P(x*) + delta. Children of a popped node are solved warm-started
/// from its final dual iterate and discarded when their bound exceeds the
/// incumbent objective.
SolveReport bfs_solve(const Instance& inst, const BfsOptions& opts = {});

}  // namespace sparsebfs
