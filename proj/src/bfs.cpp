#include "sparsebfs/bfs.hpp"

#include <queue>
#include <stdexcept>

namespace sparsebfs {
namespace {

struct HeapEntry {
  double low;
  long seq;
  Node node;
  Vector x_sol;
  double value;
  DualState warm;
};

struct LaterFirst {
  bool operator()(const HeapEntry& a, const HeapEntry& b) const {
    if (a.low != b.low) return a.low > b.low;
    return a.seq > b.seq;
  }
};

}  // namespace

SolveReport bfs_solve(const Instance& inst, const BfsOptions& opts) {
  if (!(opts.delta >= 0)) throw std::invalid_argument("bfs_solve: delta must be nonnegative");
  const auto start = std::chrono::steady_clock::now();
  const SolverConfig& cfg = opts.solver;

  SolveReport report;
  report.delta = opts.delta;
  const DualState cold = initial_dual_state(inst);

  auto record = [&](const Node& node, const BoundResult& r, double incumbent) {
    if (!opts.record_trace) return;
    report.trace.push_back({node.indices(), r.low, r.value, incumbent, r.status});
  };

  // x = 0 is feasible, so P(0) bounds every node from above; it serves as
  // the incumbent for the root solve.
  Vector x_min = Vector::Zero(inst.d());
  double p_min = inst.objective(x_min);

  std::priority_queue<HeapEntry, std::vector<HeapEntry>, LaterFirst> heap;
  long seq = 0;

  const Node root = Node::root(inst.d(), inst.k);
  SolverConfig root_cfg = cfg;
  root_cfg.pruning = false;
  BoundResult r = subtree_solve(inst, root, cold, p_min, root_cfg);
  ++report.solver_calls;
  report.dual_iterations += r.iterations;
  record(root, r, p_min);
  if (r.value < p_min) {
    x_min = r.x_sol;
    p_min = r.value;
  }
  heap.push({r.low, seq++, root, r.x_sol, r.value, cfg.warm_start ? r.final_state : cold});
  report.heap_peak = 1;

  while (!heap.empty()) {
    HeapEntry top = heap.top();
    heap.pop();
    if (top.value <= top.low + opts.delta + kNumericZero * std::max(1.0, std::abs(top.low))) {
      report.x = std::move(top.x_sol);
      report.objective = top.value;
      report.wall_time = std::chrono::steady_clock::now() - start;
      return report;
    }
    for (const Node& child : top.node.children()) {
      const double incumbent = p_min;
      BoundResult cr = subtree_solve(inst, child, cfg.warm_start ? top.warm : cold, incumbent, cfg);
      ++report.solver_calls;
      report.dual_iterations += cr.iterations;
      record(child, cr, incumbent);
      if (cr.status == BoundStatus::kPruned) {
        ++report.pruned;
        continue;
      }
      if (cr.value < p_min) {
        x_min = cr.x_sol;
        p_min = cr.value;
      }
      heap.push({cr.low, seq++, child, std::move(cr.x_sol), cr.value,
                 cfg.warm_start ? std::move(cr.final_state) : cold});
      report.heap_peak = std::max<long>(report.heap_peak, static_cast<long>(heap.size()));
    }
  }
  throw std::logic_error("bfs_solve: heap exhausted without meeting the termination test");
}

}  // namespace sparsebfs
