#pragma once

#include "sparsebfs/bfs.hpp"

#include <optional>
#include <string_view>

namespace sparsebfs {

enum class BaselineMethod { kOmp, kIht, kHtp };

std::string_view to_string(BaselineMethod method);

struct BaselineConfig {
  // Gradient step; nonpositive selects 1/(‖A‖₂²/γ + λ), the reciprocal
  // Lipschitz constant of ∇P.
  double step_size = 0.0;
  int max_iters = 10000;
  double tol = 1e-5;
  RestrictedOptions restricted;
};

double default_step_size(const Instance& inst);

/// Orthogonal matching pursuit: k rounds of adding the coordinate with the
/// largest |∂P/∂x_i| and re-solving on the grown support.
SolveReport omp(const Instance& inst, const RestrictedOptions& restricted = {});

/// Iterative hard thresholding x ← T_k(x − step·∇P(x)) until the support is
/// stable and the iterate moves by at most tol (relative), then a final
/// restricted solve on the terminal support.
SolveReport iht(const Instance& inst, const BaselineConfig& cfg = {}, const std::optional<Vector>& x0 = {});

/// Hard thresholding pursuit: like iht, but every thresholded point is
/// replaced by the restricted minimizer on its support; stops when the
/// support repeats.
SolveReport htp(const Instance& inst, const BaselineConfig& cfg = {}, const std::optional<Vector>& x0 = {});

}  // namespace sparsebfs
