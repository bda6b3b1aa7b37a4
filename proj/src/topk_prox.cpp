#include "sparsebfs/topk_prox.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace sparsebfs {

Vector prox_topk_sq(double mu, int k, const Vector& v, TopkProxStats* stats) {
  if (!(mu > 0)) throw std::invalid_argument("prox_topk_sq: mu must be positive");
  if (k < 0) throw std::invalid_argument("prox_topk_sq: k must be nonnegative");
  TopkProxStats local;
  TopkProxStats& st = stats ? *stats : local;
  st = TopkProxStats{};

  const int d = static_cast<int>(v.size());
  k = std::min(k, d);
  if (k == 0) return v;

  // order[i-1] is the position of the i-th largest |v|; ties keep index order.
  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&v](int a, int b) { return std::abs(v[a]) > std::abs(v[b]); });

  // 1-based with sentinels u[d+1] = 0 and ubar[0] = +inf.
  std::vector<double> u(d + 2, 0.0), ubar(k + 1);
  for (int i = 1; i <= d; ++i) u[i] = std::abs(v[order[i - 1]]);
  const double shrink = 1.0 + mu;
  ubar[0] = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= k; ++i) ubar[i] = u[i] / shrink;

  std::vector<double> sorted(d + 1);
  if (ubar[k] >= u[k + 1]) {
    st.early_exit = true;
    for (int i = 1; i <= d; ++i) sorted[i] = i <= k ? ubar[i] : u[i];
  } else {
    std::vector<double> p1(d + 1, 0.0), p2(d + 1, 0.0);
    for (int i = 1; i <= d; ++i) {
      p1[i] = p1[i - 1] + u[i];
      p2[i] = p2[i - 1] + u[i] * u[i];
    }
    // g(js, je, ξ) = (1+μ) Σ_{i=js}^{k} (ξ − ū_i)² + Σ_{i=k+1}^{je} (ξ − u_i)²
    auto score = [&](int js, int je, double xi) {
      const double m1 = k - js + 1;
      const double m2 = je - k;
      const double head = shrink * m1 * xi * xi - 2.0 * xi * (p1[k] - p1[js - 1]) +
                          (p2[k] - p2[js - 1]) / shrink;
      const double tail = m2 * xi * xi - 2.0 * xi * (p1[je] - p1[k]) + (p2[je] - p2[k]);
      return head + tail;
    };

    int best_start = k, best_end = k;
    double best_xi = ubar[k];
    double g_min = std::numeric_limits<double>::infinity();
    int j_hat = k;
    int reach = 0;  // max{j : u_j > ū_js}, nondecreasing in js
    for (int js = 1; js <= k; ++js) {
      while (reach < d && u[reach + 1] > ubar[js]) ++reach;
      if (reach < j_hat) continue;
      for (int je = j_hat; je <= reach; ++je) {
        ++st.triplets_examined;
        const double denom = mu * (k - js + 1) + (je - js + 1);
        const double xi_free = (p1[je] - p1[js - 1]) / denom;
        const double xi = std::min(ubar[js - 1], std::max(u[je + 1], xi_free));
        const double g = score(js, je, xi);
        if (g < g_min) {
          g_min = g;
          best_start = js;
          best_end = je;
          best_xi = xi;
        }
      }
      j_hat = reach;
    }
    for (int i = 1; i <= d; ++i) {
      if (i < best_start) sorted[i] = ubar[i];
      else if (i <= best_end) sorted[i] = best_xi;
      else sorted[i] = u[i];
    }
  }

  Vector out(d);
  for (int i = 1; i <= d; ++i) {
    const int pos = order[i - 1];
    out[pos] = v[pos] >= 0 ? sorted[i] : -sorted[i];
  }
  return out;
}

Vector prox_topk_sq_conjugate(double tau, double lambda, int k, const Vector& v, TopkProxStats* stats) {
  if (!(tau > 0) || !(lambda > 0))
    throw std::invalid_argument("prox_topk_sq_conjugate: tau and lambda must be positive");
  const double mu = 1.0 / (lambda * tau);
  return v - tau * prox_topk_sq(mu, k, v / tau, stats);
}

double topk_prox_objective(double mu, int k, const Vector& x, const Vector& v) {
  const double t = top_norm(k, x);
  return 0.5 * mu * t * t + 0.5 * (x - v).squaredNorm();
}

}  // namespace sparsebfs
