#pragma once

#include <random>
#include <vector>

#include "agmonlab/graph.hpp"

namespace agmonlab::testing {

// Connected random graph: spanning tree plus extra edges, b in (0,2],
// m in (0.1,2], q in [-1,1].
inline WeightedGraph random_graph(std::mt19937_64& rng, int max_n = 50, bool nonneg_q = false) {
  std::uniform_int_distribution<int> nd(2, max_n);
  const int n = nd(rng);
  std::uniform_real_distribution<double> bd(1e-6, 2.0);
  std::uniform_real_distribution<double> md(0.1, 2.0);
  std::uniform_real_distribution<double> qd(nonneg_q ? 0.0 : -1.0, 1.0);

  std::vector<EdgeInput> edges;
  for (int i = 1; i < n; ++i) {
    std::uniform_int_distribution<int> pd(0, i - 1);
    edges.push_back({pd(rng), i, bd(rng)});
  }
  std::uniform_int_distribution<int> vd(0, n - 1);
  for (int extra = 0; extra < n / 2; ++extra) {
    int u = vd(rng), v = vd(rng);
    if (u == v) continue;
    bool dup = false;
    for (const auto& e : edges)
      if ((e.u == u && e.v == v) || (e.u == v && e.v == u)) dup = true;
    if (!dup) edges.push_back({u, v, bd(rng)});
  }
  std::vector<double> m(static_cast<std::size_t>(n)), q(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    m[static_cast<std::size_t>(i)] = md(rng);
    q[static_cast<std::size_t>(i)] = qd(rng);
  }
  return build_graph(edges, std::move(m), std::move(q));
}

inline GraphFunction random_function(std::mt19937_64& rng, const WeightedGraph& g, double lo = -1.0,
                                     double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  GraphFunction f(g);
  for (int x = 0; x < g.n(); ++x) f[x] = d(rng);
  return f;
}

}  // namespace agmonlab::testing
