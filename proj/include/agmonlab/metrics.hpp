#pragma once

#include <vector>

#include "agmonlab/graph.hpp"
#include "agmonlab/report.hpp"

namespace agmonlab {

// Per-vertex distances from a root set together with the per-edge lengths
// they were computed from. Unreachable vertices carry +infinity.
struct MetricField {
  const WeightedGraph* graph = nullptr;
  VertexSet roots;
  std::vector<double> dist;          // one per vertex
  std::vector<double> edge_lengths;  // parallel to graph->edges()
  std::vector<int> predecessor;      // -1 for roots/unreachable
  double jump_size = 0.0;            // max edge length over edges with b > 0
  int unreachable = 0;

  double operator[](int x) const { return dist[static_cast<std::size_t>(x)]; }
};

// Label-setting shortest-path run (binary heap, ties broken by smaller
// vertex index) from the given roots over nonnegative edge lengths.
MetricField shortest_paths(const WeightedGraph& g, const std::vector<double>& edge_lengths,
                           const VertexSet& roots);

// Intrinsic-metric audit: reports max_x (sum_y b(x,y) d(x,y)^2) / m(x), pass
// iff the ratio is <= 1 + 1e-12, plus the jump size.
VerificationReport intrinsic_audit(const WeightedGraph& g, const std::vector<double>& edge_lengths);
VerificationReport intrinsic_audit(const MetricField& field);

// Combinatorial BFS distance from the origin divided by sqrt(D), D the
// maximum vertex degree Deg = (1/m) sum_y b(x,y). An intrinsic metric.
MetricField scaled_combinatorial_metric(const WeightedGraph& g);

enum class AgmonVariant { Cutoff, Intro };

// Agmon path metric. Cutoff variant: edge length min(1, sqrt(min(w_x,w_y)) * sigma_xy)
// (jump size <= 1 by construction); intro variant: sqrt(min(D, w_x, w_y)).
MetricField agmon_metric(const WeightedGraph& g, const std::vector<double>& sigma,
                         const GraphFunction& w, int root,
                         AgmonVariant variant = AgmonVariant::Cutoff,
                         double degree_bound = -1.0);

// Multi-source distances d(U, .) over the given edge lengths.
MetricField dist_to_set(const WeightedGraph& g, const std::vector<double>& edge_lengths,
                        const VertexSet& u);

// Metric ball {x : dist(x) <= r}.
VertexSet metric_ball(const MetricField& field, double r);

// Per-edge lengths all equal to the given constant.
std::vector<double> uniform_edge_lengths(const WeightedGraph& g, double value);

}  // namespace agmonlab
