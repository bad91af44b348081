#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "agmonlab/errors.hpp"

namespace agmonlab {

struct EdgeInput {
  int u = 0;
  int v = 0;
  double b = 1.0;
};

// Canonical undirected edge, stored once with u < v.
struct Edge {
  int u = 0;
  int v = 0;
  double b = 0.0;
};

class WeightedGraph;

// Sorted, duplicate-free set of vertex indices of a fixed graph.
class VertexSet {
 public:
  VertexSet() = default;
  VertexSet(const WeightedGraph& g, std::vector<int> indices);

  const WeightedGraph* graph() const { return g_; }
  const std::vector<int>& indices() const { return idx_; }
  std::size_t size() const { return idx_.size(); }
  bool empty() const { return idx_.empty(); }
  bool contains(int x) const;

  static VertexSet all(const WeightedGraph& g);
  VertexSet complement() const;

 private:
  const WeightedGraph* g_ = nullptr;
  std::vector<int> idx_;
};

// Real-valued function on the vertices of a specific graph. All values are
// required to be finite.
class GraphFunction {
 public:
  GraphFunction() = default;
  GraphFunction(const WeightedGraph& g, double fill = 0.0);
  GraphFunction(const WeightedGraph& g, std::vector<double> values);

  const WeightedGraph* graph() const { return g_; }
  std::size_t size() const { return vals_.size(); }
  double operator[](int x) const { return vals_[static_cast<std::size_t>(x)]; }
  double& operator[](int x) { return vals_[static_cast<std::size_t>(x)]; }
  const std::vector<double>& values() const { return vals_; }
  std::vector<double>& values() { return vals_; }

  void check_finite() const;

 private:
  const WeightedGraph* g_ = nullptr;
  std::vector<double> vals_;
};

// Weighted graph b over (X, m) with potential q on a finite vertex set.
//
// Vertices are dense integer indices 0..n-1; external labels are kept for
// reporting. Edge weights are stored in per-vertex adjacency lists sorted by
// neighbor index (each edge appears in both lists) plus one canonical list
// with u < v. Immutable after construction.
class WeightedGraph {
 public:
  int n() const { return n_; }
  double m(int x) const { return m_[static_cast<std::size_t>(x)]; }
  double q(int x) const { return q_[static_cast<std::size_t>(x)]; }
  const std::vector<double>& m() const { return m_; }
  const std::vector<double>& q() const { return q_; }
  const std::string& label(int x) const { return labels_[static_cast<std::size_t>(x)]; }

  std::span<const int> neighbors(int x) const;
  std::span<const double> neighbor_weights(int x) const;
  // Edge ids of the adjacency entries of x, parallel to neighbors(x).
  std::span<const int> neighbor_edge_ids(int x) const;

  const std::vector<Edge>& edges() const { return edges_; }
  // b(x,y); 0 when x,y are not adjacent.
  double b(int x, int y) const;
  int degree_count(int x) const;

  // deg(x) = sum_y b(x,y) + q_+(x) m(x), and deg_m = deg / m.
  double deg(int x) const { return deg_[static_cast<std::size_t>(x)]; }
  double deg_m(int x) const { return deg_[static_cast<std::size_t>(x)] / m_[static_cast<std::size_t>(x)]; }
  // sum_y b(x,y) (no potential term).
  double edge_weight_sum(int x) const { return wdeg_[static_cast<std::size_t>(x)]; }

  std::optional<int> origin() const { return origin_; }
  bool has_coords() const { return !coords_.empty(); }
  const std::vector<int>& coords(int x) const { return coords_[static_cast<std::size_t>(x)]; }
  int coord_dim() const { return coords_.empty() ? 0 : static_cast<int>(coords_[0].size()); }

  double coord_norm2(int x) const;   // Euclidean norm of coords
  int coord_norm_inf(int x) const;

  // Total measure of a set of vertices.
  double measure(const VertexSet& s) const;

  friend WeightedGraph build_graph(const std::vector<EdgeInput>& edges,
                                   std::vector<double> m, std::vector<double> q,
                                   std::vector<std::string> labels,
                                   std::vector<std::vector<int>> coords,
                                   std::optional<int> origin);

 private:
  int n_ = 0;
  std::vector<std::string> labels_;
  std::vector<double> m_;
  std::vector<double> q_;
  std::vector<std::vector<int>> coords_;
  std::optional<int> origin_;

  std::vector<Edge> edges_;
  // CSR adjacency
  std::vector<int> adj_start_;
  std::vector<int> adj_;
  std::vector<double> adj_b_;
  std::vector<int> adj_edge_;

  std::vector<double> deg_;
  std::vector<double> wdeg_;
};

WeightedGraph build_graph(const std::vector<EdgeInput>& edges,
                          std::vector<double> m, std::vector<double> q,
                          std::vector<std::string> labels = {},
                          std::vector<std::vector<int>> coords = {},
                          std::optional<int> origin = std::nullopt);

// Box {-radius..radius}^d with unit edge weights, m = 1, coords set and the
// origin at 0. q_rule (optional) assigns the potential from the coordinates.
WeightedGraph gen_lattice_box(int d, int radius,
                              const std::function<double(const std::vector<int>&)>& q_rule = {},
                              std::size_t vertex_cap = 500000);

enum class FamilyKind { Path, Cycle, Tree };

// Unit-weight test families: path/cycle on `size` vertices, or the complete
// rooted tree with `branching` children per node and the given depth.
WeightedGraph gen_family(FamilyKind kind, int size_or_branching, int depth = 0);

// Restriction to U with removed edges absorbed into the potential:
// q~ = q + (1/m) * sum_{y not in U} b(.,y), so the restricted form equals h
// on functions supported in U.
WeightedGraph dirichlet_restriction(const WeightedGraph& g, const VertexSet& u);

// U together with all vertices adjacent to U.
VertexSet neighborhood(const VertexSet& u);

// Vertices of g with ||coords||_inf equal to the maximum over the graph
// (the implicit Dirichlet layer of a generated box).
VertexSet outer_layer(const WeightedGraph& g);

// Combinatorial (hop-count) ball of the given radius around the origin.
VertexSet combinatorial_ball(const WeightedGraph& g, int radius);

void save_graph(const WeightedGraph& g, const std::string& path);
WeightedGraph load_graph(const std::string& path);

std::string graph_to_json_string(const WeightedGraph& g);
WeightedGraph graph_from_json_string(const std::string& text);

}  // namespace agmonlab
