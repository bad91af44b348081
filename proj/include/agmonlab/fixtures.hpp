#pragma once

#include <vector>

#include "agmonlab/graph.hpp"
#include "agmonlab/hardy.hpp"

namespace agmonlab {
namespace fixtures {

// 1d box {-radius..radius} with a potential well q(0) = depth.
WeightedGraph z_well(int radius, double depth);

// Half-line 1..n with the Dirichlet condition at 0 absorbed as q(1) = 1
// (the restriction of the line to {n >= 1}). Origin at n = 1.
WeightedGraph n_path(int n);

// v(n) = n on the half-line fixture; harmonic away from the free end.
GraphFunction n_path_supersolution(const WeightedGraph& g);

// Closed-form optimal Hardy weight of the half-line for v(n) = n at the
// bulk vertices: 2 - sqrt(1 - 1/n) - sqrt(1 + 1/n).
double n_path_weight_formula(int n);

// Box in Z^3 with q = 0 (the Green-function fixture lives on its
// Dirichlet interior).
WeightedGraph green_box(int radius);

// v(x) = ||x||^{2-d} (v(origin) = 1): the lattice Green function model used
// on coordinate graphs.
GraphFunction inverse_norm_supersolution(const WeightedGraph& g);

// Rooted tree whose vertices at depth k have base_children + k children:
// vertex degrees grow with depth, the setting for sparse/Cheeger decay.
WeightedGraph growing_tree(int depth, int base_children);

// Nested combinatorial balls of the given radii.
std::vector<VertexSet> ball_exhaustion(const WeightedGraph& g, const std::vector<int>& radii);

// Nested coordinate boxes {|x|_inf <= r}.
std::vector<VertexSet> box_exhaustion(const WeightedGraph& g, const std::vector<int>& radii);

// radii first:last:step (inclusive), e.g. 5:30:5.
std::vector<int> parse_radii(const std::string& spec);

}  // namespace fixtures
}  // namespace agmonlab
