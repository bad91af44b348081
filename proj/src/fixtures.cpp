#include "agmonlab/fixtures.hpp"

#include <cmath>
#include <string>

namespace agmonlab {
namespace fixtures {

WeightedGraph z_well(int radius, double depth) {
  return gen_lattice_box(1, radius, [depth](const std::vector<int>& c) {
    return c[0] == 0 ? depth : 0.0;
  });
}

WeightedGraph n_path(int n) {
  if (n < 1) fail(Errc::BadParams, "n_path needs n >= 1");
  std::vector<EdgeInput> edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
  std::vector<double> m(static_cast<std::size_t>(n), 1.0);
  std::vector<double> q(static_cast<std::size_t>(n), 0.0);
  q[0] = 1.0;  // edge to the removed vertex 0
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) labels.push_back(std::to_string(i + 1));
  return build_graph(edges, std::move(m), std::move(q), std::move(labels), {}, 0);
}

GraphFunction n_path_supersolution(const WeightedGraph& g) {
  GraphFunction v(g);
  for (int x = 0; x < g.n(); ++x) v[x] = static_cast<double>(x + 1);
  return v;
}

double n_path_weight_formula(int n) {
  return 2.0 - std::sqrt(1.0 - 1.0 / n) - std::sqrt(1.0 + 1.0 / n);
}

WeightedGraph green_box(int radius) { return gen_lattice_box(3, radius); }

GraphFunction inverse_norm_supersolution(const WeightedGraph& g) {
  if (!g.has_coords()) fail(Errc::BadParams, "needs a coordinate graph");
  const int d = g.coord_dim();
  GraphFunction v(g);
  for (int x = 0; x < g.n(); ++x) {
    double r = g.coord_norm2(x);
    v[x] = r > 0.0 ? std::pow(r, 2.0 - d) : 1.0;
  }
  return v;
}

WeightedGraph growing_tree(int depth, int base_children) {
  if (depth < 1 || base_children < 1) fail(Errc::BadParams, "growing_tree needs depth, children >= 1");
  std::vector<EdgeInput> edges;
  std::vector<int> level = {0};
  int next = 1;
  for (int k = 0; k < depth; ++k) {
    std::vector<int> nl;
    for (int p : level) {
      for (int c = 0; c < base_children + k; ++c) {
        edges.push_back({p, next, 1.0});
        nl.push_back(next);
        ++next;
      }
    }
    level = std::move(nl);
  }
  return build_graph(edges, std::vector<double>(static_cast<std::size_t>(next), 1.0),
                     std::vector<double>(static_cast<std::size_t>(next), 0.0), {}, {}, 0);
}

std::vector<VertexSet> ball_exhaustion(const WeightedGraph& g, const std::vector<int>& radii) {
  std::vector<VertexSet> out;
  for (int r : radii) out.push_back(combinatorial_ball(g, r));
  return out;
}

std::vector<VertexSet> box_exhaustion(const WeightedGraph& g, const std::vector<int>& radii) {
  if (!g.has_coords()) fail(Errc::BadParams, "box exhaustion needs coordinates");
  std::vector<VertexSet> out;
  for (int r : radii) {
    std::vector<int> idx;
    for (int x = 0; x < g.n(); ++x)
      if (g.coord_norm_inf(x) <= r) idx.push_back(x);
    out.emplace_back(g, std::move(idx));
  }
  return out;
}

std::vector<int> parse_radii(const std::string& spec) {
  int first = 0, last = 0, step = 1;
  auto c1 = spec.find(':');
  auto c2 = spec.find(':', c1 == std::string::npos ? 0 : c1 + 1);
  try {
    if (c1 == std::string::npos) {
      first = last = std::stoi(spec);
    } else if (c2 == std::string::npos) {
      first = std::stoi(spec.substr(0, c1));
      last = std::stoi(spec.substr(c1 + 1));
    } else {
      first = std::stoi(spec.substr(0, c1));
      last = std::stoi(spec.substr(c1 + 1, c2 - c1 - 1));
      step = std::stoi(spec.substr(c2 + 1));
    }
  } catch (const std::exception&) {
    fail(Errc::ConfigError, "bad radii spec (want first:last:step): " + spec);
  }
  if (step <= 0 || last < first) fail(Errc::ConfigError, "bad radii spec: " + spec);
  std::vector<int> out;
  for (int r = first; r <= last; r += step) out.push_back(r);
  return out;
}

}  // namespace fixtures
}  // namespace agmonlab
