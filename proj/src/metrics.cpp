#include "agmonlab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace agmonlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_lengths(const WeightedGraph& g, const std::vector<double>& lengths) {
  if (lengths.size() != g.edges().size())
    fail(Errc::BadParams, "edge length array does not match edge count");
  for (double l : lengths)
    if (!(l >= 0.0) || !std::isfinite(l)) fail(Errc::NegativeLength, "edge lengths must be >= 0");
}

}  // namespace

std::vector<double> uniform_edge_lengths(const WeightedGraph& g, double value) {
  return std::vector<double>(g.edges().size(), value);
}

MetricField shortest_paths(const WeightedGraph& g, const std::vector<double>& edge_lengths,
                           const VertexSet& roots) {
  if (roots.graph() != &g) fail(Errc::GraphMismatch, "roots belong to another graph");
  if (roots.empty()) fail(Errc::EmptySet, "shortest_paths needs a nonempty root set");
  check_lengths(g, edge_lengths);

  MetricField field;
  field.graph = &g;
  field.roots = roots;
  field.edge_lengths = edge_lengths;
  field.dist.assign(static_cast<std::size_t>(g.n()), kInf);
  field.predecessor.assign(static_cast<std::size_t>(g.n()), -1);
  for (std::size_t i = 0; i < g.edges().size(); ++i)
    field.jump_size = std::max(field.jump_size, edge_lengths[i]);

  // (dist, vertex) heap; the vertex index in the key makes ties deterministic.
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  for (int r : roots.indices()) {
    field.dist[static_cast<std::size_t>(r)] = 0.0;
    heap.push({0.0, r});
  }
  std::vector<char> done(static_cast<std::size_t>(g.n()), 0);
  while (!heap.empty()) {
    auto [d, x] = heap.top();
    heap.pop();
    if (done[static_cast<std::size_t>(x)]) continue;
    done[static_cast<std::size_t>(x)] = 1;
    auto nb = g.neighbors(x);
    auto eids = g.neighbor_edge_ids(x);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      int y = nb[i];
      double nd = d + edge_lengths[static_cast<std::size_t>(eids[i])];
      double& dy = field.dist[static_cast<std::size_t>(y)];
      if (nd < dy || (nd == dy && field.predecessor[static_cast<std::size_t>(y)] > x)) {
        dy = nd;
        field.predecessor[static_cast<std::size_t>(y)] = x;
        heap.push({nd, y});
      }
    }
  }
  for (int x = 0; x < g.n(); ++x)
    if (field.dist[static_cast<std::size_t>(x)] == kInf) ++field.unreachable;

  // relaxation optimality along every stored edge
  for (std::size_t i = 0; i < g.edges().size(); ++i) {
    const Edge& e = g.edges()[i];
    double du = field.dist[static_cast<std::size_t>(e.u)];
    double dv = field.dist[static_cast<std::size_t>(e.v)];
    if (du == kInf || dv == kInf) continue;
    double l = edge_lengths[i];
    if (dv > du + l + 1e-12 || du > dv + l + 1e-12)
      fail(Errc::SolverFailure, "shortest-path relaxation optimality violated");
  }
  return field;
}

VerificationReport intrinsic_audit(const WeightedGraph& g, const std::vector<double>& edge_lengths) {
  check_lengths(g, edge_lengths);
  double worst = 0.0;
  int worst_x = -1;
  std::vector<double> acc(static_cast<std::size_t>(g.n()), 0.0);
  for (std::size_t i = 0; i < g.edges().size(); ++i) {
    const Edge& e = g.edges()[i];
    double c = e.b * edge_lengths[i] * edge_lengths[i];
    acc[static_cast<std::size_t>(e.u)] += c;
    acc[static_cast<std::size_t>(e.v)] += c;
  }
  for (int x = 0; x < g.n(); ++x) {
    double ratio = acc[static_cast<std::size_t>(x)] / g.m(x);
    if (ratio > worst) {
      worst = ratio;
      worst_x = x;
    }
  }
  double jump = 0.0;
  for (std::size_t i = 0; i < g.edges().size(); ++i)
    if (g.edges()[i].b > 0.0) jump = std::max(jump, edge_lengths[i]);

  VerificationReport rep;
  rep.check = "intrinsic_metric";
  rep.lhs = worst;
  rep.rhs = 1.0;
  rep.margin = 1.0 - worst;
  rep.tol = 1e-12;
  rep.pass = worst <= 1.0 + rep.tol;
  rep.notes.push_back("jump size " + fmt_double(jump));
  if (worst_x >= 0) rep.notes.push_back("worst vertex " + g.label(worst_x));
  return rep;
}

VerificationReport intrinsic_audit(const MetricField& field) {
  return intrinsic_audit(*field.graph, field.edge_lengths);
}

MetricField scaled_combinatorial_metric(const WeightedGraph& g) {
  if (!g.origin()) fail(Errc::NoOrigin, "scaled_combinatorial_metric needs an origin");
  double dmax = 0.0;
  for (int x = 0; x < g.n(); ++x) dmax = std::max(dmax, g.edge_weight_sum(x) / g.m(x));
  if (dmax <= 0.0) dmax = 1.0;  // edgeless graph; any scaling works
  const double len = 1.0 / std::sqrt(dmax);
  VertexSet root(g, {*g.origin()});
  return shortest_paths(g, uniform_edge_lengths(g, len), root);
}

MetricField agmon_metric(const WeightedGraph& g, const std::vector<double>& sigma,
                         const GraphFunction& w, int root, AgmonVariant variant,
                         double degree_bound) {
  if (w.graph() != &g) fail(Errc::GraphMismatch, "w belongs to another graph");
  for (int x = 0; x < g.n(); ++x)
    if (w[x] < 0.0) fail(Errc::NegativeWeight, "Agmon metric needs w >= 0");
  std::vector<double> lengths(g.edges().size());
  if (variant == AgmonVariant::Cutoff) {
    check_lengths(g, sigma);
    for (std::size_t i = 0; i < g.edges().size(); ++i) {
      const Edge& e = g.edges()[i];
      lengths[i] = std::min(1.0, std::sqrt(std::min(w[e.u], w[e.v])) * sigma[i]);
    }
  } else {
    double dbound = degree_bound;
    if (dbound <= 0.0) {
      for (int x = 0; x < g.n(); ++x) dbound = std::max(dbound, g.edge_weight_sum(x) / g.m(x));
      if (dbound <= 0.0) dbound = 1.0;
    }
    for (std::size_t i = 0; i < g.edges().size(); ++i) {
      const Edge& e = g.edges()[i];
      lengths[i] = std::sqrt(std::min({dbound, w[e.u], w[e.v]}));
    }
  }
  MetricField field = shortest_paths(g, lengths, VertexSet(g, {root}));
  if (variant == AgmonVariant::Cutoff && field.jump_size > 1.0 + 1e-15)
    fail(Errc::SolverFailure, "cutoff Agmon metric exceeded jump size 1");
  return field;
}

MetricField dist_to_set(const WeightedGraph& g, const std::vector<double>& edge_lengths,
                        const VertexSet& u) {
  if (u.empty()) fail(Errc::EmptySet, "dist_to_set needs a nonempty set");
  return shortest_paths(g, edge_lengths, u);
}

VertexSet metric_ball(const MetricField& field, double r) {
  std::vector<int> out;
  for (int x = 0; x < field.graph->n(); ++x)
    if (field.dist[static_cast<std::size_t>(x)] <= r) out.push_back(x);
  return VertexSet(*field.graph, std::move(out));
}

}  // namespace agmonlab
