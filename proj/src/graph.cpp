#include "agmonlab/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace agmonlab {

namespace {

std::string default_label(int i) { return std::to_string(i); }

std::string coord_label(const std::vector<int>& c) {
  std::string s = "(";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(c[i]);
  }
  s += ")";
  return s;
}

}  // namespace

VertexSet::VertexSet(const WeightedGraph& g, std::vector<int> indices)
    : g_(&g), idx_(std::move(indices)) {
  std::sort(idx_.begin(), idx_.end());
  idx_.erase(std::unique(idx_.begin(), idx_.end()), idx_.end());
  for (int x : idx_) {
    if (x < 0 || x >= g.n()) fail(Errc::BadParams, "vertex index out of range in VertexSet");
  }
}

bool VertexSet::contains(int x) const {
  return std::binary_search(idx_.begin(), idx_.end(), x);
}

VertexSet VertexSet::all(const WeightedGraph& g) {
  std::vector<int> v(static_cast<std::size_t>(g.n()));
  for (int i = 0; i < g.n(); ++i) v[static_cast<std::size_t>(i)] = i;
  return VertexSet(g, std::move(v));
}

VertexSet VertexSet::complement() const {
  if (!g_) return {};
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(g_->n()) - idx_.size());
  std::size_t k = 0;
  for (int i = 0; i < g_->n(); ++i) {
    if (k < idx_.size() && idx_[k] == i) {
      ++k;
    } else {
      out.push_back(i);
    }
  }
  return VertexSet(*g_, std::move(out));
}

GraphFunction::GraphFunction(const WeightedGraph& g, double fill)
    : g_(&g), vals_(static_cast<std::size_t>(g.n()), fill) {}

GraphFunction::GraphFunction(const WeightedGraph& g, std::vector<double> values)
    : g_(&g), vals_(std::move(values)) {
  if (vals_.size() != static_cast<std::size_t>(g.n()))
    fail(Errc::BadParams, "GraphFunction length does not match vertex count");
  check_finite();
}

void GraphFunction::check_finite() const {
  for (double v : vals_) {
    if (!std::isfinite(v)) fail(Errc::BadParams, "GraphFunction value is not finite");
  }
}

std::span<const int> WeightedGraph::neighbors(int x) const {
  auto s = static_cast<std::size_t>(adj_start_[static_cast<std::size_t>(x)]);
  auto e = static_cast<std::size_t>(adj_start_[static_cast<std::size_t>(x) + 1]);
  return {adj_.data() + s, e - s};
}

std::span<const double> WeightedGraph::neighbor_weights(int x) const {
  auto s = static_cast<std::size_t>(adj_start_[static_cast<std::size_t>(x)]);
  auto e = static_cast<std::size_t>(adj_start_[static_cast<std::size_t>(x) + 1]);
  return {adj_b_.data() + s, e - s};
}

std::span<const int> WeightedGraph::neighbor_edge_ids(int x) const {
  auto s = static_cast<std::size_t>(adj_start_[static_cast<std::size_t>(x)]);
  auto e = static_cast<std::size_t>(adj_start_[static_cast<std::size_t>(x) + 1]);
  return {adj_edge_.data() + s, e - s};
}

double WeightedGraph::b(int x, int y) const {
  auto nb = neighbors(x);
  auto it = std::lower_bound(nb.begin(), nb.end(), y);
  if (it == nb.end() || *it != y) return 0.0;
  return neighbor_weights(x)[static_cast<std::size_t>(it - nb.begin())];
}

int WeightedGraph::degree_count(int x) const {
  return adj_start_[static_cast<std::size_t>(x) + 1] - adj_start_[static_cast<std::size_t>(x)];
}

double WeightedGraph::coord_norm2(int x) const {
  if (!has_coords()) fail(Errc::BadParams, "graph has no coordinates");
  double s = 0.0;
  for (int c : coords_[static_cast<std::size_t>(x)]) s += static_cast<double>(c) * c;
  return std::sqrt(s);
}

int WeightedGraph::coord_norm_inf(int x) const {
  if (!has_coords()) fail(Errc::BadParams, "graph has no coordinates");
  int s = 0;
  for (int c : coords_[static_cast<std::size_t>(x)]) s = std::max(s, std::abs(c));
  return s;
}

double WeightedGraph::measure(const VertexSet& s) const {
  double out = 0.0;
  for (int x : s.indices()) out += m(x);
  return out;
}

WeightedGraph build_graph(const std::vector<EdgeInput>& edges, std::vector<double> m,
                          std::vector<double> q, std::vector<std::string> labels,
                          std::vector<std::vector<int>> coords, std::optional<int> origin) {
  const int n = static_cast<int>(m.size());
  if (n <= 0) fail(Errc::BadParams, "graph needs at least one vertex");
  if (q.size() != m.size()) fail(Errc::BadParams, "q length does not match m length");
  for (int i = 0; i < n; ++i) {
    if (!(m[static_cast<std::size_t>(i)] > 0.0) || !std::isfinite(m[static_cast<std::size_t>(i)]))
      fail(Errc::NonPositiveMeasure, "m(" + std::to_string(i) + ") must be strictly positive");
    if (!std::isfinite(q[static_cast<std::size_t>(i)]))
      fail(Errc::BadParams, "q(" + std::to_string(i) + ") is not finite");
  }
  if (!labels.empty() && labels.size() != m.size())
    fail(Errc::BadParams, "labels length does not match vertex count");
  if (!coords.empty()) {
    if (coords.size() != m.size()) fail(Errc::BadParams, "coords length does not match vertex count");
    for (const auto& c : coords)
      if (c.size() != coords[0].size()) fail(Errc::BadParams, "coords have mixed dimensions");
  }
  if (origin && (*origin < 0 || *origin >= n)) fail(Errc::BadParams, "origin out of range");

  // Canonicalize to u < v and validate. Both orientations of an edge are
  // accepted when their weights agree; a repeated orientation is a duplicate.
  struct Seen {
    double b;
    bool fwd;
    bool rev;
  };
  std::map<std::pair<int, int>, Seen> canon;
  for (const auto& e : edges) {
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
      fail(Errc::BadParams, "edge endpoint out of range");
    if (!std::isfinite(e.b) || e.b < 0.0) fail(Errc::BadParams, "edge weight must be finite and >= 0");
    if (e.u == e.v) {
      if (e.b > 0.0) fail(Errc::SelfLoop, "self-loop with positive weight at vertex " + std::to_string(e.u));
      continue;
    }
    if (e.b == 0.0) continue;
    std::pair<int, int> key{std::min(e.u, e.v), std::max(e.u, e.v)};
    const bool fwd = e.u < e.v;
    auto it = canon.find(key);
    if (it == canon.end()) {
      canon.emplace(key, Seen{e.b, fwd, !fwd});
      continue;
    }
    std::string name = "(" + std::to_string(key.first) + "," + std::to_string(key.second) + ")";
    if ((fwd && it->second.fwd) || (!fwd && it->second.rev))
      fail(Errc::DuplicateEdge, "edge " + name + " given twice");
    if (it->second.b != e.b)
      fail(Errc::AsymmetricInput, "both orientations of edge " + name + " given with differing weights");
    if (fwd)
      it->second.fwd = true;
    else
      it->second.rev = true;
  }

  WeightedGraph g;
  g.n_ = n;
  g.m_ = std::move(m);
  g.q_ = std::move(q);
  g.coords_ = std::move(coords);
  g.origin_ = origin;
  if (labels.empty()) {
    g.labels_.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      if (g.has_coords())
        g.labels_.push_back(coord_label(g.coords_[static_cast<std::size_t>(i)]));
      else
        g.labels_.push_back(default_label(i));
    }
  } else {
    g.labels_ = std::move(labels);
  }

  g.edges_.reserve(canon.size());
  std::vector<int> counts(static_cast<std::size_t>(n), 0);
  for (const auto& [key, seen] : canon) {
    g.edges_.push_back({key.first, key.second, seen.b});
    ++counts[static_cast<std::size_t>(key.first)];
    ++counts[static_cast<std::size_t>(key.second)];
  }
  g.adj_start_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 0; i < n; ++i)
    g.adj_start_[static_cast<std::size_t>(i) + 1] =
        g.adj_start_[static_cast<std::size_t>(i)] + counts[static_cast<std::size_t>(i)];
  g.adj_.assign(static_cast<std::size_t>(g.adj_start_.back()), 0);
  g.adj_b_.assign(static_cast<std::size_t>(g.adj_start_.back()), 0.0);
  g.adj_edge_.assign(static_cast<std::size_t>(g.adj_start_.back()), 0);
  std::vector<int> cursor(g.adj_start_.begin(), g.adj_start_.end() - 1);
  for (std::size_t eid = 0; eid < g.edges_.size(); ++eid) {
    const Edge& e = g.edges_[eid];
    // map.begin()..end() is sorted by (u,v), so per-vertex lists come out sorted
    // for the u side; the v side needs a final sort pass.
    int cu = cursor[static_cast<std::size_t>(e.u)]++;
    g.adj_[static_cast<std::size_t>(cu)] = e.v;
    g.adj_b_[static_cast<std::size_t>(cu)] = e.b;
    g.adj_edge_[static_cast<std::size_t>(cu)] = static_cast<int>(eid);
    int cv = cursor[static_cast<std::size_t>(e.v)]++;
    g.adj_[static_cast<std::size_t>(cv)] = e.u;
    g.adj_b_[static_cast<std::size_t>(cv)] = e.b;
    g.adj_edge_[static_cast<std::size_t>(cv)] = static_cast<int>(eid);
  }
  for (int x = 0; x < n; ++x) {
    auto s = static_cast<std::size_t>(g.adj_start_[static_cast<std::size_t>(x)]);
    auto e = static_cast<std::size_t>(g.adj_start_[static_cast<std::size_t>(x) + 1]);
    std::vector<std::size_t> order(e - s);
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b2) {
      return g.adj_[s + a] < g.adj_[s + b2];
    });
    std::vector<int> na(order.size());
    std::vector<double> nb(order.size());
    std::vector<int> ne(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      na[i] = g.adj_[s + order[i]];
      nb[i] = g.adj_b_[s + order[i]];
      ne[i] = g.adj_edge_[s + order[i]];
    }
    std::copy(na.begin(), na.end(), g.adj_.begin() + static_cast<std::ptrdiff_t>(s));
    std::copy(nb.begin(), nb.end(), g.adj_b_.begin() + static_cast<std::ptrdiff_t>(s));
    std::copy(ne.begin(), ne.end(), g.adj_edge_.begin() + static_cast<std::ptrdiff_t>(s));
  }

  g.wdeg_.assign(static_cast<std::size_t>(n), 0.0);
  g.deg_.assign(static_cast<std::size_t>(n), 0.0);
  for (int x = 0; x < n; ++x) {
    double s = 0.0;
    for (double w : g.neighbor_weights(x)) s += w;
    g.wdeg_[static_cast<std::size_t>(x)] = s;
    double qp = std::max(g.q_[static_cast<std::size_t>(x)], 0.0);
    g.deg_[static_cast<std::size_t>(x)] = s + qp * g.m_[static_cast<std::size_t>(x)];
  }
  return g;
}

WeightedGraph gen_lattice_box(int d, int radius,
                              const std::function<double(const std::vector<int>&)>& q_rule,
                              std::size_t vertex_cap) {
  if (d < 1 || radius < 0) fail(Errc::BadParams, "gen_lattice_box needs d >= 1, radius >= 0");
  const std::size_t side = 2 * static_cast<std::size_t>(radius) + 1;
  std::size_t count = 1;
  for (int i = 0; i < d; ++i) {
    if (count > vertex_cap / side) fail(Errc::SizeOverflow, "lattice box exceeds vertex cap");
    count *= side;
  }

  const int n = static_cast<int>(count);
  std::vector<std::vector<int>> coords(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(d)));
  // index = sum_i (x_i + radius) * side^i
  for (int idx = 0; idx < n; ++idx) {
    int rem = idx;
    for (int i = 0; i < d; ++i) {
      coords[static_cast<std::size_t>(idx)][static_cast<std::size_t>(i)] =
          rem % static_cast<int>(side) - radius;
      rem /= static_cast<int>(side);
    }
  }
  std::vector<EdgeInput> edges;
  edges.reserve(static_cast<std::size_t>(d) * count);
  std::size_t stride = 1;
  for (int i = 0; i < d; ++i) {
    for (int idx = 0; idx < n; ++idx) {
      if (coords[static_cast<std::size_t>(idx)][static_cast<std::size_t>(i)] < radius)
        edges.push_back({idx, idx + static_cast<int>(stride), 1.0});
    }
    stride *= side;
  }
  std::vector<double> m(static_cast<std::size_t>(n), 1.0);
  std::vector<double> q(static_cast<std::size_t>(n), 0.0);
  if (q_rule) {
    for (int idx = 0; idx < n; ++idx)
      q[static_cast<std::size_t>(idx)] = q_rule(coords[static_cast<std::size_t>(idx)]);
  }
  int origin = 0;
  {
    int rem = 0;
    std::size_t s = 1;
    for (int i = 0; i < d; ++i) {
      rem += radius * static_cast<int>(s);
      s *= side;
    }
    origin = rem;
  }
  return build_graph(edges, std::move(m), std::move(q), {}, std::move(coords), origin);
}

WeightedGraph gen_family(FamilyKind kind, int size_or_branching, int depth) {
  switch (kind) {
    case FamilyKind::Path: {
      int n = size_or_branching;
      if (n < 1) fail(Errc::BadParams, "path needs >= 1 vertices");
      std::vector<EdgeInput> edges;
      for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
      return build_graph(edges, std::vector<double>(static_cast<std::size_t>(n), 1.0),
                         std::vector<double>(static_cast<std::size_t>(n), 0.0), {}, {}, 0);
    }
    case FamilyKind::Cycle: {
      int n = size_or_branching;
      if (n < 3) fail(Errc::BadParams, "cycle needs >= 3 vertices");
      std::vector<EdgeInput> edges;
      for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, 1.0});
      return build_graph(edges, std::vector<double>(static_cast<std::size_t>(n), 1.0),
                         std::vector<double>(static_cast<std::size_t>(n), 0.0), {}, {}, 0);
    }
    case FamilyKind::Tree: {
      int br = size_or_branching;
      if (br < 1 || depth < 0) fail(Errc::BadParams, "tree needs branching >= 1, depth >= 0");
      std::vector<EdgeInput> edges;
      std::vector<int> level = {0};
      int next = 1;
      for (int dpt = 0; dpt < depth; ++dpt) {
        std::vector<int> nl;
        for (int p : level) {
          for (int c = 0; c < br; ++c) {
            edges.push_back({p, next, 1.0});
            nl.push_back(next);
            ++next;
          }
        }
        level = std::move(nl);
      }
      int n = next;
      return build_graph(edges, std::vector<double>(static_cast<std::size_t>(n), 1.0),
                         std::vector<double>(static_cast<std::size_t>(n), 0.0), {}, {}, 0);
    }
  }
  fail(Errc::BadParams, "unknown family kind");
}

WeightedGraph dirichlet_restriction(const WeightedGraph& g, const VertexSet& u) {
  if (u.graph() != &g) fail(Errc::GraphMismatch, "vertex set belongs to another graph");
  if (u.empty()) fail(Errc::EmptySubset, "dirichlet_restriction needs a nonempty set");
  const auto& keep = u.indices();
  std::vector<int> newid(static_cast<std::size_t>(g.n()), -1);
  for (std::size_t i = 0; i < keep.size(); ++i) newid[static_cast<std::size_t>(keep[i])] = static_cast<int>(i);

  std::vector<EdgeInput> edges;
  std::vector<double> m, q;
  std::vector<std::string> labels;
  std::vector<std::vector<int>> coords;
  m.reserve(keep.size());
  q.reserve(keep.size());
  for (int x : keep) {
    double lost = 0.0;
    for (std::size_t i = 0; i < g.neighbors(x).size(); ++i) {
      int y = g.neighbors(x)[i];
      double w = g.neighbor_weights(x)[i];
      if (newid[static_cast<std::size_t>(y)] < 0) {
        lost += w;
      } else if (y > x) {
        edges.push_back({newid[static_cast<std::size_t>(x)], newid[static_cast<std::size_t>(y)], w});
      }
    }
    m.push_back(g.m(x));
    q.push_back(g.q(x) + lost / g.m(x));
    labels.push_back(g.label(x));
    if (g.has_coords()) coords.push_back(g.coords(x));
  }
  std::optional<int> origin;
  if (g.origin() && newid[static_cast<std::size_t>(*g.origin())] >= 0)
    origin = newid[static_cast<std::size_t>(*g.origin())];
  return build_graph(edges, std::move(m), std::move(q), std::move(labels), std::move(coords), origin);
}

VertexSet neighborhood(const VertexSet& u) {
  const WeightedGraph* g = u.graph();
  if (!g) return {};
  std::vector<int> out = u.indices();
  for (int x : u.indices())
    for (int y : g->neighbors(x)) out.push_back(y);
  return VertexSet(*g, std::move(out));
}

VertexSet outer_layer(const WeightedGraph& g) {
  if (!g.has_coords()) fail(Errc::NoBoundary, "graph has no coordinates to derive a boundary layer");
  int r = 0;
  for (int x = 0; x < g.n(); ++x) r = std::max(r, g.coord_norm_inf(x));
  std::vector<int> out;
  for (int x = 0; x < g.n(); ++x)
    if (g.coord_norm_inf(x) == r) out.push_back(x);
  return VertexSet(g, std::move(out));
}

VertexSet combinatorial_ball(const WeightedGraph& g, int radius) {
  if (!g.origin()) fail(Errc::NoOrigin, "graph has no origin");
  std::vector<int> hops(static_cast<std::size_t>(g.n()), -1);
  std::deque<int> queue;
  hops[static_cast<std::size_t>(*g.origin())] = 0;
  queue.push_back(*g.origin());
  std::vector<int> out;
  while (!queue.empty()) {
    int x = queue.front();
    queue.pop_front();
    if (hops[static_cast<std::size_t>(x)] > radius) continue;
    out.push_back(x);
    for (int y : g.neighbors(x)) {
      if (hops[static_cast<std::size_t>(y)] < 0) {
        hops[static_cast<std::size_t>(y)] = hops[static_cast<std::size_t>(x)] + 1;
        if (hops[static_cast<std::size_t>(y)] <= radius) queue.push_back(y);
      }
    }
  }
  return VertexSet(g, std::move(out));
}

std::string graph_to_json_string(const WeightedGraph& g) {
  nlohmann::ordered_json j;
  j["vertices"] = nlohmann::ordered_json::array();
  for (int x = 0; x < g.n(); ++x) {
    nlohmann::ordered_json v;
    v["id"] = x;
    v["label"] = g.label(x);
    v["m"] = g.m(x);
    v["q"] = g.q(x);
    if (g.has_coords()) v["coords"] = g.coords(x);
    j["vertices"].push_back(std::move(v));
  }
  j["edges"] = nlohmann::ordered_json::array();
  for (const Edge& e : g.edges()) {
    nlohmann::ordered_json je;
    je["u"] = e.u;
    je["v"] = e.v;
    je["b"] = e.b;
    j["edges"].push_back(std::move(je));
  }
  if (g.origin()) j["origin"] = *g.origin();
  return j.dump(2) + "\n";
}

WeightedGraph graph_from_json_string(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::ParseError, e.what());
  }
  try {
    if (!j.contains("vertices") || !j["vertices"].is_array())
      fail(Errc::ParseError, "missing \"vertices\" array");
    const auto& jv = j["vertices"];
    const int n = static_cast<int>(jv.size());
    std::vector<double> m(static_cast<std::size_t>(n)), q(static_cast<std::size_t>(n));
    std::vector<std::string> labels(static_cast<std::size_t>(n));
    std::vector<std::vector<int>> coords;
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (const auto& v : jv) {
      int id = v.at("id").get<int>();
      if (id < 0 || id >= n) fail(Errc::ParseError, "vertex id out of range: " + std::to_string(id));
      if (seen[static_cast<std::size_t>(id)])
        fail(Errc::ParseError, "vertex id repeated: " + std::to_string(id));
      seen[static_cast<std::size_t>(id)] = 1;
      m[static_cast<std::size_t>(id)] = v.at("m").get<double>();
      q[static_cast<std::size_t>(id)] = v.at("q").get<double>();
      labels[static_cast<std::size_t>(id)] = v.value("label", std::to_string(id));
      if (v.contains("coords")) {
        if (coords.empty()) coords.resize(static_cast<std::size_t>(n));
        coords[static_cast<std::size_t>(id)] = v["coords"].get<std::vector<int>>();
      }
    }
    std::vector<EdgeInput> edges;
    if (j.contains("edges")) {
      for (const auto& e : j["edges"]) {
        edges.push_back({e.at("u").get<int>(), e.at("v").get<int>(), e.at("b").get<double>()});
      }
    }
    std::optional<int> origin;
    if (j.contains("origin") && !j["origin"].is_null()) origin = j["origin"].get<int>();
    return build_graph(edges, std::move(m), std::move(q), std::move(labels), std::move(coords), origin);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::ParseError, e.what());
  }
}

void save_graph(const WeightedGraph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::IOError, "cannot open for writing: " + path);
  out << graph_to_json_string(g);
  if (!out) fail(Errc::IOError, "write failed: " + path);
}

WeightedGraph load_graph(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::IOError, "cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return graph_from_json_string(ss.str());
}

}  // namespace agmonlab
