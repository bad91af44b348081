#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>
#include <set>

#include "agmonlab/graph.hpp"
#include "agmonlab/operator.hpp"
#include "helpers.hpp"

using namespace agmonlab;
using agmonlab::testing::random_function;
using agmonlab::testing::random_graph;

namespace {

// independent pair count for a box: nearest-neighbor pairs by scanning all
// coordinate pairs
int brute_force_box_edges(const WeightedGraph& g) {
  int count = 0;
  for (int x = 0; x < g.n(); ++x) {
    for (int y = x + 1; y < g.n(); ++y) {
      int l1 = 0;
      for (int i = 0; i < g.coord_dim(); ++i)
        l1 += std::abs(g.coords(x)[static_cast<std::size_t>(i)] -
                       g.coords(y)[static_cast<std::size_t>(i)]);
      if (l1 == 1) ++count;
    }
  }
  return count;
}

}  // namespace

TEST_CASE("build_graph validates and populates degrees") {
  WeightedGraph p2 = build_graph({{0, 1, 1.0}}, {1.0, 1.0}, {0.0, 0.0});
  CHECK(p2.n() == 2);
  CHECK(p2.deg(0) == doctest::Approx(1.0));
  CHECK(p2.deg(1) == doctest::Approx(1.0));

  CHECK_THROWS_AS(build_graph({{0, 1, 1.0}}, {0.0, 1.0}, {0.0, 0.0}), Error);
  try {
    build_graph({{0, 1, 1.0}}, {0.0, 1.0}, {0.0, 0.0});
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NonPositiveMeasure);
  }

  // self-loop, duplicate, asymmetric
  CHECK_THROWS_AS(build_graph({{0, 0, 1.0}}, {1.0}, {0.0}), Error);
  CHECK_THROWS_AS(build_graph({{0, 1, 1.0}, {0, 1, 1.0}}, {1.0, 1.0}, {0.0, 0.0}), Error);
  CHECK_THROWS_AS(build_graph({{0, 1, 1.0}, {1, 0, 2.0}}, {1.0, 1.0}, {0.0, 0.0}), Error);
  // both orientations with matching weights are fine
  WeightedGraph both = build_graph({{0, 1, 1.5}, {1, 0, 1.5}}, {1.0, 1.0}, {0.0, 0.0});
  CHECK(both.edges().size() == 1);
  CHECK(both.b(0, 1) == doctest::Approx(1.5));
}

TEST_CASE("lattice box counts match brute force and closed forms") {
  WeightedGraph b21 = gen_lattice_box(2, 1);
  CHECK(b21.n() == 9);
  CHECK(static_cast<int>(b21.edges().size()) == 12);
  CHECK(brute_force_box_edges(b21) == 12);
  double mtotal = 0.0;
  for (int x = 0; x < b21.n(); ++x) mtotal += b21.m(x);
  CHECK(mtotal == doctest::Approx(9.0));  // m(F_1) = (2n+1)^d

  WeightedGraph b10 = gen_lattice_box(1, 0);
  CHECK(b10.n() == 1);
  CHECK(b10.edges().empty());

  for (int d = 1; d <= 3; ++d) {
    for (int r = 0; r <= 2; ++r) {
      WeightedGraph g = gen_lattice_box(d, r);
      int side = 2 * r + 1;
      int verts = 1, faces = 1;
      for (int i = 0; i < d; ++i) verts *= side;
      for (int i = 0; i + 1 < d; ++i) faces *= side;
      CHECK(g.n() == verts);
      CHECK(static_cast<int>(g.edges().size()) == d * faces * 2 * r);
      CHECK(brute_force_box_edges(g) == static_cast<int>(g.edges().size()));
    }
  }

  CHECK_THROWS_AS(gen_lattice_box(3, 100, {}, 500000), Error);  // cap
}

TEST_CASE("families have the advertised shapes") {
  WeightedGraph p3 = gen_family(FamilyKind::Path, 3);
  CHECK(p3.deg(0) == doctest::Approx(1.0));
  CHECK(p3.deg(1) == doctest::Approx(2.0));
  CHECK(p3.deg(2) == doctest::Approx(1.0));

  WeightedGraph c4 = gen_family(FamilyKind::Cycle, 4);
  CHECK(c4.edges().size() == 4);
  for (int x = 0; x < 4; ++x) CHECK(c4.deg(x) == doctest::Approx(2.0));

  WeightedGraph t = gen_family(FamilyKind::Tree, 2, 3);
  CHECK(t.n() == 15);  // 2^{d+1} - 1

  CHECK_THROWS_AS(gen_family(FamilyKind::Cycle, 2), Error);
}

TEST_CASE("dirichlet restriction absorbs lost edges into the potential") {
  WeightedGraph p3 = gen_family(FamilyKind::Path, 3);
  WeightedGraph mid = dirichlet_restriction(p3, VertexSet(p3, {1}));
  CHECK(mid.n() == 1);
  CHECK(mid.q(0) == doctest::Approx(2.0));

  WeightedGraph same = dirichlet_restriction(p3, VertexSet::all(p3));
  CHECK(same.n() == 3);
  for (int x = 0; x < 3; ++x) CHECK(same.q(x) == doctest::Approx(p3.q(x)));
  CHECK(same.edges().size() == p3.edges().size());

  const int radius = 5;
  WeightedGraph box = gen_lattice_box(1, radius);
  std::vector<int> inner;
  for (int x = 0; x < box.n(); ++x)
    if (std::abs(box.coords(x)[0]) <= radius - 1) inner.push_back(x);
  WeightedGraph restricted = dirichlet_restriction(box, VertexSet(box, inner));
  for (int x = 0; x < restricted.n(); ++x) {
    double expected = std::abs(restricted.coords(x)[0]) == radius - 1 ? 1.0 : 0.0;
    CHECK(restricted.q(x) == doctest::Approx(expected));
  }

  CHECK_THROWS_AS(dirichlet_restriction(p3, VertexSet(p3, {})), Error);
}

TEST_CASE("dirichlet restriction preserves the form on interior functions") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    WeightedGraph g = random_graph(rng, 30);
    std::vector<int> u_idx;
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (int x = 0; x < g.n(); ++x)
      if (coin(rng) < 0.6) u_idx.push_back(x);
    if (u_idx.empty()) u_idx.push_back(0);
    VertexSet u(g, u_idx);
    WeightedGraph r = dirichlet_restriction(g, u);

    GraphFunction phi_full(g);
    GraphFunction phi_r = random_function(rng, r);
    const auto& keep = u.indices();
    for (std::size_t i = 0; i < keep.size(); ++i) phi_full[keep[i]] = phi_r[static_cast<int>(i)];

    double h_full = form_h(g, phi_full).value;
    double h_restricted = form_h(r, phi_r).value;
    CHECK(std::fabs(h_full - h_restricted) <=
          1e-12 * std::max({1.0, std::fabs(h_full), std::fabs(h_restricted)}));
  }
}

TEST_CASE("neighborhood") {
  WeightedGraph p3 = gen_family(FamilyKind::Path, 3);
  VertexSet n1 = neighborhood(VertexSet(p3, {1}));
  CHECK(n1.indices() == std::vector<int>{0, 1, 2});
  CHECK(neighborhood(VertexSet(p3, {})).empty());

  WeightedGraph box = gen_lattice_box(2, 2);
  VertexSet cross = neighborhood(VertexSet(box, {*box.origin()}));
  CHECK(cross.size() == 5);
}

TEST_CASE("graph files round trip and re-raise validation errors") {
  WeightedGraph p3 = gen_family(FamilyKind::Path, 3);
  std::string path = "roundtrip_p3.json";
  save_graph(p3, path);
  WeightedGraph back = load_graph(path);
  CHECK(back.n() == p3.n());
  CHECK(back.edges().size() == p3.edges().size());
  for (int x = 0; x < p3.n(); ++x) {
    CHECK(back.m(x) == p3.m(x));
    CHECK(back.q(x) == p3.q(x));
    CHECK(back.label(x) == p3.label(x));
  }
  for (std::size_t i = 0; i < p3.edges().size(); ++i) {
    CHECK(back.edges()[i].u == p3.edges()[i].u);
    CHECK(back.edges()[i].v == p3.edges()[i].v);
    CHECK(back.edges()[i].b == p3.edges()[i].b);
  }
  // byte stability
  CHECK(graph_to_json_string(back) == graph_to_json_string(p3));
  std::remove(path.c_str());

  // coordinates, origin and the well potential survive the round trip
  WeightedGraph box = gen_lattice_box(2, 2, [](const std::vector<int>& c) {
    return (c[0] == 0 && c[1] == 0) ? -1.5 : 0.0;
  });
  WeightedGraph box_back = graph_from_json_string(graph_to_json_string(box));
  CHECK(box_back.has_coords());
  CHECK(box_back.origin() == box.origin());
  CHECK(box_back.q(*box.origin()) == -1.5);
  CHECK(graph_to_json_string(box_back) == graph_to_json_string(box));

  const char* neg_m = R"({"vertices":[{"id":0,"m":-1.0,"q":0.0},{"id":1,"m":1.0,"q":0.0}],
                          "edges":[{"u":0,"v":1,"b":1.0}]})";
  CHECK_THROWS_AS(graph_from_json_string(neg_m), Error);
  const char* dup = R"({"vertices":[{"id":0,"m":1.0,"q":0.0},{"id":1,"m":1.0,"q":0.0}],
                        "edges":[{"u":0,"v":1,"b":1.0},{"u":0,"v":1,"b":2.0}]})";
  try {
    graph_from_json_string(dup);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DuplicateEdge);
  }
  CHECK_THROWS_AS(graph_from_json_string("{not json"), Error);
  CHECK_THROWS_AS(load_graph("does_not_exist.json"), Error);

  const char* dup_id = R"({"vertices":[{"id":0,"m":1.0,"q":0.0},{"id":0,"m":1.0,"q":0.0}],
                           "edges":[]})";
  CHECK_THROWS_AS(graph_from_json_string(dup_id), Error);
}

TEST_CASE("round trip on random graphs keeps b symmetric and exact") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    WeightedGraph g = random_graph(rng, 40);
    WeightedGraph back = graph_from_json_string(graph_to_json_string(g));
    REQUIRE(back.n() == g.n());
    for (int x = 0; x < g.n(); ++x) {
      auto nb = g.neighbors(x);
      auto wb = g.neighbor_weights(x);
      for (std::size_t i = 0; i < nb.size(); ++i) {
        CHECK(back.b(x, nb[i]) == wb[i]);
        CHECK(g.b(nb[i], x) == wb[i]);  // symmetry
      }
    }
  }
}
