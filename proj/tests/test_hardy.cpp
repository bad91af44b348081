#include <doctest.h>

#include <cmath>
#include <random>

#include "agmonlab/fixtures.hpp"
#include "agmonlab/hardy.hpp"
#include "agmonlab/metrics.hpp"
#include "agmonlab/operator.hpp"
#include "agmonlab/spectral.hpp"
#include "helpers.hpp"

using namespace agmonlab;

namespace {

// interior restriction of a coordinate box with the solve-based Green
// function carried over
struct GreenFixture {
  WeightedGraph inner;
  GraphFunction v;
  int root = 0;
};

GreenFixture green_fixture(int radius) {
  WeightedGraph box = fixtures::green_box(radius);
  GraphFunction green = green_function(box, *box.origin());
  VertexSet interior = outer_layer(box).complement();
  GreenFixture fx{dirichlet_restriction(box, interior), GraphFunction(), 0};
  const auto& keep = interior.indices();
  std::vector<double> vals(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    vals[i] = green[keep[i]];
    if (keep[i] == *box.origin()) fx.root = static_cast<int>(i);
  }
  fx.v = GraphFunction(fx.inner, std::move(vals));
  return fx;
}

}  // namespace

TEST_CASE("half-line Hardy weight matches the closed form") {
  const int n = 300;
  WeightedGraph g = fixtures::n_path(n);
  GraphFunction v = fixtures::n_path_supersolution(g);
  HardyWeight hw = supersolution_hardy(g, v, 0.5, /*allow_general_q=*/true);

  CHECK(hw.w[0] == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-14));
  for (int x = 1; x + 1 < n; ++x)
    CHECK(hw.w[x] == doctest::Approx(fixtures::n_path_weight_formula(x + 1)).epsilon(1e-12));
  CHECK(hw.clamped == 0);
  CHECK(hw.oscillation == doctest::Approx(2.0));
  CHECK(hw.positivity.pass);

  // w == H(v^a)/v^a recomputed independently
  GraphFunction va(g);
  for (int x = 0; x < n; ++x) va[x] = std::sqrt(v[x]);
  GraphFunction hva = apply_H(g, va);
  for (int x = 0; x < n; ++x)
    CHECK(hw.w[x] == doctest::Approx(hva[x] / va[x]).epsilon(1e-12));

  // alpha = 1 on the exactly harmonic stretch: integer arithmetic, so the
  // weight vanishes to the bit
  HardyWeight w1 = supersolution_hardy(g, v, 1.0, /*allow_general_q=*/true);
  for (int x = 1; x + 1 < n; ++x) CHECK(w1.w[x] == 0.0);
}

TEST_CASE("constant supersolution gives the zero weight") {
  WeightedGraph c5 = gen_family(FamilyKind::Cycle, 5);
  HardyWeight hw = supersolution_hardy(c5, GraphFunction(c5, 2.5), 0.5);
  for (int x = 0; x < 5; ++x) CHECK(hw.w[x] == doctest::Approx(0.0));
  CHECK(hw.oscillation == doctest::Approx(1.0));
}

TEST_CASE("supersolution construction rejects bad inputs") {
  WeightedGraph c5 = gen_family(FamilyKind::Cycle, 5);
  CHECK_THROWS_AS(supersolution_hardy(c5, GraphFunction(c5, 0.0), 0.5), Error);
  CHECK_THROWS_AS(supersolution_hardy(c5, GraphFunction(c5, 1.0), 1.5), Error);
  CHECK_THROWS_AS(supersolution_hardy(c5, GraphFunction(c5, 1e-305), 0.5), Error);

  WeightedGraph well = fixtures::z_well(5, -1.0);
  CHECK_THROWS_AS(supersolution_hardy(well, GraphFunction(well, 1.0), 0.5), Error);
  HardyWeight hw = supersolution_hardy(well, GraphFunction(well, 1.0), 0.5, true);
  CHECK_FALSE(hw.warnings.empty());
}

TEST_CASE("green function on P3 with the ends as boundary") {
  WeightedGraph p3 = gen_family(FamilyKind::Path, 3);
  VertexSet ends(p3, {0, 2});
  GraphFunction v = green_function(p3, 1, &ends);
  CHECK(v[0] == doctest::Approx(0.0));
  CHECK(v[1] == doctest::Approx(0.5));
  CHECK(v[2] == doctest::Approx(0.0));

  CHECK_THROWS_AS(green_function(p3, 0, &ends), Error);  // root on the boundary
}

TEST_CASE("Z^3 green function is positive, harmonic off the root, and box-refines") {
  GreenFixture fx8 = green_fixture(8);
  double vmax = 0.0;
  for (int x = 0; x < fx8.inner.n(); ++x) {
    CHECK(fx8.v[x] > 0.0);
    vmax = std::max(vmax, fx8.v[x]);
  }
  CHECK(fx8.v[fx8.root] == vmax);  // peaks at the source and decays outward

  // alpha = 1: w_1 = Hv/v vanishes where v is harmonic (off the root), at
  // the precision of the linear solve that produced v
  HardyWeight w1 = supersolution_hardy(fx8.inner, fx8.v, 1.0, /*allow_general_q=*/true);
  GraphFunction hv = apply_H(fx8.inner, fx8.v);
  for (int x = 0; x < fx8.inner.n(); ++x) {
    if (x == fx8.root) continue;
    CHECK(std::fabs(hv[x]) < 1e-10);
    CHECK(std::fabs(w1.w[x] * fx8.v[x]) < 1e-10);
  }

  // v * |x| flattens as the box grows
  auto spread = [](const GreenFixture& fx) {
    double lo = 1e300, hi = 0.0;
    for (int x = 0; x < fx.inner.n(); ++x) {
      double r = fx.inner.coord_norm2(x);
      if (r >= 3.0 && r <= 6.0) {
        lo = std::min(lo, fx.v[x] * r);
        hi = std::max(hi, fx.v[x] * r);
      }
    }
    return (hi - lo) / hi;
  };
  GreenFixture fx12 = green_fixture(12);
  CHECK(spread(fx12) < spread(fx8));
}

TEST_CASE("solve-based Z^3 Hardy weight is nonnegative with exact form positivity") {
  GreenFixture fx = green_fixture(8);
  HardyWeight hw = supersolution_hardy(fx.inner, fx.v, 0.5, /*allow_general_q=*/true);
  CHECK(hw.clamped == 0);
  for (int x = 0; x < fx.inner.n(); ++x) CHECK(hw.w[x] >= 0.0);
  CHECK(hw.positivity.pass);
}

TEST_CASE("tree fixture: distance-exponential supersolution passes form positivity") {
  WeightedGraph tree = gen_family(FamilyKind::Tree, 2, 6);
  // drop the leaves so the supersolution stays superharmonic at the free end
  std::vector<int> interior;
  for (int x = 0; x < tree.n(); ++x)
    if (tree.degree_count(x) > 1 || x == 0) interior.push_back(x);
  WeightedGraph inner = dirichlet_restriction(tree, VertexSet(tree, interior));
  MetricField hops = shortest_paths(inner, uniform_edge_lengths(inner, 1.0), VertexSet(inner, {0}));
  const double c = 1.0 / std::sqrt(2.0);
  GraphFunction v(inner);
  for (int x = 0; x < inner.n(); ++x) v[x] = std::pow(c, hops.dist[static_cast<std::size_t>(x)]);
  HardyWeight hw = supersolution_hardy(inner, v, 0.5, /*allow_general_q=*/true);
  CHECK(hw.clamped == 0);
  CHECK(hw.positivity.pass);
}

TEST_CASE("oscillation and the power-inequality constant") {
  // half-line: inf v(x)/v(y) = 1/2 at the 1~2 edge, eps0 = 2^{-1/2}
  WeightedGraph g = fixtures::n_path(50);
  GraphFunction v = fixtures::n_path_supersolution(g);
  OscillationGamma og = oscillation_and_gamma(g, v, 0.5);
  CHECK(og.eps0 == doctest::Approx(1.0 / std::sqrt(2.0)));
  double expected =
      std::pow((1.0 - std::pow(2.0, -0.25)) / (1.0 - std::pow(2.0, -0.5)), 2.0);
  CHECK(og.gamma == doctest::Approx(expected).epsilon(1e-12));
  CHECK(og.gamma == doctest::Approx(0.2951).epsilon(1e-3));
  CHECK(og.pointwise_check.pass);

  // alpha = 1 boundary case
  OscillationGamma one = oscillation_and_gamma(g, v, 1.0);
  CHECK(one.gamma == doctest::Approx(1.0));
  CHECK(one.pointwise_check.pass);

  // constant v: every edge ratio is 1, both sides vanish
  WeightedGraph c5 = gen_family(FamilyKind::Cycle, 5);
  OscillationGamma flat = oscillation_and_gamma(c5, GraphFunction(c5, 3.0), 0.5);
  CHECK(flat.pointwise_check.pass);
}

TEST_CASE("null-criticality trend") {
  WeightedGraph c5 = gen_family(FamilyKind::Cycle, 5);
  HardyWeight zero = supersolution_hardy(c5, GraphFunction(c5, 1.0), 0.5);
  std::vector<VertexSet> triv = {VertexSet(c5, {0}), VertexSet(c5, {0, 1}), VertexSet::all(c5)};
  NullCriticalityTrend t0 = null_criticality_trend(c5, zero, triv);
  for (double s : t0.partial_sums) CHECK(s == doctest::Approx(0.0));
  CHECK(t0.classification == "bounded");

  // half-line: v w m ~ 1/(4n), so S_j grows like (1/4) log j
  WeightedGraph g = fixtures::n_path(4000);
  HardyWeight hw = supersolution_hardy(g, fixtures::n_path_supersolution(g), 0.5, true);
  std::vector<VertexSet> balls;
  std::vector<int> marks = {100, 200, 400, 800, 1600, 3200};
  for (int mrk : marks) {
    std::vector<int> idx;
    for (int x = 0; x < mrk; ++x) idx.push_back(x);
    balls.emplace_back(g, std::move(idx));
  }
  NullCriticalityTrend t = null_criticality_trend(g, hw, balls);
  CHECK(t.classification == "increasing");
  for (std::size_t i = 1; i < marks.size(); ++i) {
    double inc = t.partial_sums[i] - t.partial_sums[i - 1];
    CHECK(inc == doctest::Approx(0.25 * std::log(2.0)).epsilon(0.02));
  }

  // Z^3 Green weight keeps growing at truncation scale
  GreenFixture fx = green_fixture(10);
  HardyWeight hw3 = supersolution_hardy(fx.inner, fx.v, 0.5, true);
  std::vector<VertexSet> shells;
  for (int r : {2, 4, 6, 8}) {
    std::vector<int> idx;
    for (int x = 0; x < fx.inner.n(); ++x)
      if (fx.inner.coord_norm2(x) <= r) idx.push_back(x);
    shells.emplace_back(fx.inner, std::move(idx));
  }
  NullCriticalityTrend t3 = null_criticality_trend(fx.inner, hw3, shells);
  CHECK(t3.classification == "increasing");
}
