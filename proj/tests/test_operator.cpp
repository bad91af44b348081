#include <doctest.h>

#include <cmath>
#include <random>

#include "agmonlab/fixtures.hpp"
#include "agmonlab/operator.hpp"
#include "helpers.hpp"

using namespace agmonlab;
using agmonlab::testing::random_function;
using agmonlab::testing::random_graph;

TEST_CASE("apply_H matches hand evaluations") {
  WeightedGraph c4 = gen_family(FamilyKind::Cycle, 4);
  GraphFunction ones(c4, 1.0);
  GraphFunction hc = apply_H(c4, ones);
  for (int x = 0; x < 4; ++x) CHECK(hc[x] == doctest::Approx(0.0));

  WeightedGraph p2 = build_graph({{0, 1, 1.0}}, {1.0, 1.0}, {0.0, 0.0});
  GraphFunction ind(p2);
  ind[0] = 1.0;
  GraphFunction h2 = apply_H(p2, ind);
  CHECK(h2[0] == doctest::Approx(1.0));
  CHECK(h2[1] == doctest::Approx(-1.0));
}

TEST_CASE("the well profile 2^{-|n|} is an exact eigenfunction away from the ends") {
  // 1/t - t = 1.5 at t = 1/2, lambda = 2 - t - 1/t = -1/2
  const int radius = 30;
  WeightedGraph well = fixtures::z_well(radius, -1.5);
  GraphFunction u(well);
  for (int x = 0; x < well.n(); ++x) u[x] = std::pow(2.0, -std::abs(well.coords(x)[0]));
  GraphFunction hu = apply_H(well, u);
  for (int x = 0; x < well.n(); ++x) {
    if (std::abs(well.coords(x)[0]) == radius) continue;
    CHECK(hu[x] == doctest::Approx(-0.5 * u[x]).epsilon(1e-12));
  }
}

TEST_CASE("form values and gradients") {
  WeightedGraph p2 = build_graph({{0, 1, 1.0}}, {1.0, 1.0}, {0.0, 0.0});
  GraphFunction ind(p2);
  ind[0] = 1.0;
  FormValue fv = form_h(p2, ind);
  CHECK(fv.value == doctest::Approx(1.0));
  CHECK(fv.kinetic == doctest::Approx(1.0));
  CHECK(fv.potential == doctest::Approx(0.0));

  GraphFunction gs = grad_sq(p2, ind);
  CHECK(gs[0] == doctest::Approx(0.5));
  CHECK(gs[1] == doctest::Approx(0.5));

  WeightedGraph c4 = gen_family(FamilyKind::Cycle, 4);
  GraphFunction c(c4, 3.25);
  CHECK(form_h(c4, c).value == doctest::Approx(0.0));
  CHECK(form_h(c4, GraphFunction(c4)).value == doctest::Approx(0.0));

  // v == 1 collapses the weighted gradient
  std::mt19937_64 rng(3);
  WeightedGraph g = random_graph(rng, 25);
  GraphFunction f = random_function(rng, g);
  GraphFunction vone(g, 1.0);
  GraphFunction a = grad_sq(g, f);
  GraphFunction b = grad_sq(g, f, &vone);
  for (int x = 0; x < g.n(); ++x) CHECK(a[x] == doctest::Approx(b[x]).epsilon(1e-14));

  GraphFunction bad(g, 0.0);
  CHECK_THROWS_AS(grad_sq(g, f, &bad), Error);

  // value = kinetic + potential
  for (int t = 0; t < 20; ++t) {
    WeightedGraph gg = random_graph(rng, 30);
    GraphFunction ff = random_function(rng, gg);
    FormValue v = form_h(gg, ff);
    CHECK(std::fabs(v.value - v.kinetic - v.potential) <= 1e-12 * std::max(1.0, std::fabs(v.value)));
  }
}

TEST_CASE("Green's formula and m-self-adjointness on random graphs") {
  std::mt19937_64 rng(17);
  WeightedGraph p2 = build_graph({{0, 1, 1.0}}, {1.0, 1.0}, {0.0, 0.0});
  GraphFunction ind(p2);
  ind[0] = 1.0;
  VerificationReport r0 = greens_check(p2, ind, ind);
  CHECK(r0.pass);
  CHECK(r0.lhs == doctest::Approx(1.0));
  CHECK(r0.rhs == doctest::Approx(1.0));
  CHECK(greens_check(p2, GraphFunction(p2), ind).pass);

  for (int trial = 0; trial < 100; ++trial) {
    WeightedGraph g = random_graph(rng, 50);
    GraphFunction u = random_function(rng, g);
    GraphFunction phi = random_function(rng, g);
    CHECK(greens_check(g, u, phi).pass);

    // h(u, phi) = h(phi, u)
    double a = form_h(g, u, phi).value;
    double b = form_h(g, phi, u).value;
    CHECK(std::fabs(a - b) <= 1e-12 * std::max({1.0, std::fabs(a), std::fabs(b)}));

    // sum (Hu) v m = sum u (Hv) m
    GraphFunction hu = apply_H(g, u);
    GraphFunction hphi = apply_H(g, phi);
    double lhs = 0.0, rhs = 0.0;
    for (int x = 0; x < g.n(); ++x) {
      lhs += hu[x] * phi[x] * g.m(x);
      rhs += u[x] * hphi[x] * g.m(x);
    }
    CHECK(std::fabs(lhs - rhs) <= 1e-12 * std::max({1.0, std::fabs(lhs), std::fabs(rhs)}));
  }
}

TEST_CASE("ground state transform identity") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    WeightedGraph g = random_graph(rng, 50);
    GraphFunction v = random_function(rng, g, 0.1, 3.0);
    GraphFunction phi = random_function(rng, g);
    VerificationReport rep = gst_check(g, v, phi);
    CHECK(rep.pass);
  }

  // constant phi and v == 1 degenerate cases
  WeightedGraph c4 = gen_family(FamilyKind::Cycle, 4);
  GraphFunction vone(c4, 1.0);
  GraphFunction phic(c4, 2.0);
  CHECK(gst_check(c4, vone, phic).pass);
  std::mt19937_64 rng2(29);
  GraphFunction phir = random_function(rng2, c4);
  CHECK(gst_check(c4, vone, phir).pass);

  GraphFunction nonpos(c4, 0.0);
  CHECK_THROWS_AS(gst_check(c4, nonpos, phir), Error);
}

TEST_CASE("gst supersolution inequality is reported and holds") {
  // v = 2^{-|n|} solves (H - lambda) v = 0 away from the ends, so for phi
  // supported in the bulk: sum |grad_v phi|^2 m <= (h - lambda)(v phi)
  WeightedGraph well = fixtures::z_well(60, -1.5);
  const double lambda = -0.5;
  GraphFunction v(well);
  for (int x = 0; x < well.n(); ++x) v[x] = std::pow(2.0, -std::abs(well.coords(x)[0]));
  std::mt19937_64 rng(43);
  GraphFunction phi(well);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int x = 0; x < well.n(); ++x)
    if (std::abs(well.coords(x)[0]) <= 40) phi[x] = d(rng);

  VerificationReport rep = gst_check(well, v, phi, lambda);
  CHECK(rep.pass);
  bool noted = false;
  for (const auto& note : rep.notes)
    if (note.find("supersolution inequality") != std::string::npos) noted = true;
  CHECK(noted);

  GraphFunction vphi(well);
  for (int x = 0; x < well.n(); ++x) vphi[x] = v[x] * phi[x];
  double lhs = 0.0;
  GraphFunction gsw = grad_sq_weighted(well, phi, v);
  for (int x = 0; x < well.n(); ++x) lhs += gsw[x] * well.m(x);
  double rhs = form_h(well, vphi).value - lambda * inner_m(well, vphi, vphi);
  CHECK(lhs <= rhs + 1e-10 * std::max(1.0, std::fabs(rhs)));
}

TEST_CASE("Caccioppoli inequality") {
  WeightedGraph c4 = gen_family(FamilyKind::Cycle, 4);
  CHECK(caccioppoli_check(c4, GraphFunction(c4), GraphFunction(c4, 1.0)).pass);

  // psi = 1: h(u) <= sum (Hu) u m with equality via Green's formula
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    WeightedGraph g = random_graph(rng, 30);
    GraphFunction u = random_function(rng, g);
    VerificationReport rep = caccioppoli_check(g, u, GraphFunction(g, 1.0));
    CHECK(rep.pass);
    CHECK(std::fabs(rep.margin) <= 1e-12 * std::max({1.0, std::fabs(rep.lhs), std::fabs(rep.rhs)}));
  }

  for (int trial = 0; trial < 500; ++trial) {
    WeightedGraph g = random_graph(rng, 40);
    GraphFunction u = random_function(rng, g, -2.0, 2.0);
    GraphFunction psi = random_function(rng, g, -1.5, 1.5);
    CHECK(caccioppoli_check(g, u, psi).pass);
  }
}

TEST_CASE("bounded-multiplier form inequality h(v psi) <= 2|psi|_inf^2 h_+(v) + 2|v|_wm^2") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 50; ++trial) {
    WeightedGraph g = random_graph(rng, 30);
    GraphFunction v = random_function(rng, g, -2.0, 2.0);
    GraphFunction psi = random_function(rng, g, -1.0, 1.0);
    GraphFunction w = grad_sq(g, psi);  // the tightest admissible w

    GraphFunction vpsi(g);
    double psi_inf = 0.0;
    for (int x = 0; x < g.n(); ++x) {
      vpsi[x] = v[x] * psi[x];
      psi_inf = std::max(psi_inf, std::fabs(psi[x]));
    }
    double lhs = form_h(g, vpsi).value;

    double h_plus = 0.0;
    GraphFunction gsv = grad_sq(g, v);
    for (int x = 0; x < g.n(); ++x)
      h_plus += (gsv[x] + std::max(g.q(x), 0.0) * v[x] * v[x]) * g.m(x);
    double v_wm = 0.0;
    for (int x = 0; x < g.n(); ++x) v_wm += v[x] * v[x] * w[x] * g.m(x);

    double rhs = 2.0 * psi_inf * psi_inf * h_plus + 2.0 * v_wm;
    CHECK(lhs <= rhs + 1e-10 * std::max(1.0, std::fabs(rhs)));
  }
}

TEST_CASE("q in V membership") {
  WeightedGraph c4 = gen_family(FamilyKind::Cycle, 4);
  CHECK(q_in_V_check(c4, 0.5, 0.0).pass);  // q >= 0

  WeightedGraph well = fixtures::z_well(20, -1.5);
  CHECK(q_in_V_check(well, 0.5, 2.0).pass);

  std::vector<EdgeInput> edges = {{0, 1, 1.0}, {1, 2, 1.0}};
  WeightedGraph deep =
      build_graph(edges, {1.0, 1.0, 1.0}, {-1e6, -1e6, -1e6});
  CHECK_FALSE(q_in_V_check(deep, 0.5, 0.0).pass);

  CHECK_THROWS_AS(q_in_V_check(c4, 1.5, 0.0), Error);
}

TEST_CASE("boundary correction on P3 matches the hand computation") {
  WeightedGraph p3 = gen_family(FamilyKind::Path, 3);
  BoundaryCorrection bc = boundary_correction(p3, VertexSet(p3, {1}));
  CHECK(bc.hypothesis_ok);
  CHECK(bc.b_K[0] == doctest::Approx(1.0));
  CHECK(bc.b_K[1] == doctest::Approx(2.0));
  CHECK(bc.b_K[2] == doctest::Approx(1.0));
  CHECK(bc.lambda_K == doctest::Approx(2.0));
  for (int x = 0; x < 3; ++x) CHECK(bc.chi[x] == doctest::Approx(2.0));
  CHECK(bc.postcondition.pass);
  CHECK(bc.postcondition.lhs > 0.0);
}

TEST_CASE("boundary correction edge cases") {
  WeightedGraph p3 = gen_family(FamilyKind::Path, 3);
  BoundaryCorrection whole = boundary_correction(p3, VertexSet::all(p3));
  for (int x = 0; x < 3; ++x) {
    CHECK(whole.b_K[x] == doctest::Approx(0.0));
    CHECK(whole.chi[x] == doctest::Approx(-whole.lambda_K));
  }
  CHECK(whole.postcondition.pass);

  WeightedGraph box = gen_lattice_box(2, 3);
  VertexSet k(box, {*box.origin()});
  BoundaryCorrection bc = boundary_correction(box, k);
  VertexSet nk = neighborhood(k);
  for (int x = 0; x < box.n(); ++x) {
    if (!nk.contains(x)) CHECK(bc.chi[x] == doctest::Approx(0.0));
  }
  CHECK(bc.postcondition.pass);

  CHECK_THROWS_AS(boundary_correction(p3, VertexSet(p3, {})), Error);
}

TEST_CASE("boundary correction randomized: min-eig(h + chi) >= -tol") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 40; ++trial) {
    WeightedGraph g = random_graph(rng, 30, /*nonneg_q=*/true);
    std::uniform_int_distribution<int> kd(1, std::max(1, g.n() / 4));
    int ksize = kd(rng);
    std::vector<int> kidx;
    std::uniform_int_distribution<int> vd(0, g.n() - 1);
    for (int i = 0; i < ksize; ++i) kidx.push_back(vd(rng));
    BoundaryCorrection bc = boundary_correction(g, VertexSet(g, kidx));
    CHECK(bc.hypothesis_ok);  // q >= 0 off K makes the hypothesis automatic
    CHECK(bc.postcondition.pass);
  }
}
