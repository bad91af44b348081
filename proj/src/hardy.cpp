#include "agmonlab/hardy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "agmonlab/operator.hpp"

namespace agmonlab {

HardyWeight supersolution_hardy(const WeightedGraph& g, const GraphFunction& v, double alpha,
                                bool allow_general_q, const SolverOptions& opts) {
  if (v.graph() != &g) fail(Errc::GraphMismatch, "v belongs to another graph");
  if (!(alpha > 0.0 && alpha <= 1.0)) fail(Errc::BadExponent, "alpha must lie in (0,1]");
  for (int x = 0; x < g.n(); ++x) {
    if (!(v[x] > 0.0)) fail(Errc::NonPositiveSupersolution, "v must be strictly positive");
    if (v[x] < 1e-300) fail(Errc::NonPositiveSupersolution, "v underflows below 1e-300");
  }
  HardyWeight hw;
  hw.w = GraphFunction(g);
  hw.v = v;
  hw.alpha = alpha;
  hw.K = VertexSet(g, {});
  bool q_zero = true;
  for (int x = 0; x < g.n(); ++x)
    if (g.q(x) != 0.0) q_zero = false;
  if (!q_zero) {
    if (!allow_general_q)
      fail(Errc::BadParams, "supersolution construction requires q = 0 (or allow_general_q)");
    hw.warnings.push_back("q is not identically zero; w >= 0 is not guaranteed");
  }

  GraphFunction valpha(g);
  for (int x = 0; x < g.n(); ++x) valpha[x] = std::pow(v[x], alpha);
  GraphFunction hva = apply_H(g, valpha);
  for (int x = 0; x < g.n(); ++x) {
    double w = hva[x] / valpha[x];
    if (w < -1e-12) {
      ++hw.clamped;
      hw.warnings.push_back("w(" + g.label(x) + ") = " + fmt_double(w) + " clamped to 0");
      w = 0.0;
    } else if (w < 0.0) {
      ++hw.clamped;
      w = 0.0;
    }
    hw.w[x] = w;
  }

  double osc = 1.0;
  for (const Edge& e : g.edges())
    osc = std::max({osc, v[e.u] / v[e.v], v[e.v] / v[e.u]});
  hw.oscillation = osc;

  hw.positivity = form_positivity(g, hw.w, nullptr, opts);
  hw.positivity.check = "hardy_form_positivity";
  return hw;
}

GraphFunction green_function(const WeightedGraph& g, int root, const VertexSet* boundary,
                             const SolverOptions& opts) {
  for (int x = 0; x < g.n(); ++x)
    if (g.q(x) != 0.0) fail(Errc::BadParams, "green_function requires q = 0");
  VertexSet bd = boundary ? *boundary : outer_layer(g);
  if (bd.graph() != &g) fail(Errc::GraphMismatch, "boundary belongs to another graph");
  if (bd.empty()) fail(Errc::NoBoundary, "green_function needs a nonempty boundary layer");
  if (bd.contains(root)) fail(Errc::BadParams, "root must be interior");

  VertexSet interior = bd.complement();
  WeightedGraph inner = dirichlet_restriction(g, interior);
  const auto& keep = interior.indices();
  int inner_root = -1;
  for (std::size_t i = 0; i < keep.size(); ++i)
    if (keep[i] == root) inner_root = static_cast<int>(i);
  if (inner_root < 0) fail(Errc::BadParams, "root must be interior");

  GraphFunction rhs(inner);
  rhs[inner_root] = 1.0 / inner.m(inner_root);
  GraphFunction sol = solve_H_eq(inner, rhs, 0.0, opts);

  GraphFunction out(g);
  int negatives = 0;
  for (std::size_t i = 0; i < keep.size(); ++i) {
    out[keep[i]] = sol[static_cast<int>(i)];
    if (!(sol[static_cast<int>(i)] > 0.0)) ++negatives;
  }
  // the restricted operator is an irreducible Stieltjes matrix on each
  // component containing the root, so the solution must be positive there
  if (negatives > 0)
    fail(Errc::SolverFailure, "Green function not strictly positive on the interior (" +
                                  std::to_string(negatives) + " vertices)");
  return out;
}

OscillationGamma oscillation_and_gamma(const WeightedGraph& g, const GraphFunction& v,
                                       double alpha) {
  if (v.graph() != &g) fail(Errc::GraphMismatch, "v belongs to another graph");
  if (!(alpha > 0.0 && alpha <= 1.0)) fail(Errc::BadExponent, "alpha must lie in (0,1]");
  for (int x = 0; x < g.n(); ++x)
    if (!(v[x] > 0.0)) fail(Errc::NonPositiveSupersolution, "v must be strictly positive");

  double inf_ratio = 1.0;
  for (const Edge& e : g.edges())
    inf_ratio = std::min({inf_ratio, v[e.u] / v[e.v], v[e.v] / v[e.u]});

  OscillationGamma out;
  out.eps0 = std::sqrt(inf_ratio);
  if (out.eps0 >= 1.0) {
    // constant v on every edge; the sup of (1-s^a)^2/(1-s)^2 over s >= 1 is a^2
    out.gamma = alpha * alpha;
  } else {
    double t = (1.0 - std::pow(out.eps0, alpha)) / (1.0 - out.eps0);
    out.gamma = t * t;
  }

  // |t^a - (st)^a|^2 / t^{2a} <= gamma (1-s)^2 for s >= eps0, t > 0.
  // The left side is (1 - s^a)^2, independent of t; t is still varied to
  // exercise the evaluation path.
  auto lhs_of = [&](double s, double t) {
    double num = std::pow(t, alpha) - std::pow(s * t, alpha);
    return num * num / std::pow(t, 2.0 * alpha);
  };
  double worst = 0.0;
  VerificationReport rep;
  rep.check = "power_inequality";
  for (const Edge& e : g.edges()) {
    double s = std::sqrt(std::min(v[e.u] / v[e.v], v[e.v] / v[e.u]));
    double t = std::sqrt(std::max(v[e.u], v[e.v]));
    double bound = out.gamma * (1.0 - s) * (1.0 - s);
    double val = lhs_of(s, t);
    if (bound > 0.0) worst = std::max(worst, val / bound);
    else if (val > 1e-15) worst = std::max(worst, 2.0);
  }
  std::uint64_t state = 0x243f6a8885a308d3ULL;
  auto next01 = [&state]() {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<double>(state >> 11) * (1.0 / 9007199254740992.0);
  };
  for (int i = 0; i < 10000; ++i) {
    double s = out.eps0 + next01() * (4.0 - out.eps0);  // includes s > 1
    double t = 1e-3 + next01() * 10.0;
    double bound = out.gamma * (1.0 - s) * (1.0 - s);
    double val = lhs_of(s, t);
    if (bound > 0.0) {
      worst = std::max(worst, val / bound);
    } else if (val > 1e-15) {
      worst = std::max(worst, 2.0);
    }
  }
  rep.lhs = worst;
  rep.rhs = 1.0;
  rep.margin = 1.0 - worst;
  rep.tol = 1e-12;
  rep.pass = worst <= 1.0 + rep.tol;
  rep.notes.push_back("eps0 = " + fmt_double(out.eps0) + ", gamma = " + fmt_double(out.gamma));
  out.pointwise_check = rep;
  return out;
}

NullCriticalityTrend null_criticality_trend(const WeightedGraph& g, const HardyWeight& hw,
                                            const std::vector<VertexSet>& exhaustion) {
  if (hw.w.graph() != &g) fail(Errc::GraphMismatch, "Hardy weight belongs to another graph");
  NullCriticalityTrend out;
  for (const VertexSet& ball : exhaustion) {
    double s = 0.0;
    for (int x : ball.indices()) s += hw.v[x] * hw.w[x] * g.m(x);
    out.partial_sums.push_back(s);
  }
  if (out.partial_sums.size() < 2) {
    out.classification = "insufficient-levels";
    return out;
  }
  double first = out.partial_sums.front();
  double last = out.partial_sums.back();
  double last_inc = last - out.partial_sums[out.partial_sums.size() - 2];
  bool still_growing = last_inc > 1e-12 * std::max(1.0, std::fabs(last));
  out.classification = (still_growing && last > first + 1e-12) ? "increasing" : "bounded";
  return out;
}

}  // namespace agmonlab
