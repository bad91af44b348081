#include "agmonlab/operator.hpp"

#include <algorithm>
#include <cmath>

namespace agmonlab {

namespace {

void require_same_graph(const WeightedGraph& g, const GraphFunction& f, const char* what) {
  if (f.graph() != &g) fail(Errc::GraphMismatch, std::string(what) + " belongs to another graph");
}

}  // namespace

GraphFunction apply_H(const WeightedGraph& g, const GraphFunction& f) {
  require_same_graph(g, f, "f");
  GraphFunction out(g);
  for (int x = 0; x < g.n(); ++x) {
    double s = 0.0;
    auto nb = g.neighbors(x);
    auto wb = g.neighbor_weights(x);
    for (std::size_t i = 0; i < nb.size(); ++i) s += wb[i] * (f[x] - f[nb[i]]);
    out[x] = s / g.m(x) + g.q(x) * f[x];
  }
  return out;
}

FormValue form_h(const WeightedGraph& g, const GraphFunction& phi, const GraphFunction& psi) {
  require_same_graph(g, phi, "phi");
  require_same_graph(g, psi, "psi");
  FormValue out;
  for (const Edge& e : g.edges())
    out.kinetic += e.b * (phi[e.u] - phi[e.v]) * (psi[e.u] - psi[e.v]);
  for (int x = 0; x < g.n(); ++x) out.potential += g.q(x) * phi[x] * psi[x] * g.m(x);
  out.value = out.kinetic + out.potential;
  return out;
}

GraphFunction grad_sq(const WeightedGraph& g, const GraphFunction& f, const GraphFunction* v) {
  require_same_graph(g, f, "f");
  if (v) {
    require_same_graph(g, *v, "v");
    for (int x = 0; x < g.n(); ++x)
      if (!((*v)[x] > 0.0)) fail(Errc::NonPositiveWeight, "gradient weight must be > 0");
    return grad_sq_weighted(g, f, *v);
  }
  GraphFunction out(g);
  for (int x = 0; x < g.n(); ++x) {
    double s = 0.0;
    auto nb = g.neighbors(x);
    auto wb = g.neighbor_weights(x);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      double d = f[x] - f[nb[i]];
      s += wb[i] * d * d;
    }
    out[x] = s / (2.0 * g.m(x));
  }
  return out;
}

GraphFunction grad_sq_weighted(const WeightedGraph& g, const GraphFunction& f,
                               const GraphFunction& v) {
  require_same_graph(g, f, "f");
  require_same_graph(g, v, "v");
  GraphFunction out(g);
  for (int x = 0; x < g.n(); ++x) {
    double s = 0.0;
    auto nb = g.neighbors(x);
    auto wb = g.neighbor_weights(x);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      double d = f[x] - f[nb[i]];
      s += wb[i] * v[x] * v[nb[i]] * d * d;
    }
    out[x] = s / (2.0 * g.m(x));
  }
  return out;
}

GraphFunction grad_dot(const WeightedGraph& g, const GraphFunction& u, const GraphFunction& psi) {
  require_same_graph(g, u, "u");
  require_same_graph(g, psi, "psi");
  GraphFunction out(g);
  for (int x = 0; x < g.n(); ++x) {
    double s = 0.0;
    auto nb = g.neighbors(x);
    auto wb = g.neighbor_weights(x);
    for (std::size_t i = 0; i < nb.size(); ++i)
      s += wb[i] * (u[x] - u[nb[i]]) * (psi[x] - psi[nb[i]]);
    out[x] = s / (2.0 * g.m(x));
  }
  return out;
}

VerificationReport greens_check(const WeightedGraph& g, const GraphFunction& u,
                                const GraphFunction& phi) {
  require_same_graph(g, u, "u");
  require_same_graph(g, phi, "phi");
  VerificationReport rep;
  rep.check = "greens_formula";
  rep.lhs = form_h(g, u, phi).value;
  GraphFunction hphi = apply_H(g, phi);
  double rhs = 0.0;
  for (int x = 0; x < g.n(); ++x) rhs += u[x] * hphi[x] * g.m(x);
  rep.rhs = rhs;
  rep.margin = std::fabs(rep.lhs - rep.rhs);
  rep.tol = 1e-12 * check_scale(rep.lhs, rep.rhs);
  rep.pass = rep.margin <= rep.tol;
  return rep;
}

VerificationReport gst_check(const WeightedGraph& g, const GraphFunction& v,
                             const GraphFunction& phi, std::optional<double> lambda) {
  require_same_graph(g, v, "v");
  require_same_graph(g, phi, "phi");
  for (int x = 0; x < g.n(); ++x)
    if (!(v[x] > 0.0)) fail(Errc::NonPositiveWeight, "ground state transform needs v > 0");

  GraphFunction hv = apply_H(g, v);
  double gradient_term = 0.0;
  for (const Edge& e : g.edges()) {
    double d = phi[e.u] - phi[e.v];
    gradient_term += e.b * v[e.u] * v[e.v] * d * d;
  }
  double solution_term = 0.0;
  for (int x = 0; x < g.n(); ++x) solution_term += v[x] * phi[x] * phi[x] * hv[x] * g.m(x);

  GraphFunction vphi(g);
  for (int x = 0; x < g.n(); ++x) vphi[x] = v[x] * phi[x];

  VerificationReport rep;
  rep.check = "ground_state_transform";
  rep.lhs = gradient_term + solution_term;
  rep.rhs = form_h(g, vphi).value;
  rep.margin = std::fabs(rep.lhs - rep.rhs);
  rep.tol = 1e-10 * check_scale(rep.lhs, rep.rhs);
  rep.pass = rep.margin <= rep.tol;

  if (lambda) {
    // supersolution form: sum |grad_v phi|^2 m <= (h - lambda)(v phi)
    double norm_sq = 0.0;
    for (int x = 0; x < g.n(); ++x) norm_sq += vphi[x] * vphi[x] * g.m(x);
    double ineq_rhs = rep.rhs - *lambda * norm_sq;
    rep.notes.push_back("supersolution inequality: " + fmt_double(gradient_term) +
                        " <= " + fmt_double(ineq_rhs) + " at lambda = " + fmt_double(*lambda));
  }
  return rep;
}

VerificationReport caccioppoli_check(const WeightedGraph& g, const GraphFunction& u,
                                     const GraphFunction& psi) {
  require_same_graph(g, u, "u");
  require_same_graph(g, psi, "psi");

  GraphFunction psiu(g);
  for (int x = 0; x < g.n(); ++x) psiu[x] = psi[x] * u[x];

  GraphFunction abs_u(g);
  for (int x = 0; x < g.n(); ++x) abs_u[x] = std::fabs(u[x]);
  GraphFunction weighted = grad_sq_weighted(g, psi, abs_u);
  GraphFunction hu = apply_H(g, u);

  double rhs = 0.0;
  for (int x = 0; x < g.n(); ++x)
    rhs += (weighted[x] + hu[x] * psi[x] * psi[x] * u[x]) * g.m(x);

  VerificationReport rep;
  rep.check = "caccioppoli";
  rep.lhs = form_h(g, psiu).value;
  rep.rhs = rhs;
  rep.margin = rep.rhs - rep.lhs;
  rep.tol = 1e-10 * check_scale(rep.lhs, rep.rhs);
  rep.pass = rep.margin >= -rep.tol;
  return rep;
}

VerificationReport q_in_V_check(const WeightedGraph& g, double eps, double C,
                                const SolverOptions& opts) {
  if (!(eps > 0.0 && eps < 1.0)) fail(Errc::BadParams, "eps must lie in (0,1)");
  if (C < 0.0) fail(Errc::BadParams, "C must be >= 0");

  // (1-eps) h_+ + C - q_- as a graph form: scale b by (1-eps) and combine
  // the potentials.
  std::vector<EdgeInput> edges;
  edges.reserve(g.edges().size());
  for (const Edge& e : g.edges()) edges.push_back({e.u, e.v, (1.0 - eps) * e.b});
  std::vector<double> m(g.m());
  std::vector<double> q(static_cast<std::size_t>(g.n()));
  for (int x = 0; x < g.n(); ++x) {
    double qp = std::max(g.q(x), 0.0);
    double qn = std::max(-g.q(x), 0.0);
    q[static_cast<std::size_t>(x)] = (1.0 - eps) * qp + C - qn;
  }
  WeightedGraph check_graph = build_graph(edges, std::move(m), std::move(q));
  double lam = lowest_eigenvalue(check_graph, nullptr, opts);

  VerificationReport rep;
  rep.check = "q_in_V";
  rep.lhs = lam;
  rep.rhs = 0.0;
  rep.margin = lam;
  rep.tol = 1e-9 * std::max(1.0, std::fabs(lam));
  rep.pass = lam >= -rep.tol;
  rep.notes.push_back("smallest eigenvalue of (1-eps) h_+ + C - q_- at eps=" + fmt_double(eps) +
                      ", C=" + fmt_double(C));
  return rep;
}

BoundaryCorrection boundary_correction(const WeightedGraph& g, const VertexSet& K,
                                       const SolverOptions& opts) {
  if (K.graph() != &g) fail(Errc::GraphMismatch, "K belongs to another graph");
  if (K.empty()) fail(Errc::EmptySet, "boundary_correction needs a nonempty K");

  BoundaryCorrection out;
  out.chi = GraphFunction(g);
  out.b_K = GraphFunction(g);

  // hypothesis: h >= 0 on C_c(X \ K); trivially true when K = X
  VertexSet comp = K.complement();
  if (comp.empty()) {
    out.hypothesis.check = "boundary_correction_hypothesis";
    out.hypothesis.pass = true;
    out.hypothesis.notes.push_back("K covers the graph; the hypothesis is vacuous");
    out.hypothesis_ok = true;
  } else {
    GraphFunction zero(g);
    out.hypothesis = form_positivity(g, zero, &K, opts);
    out.hypothesis.check = "boundary_correction_hypothesis";
    out.hypothesis_ok = out.hypothesis.pass;
  }

  for (int x = 0; x < g.n(); ++x) {
    bool in_k = K.contains(x);
    double s = 0.0;
    auto nb = g.neighbors(x);
    auto wb = g.neighbor_weights(x);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      bool nb_in_k = K.contains(nb[i]);
      if (in_k != nb_in_k) s += wb[i];
    }
    out.b_K[x] = s / g.m(x);
  }

  WeightedGraph on_k = dirichlet_restriction(g, K);
  out.lambda_K = lowest_eigenvalue(on_k, nullptr, opts);

  for (int x = 0; x < g.n(); ++x)
    out.chi[x] = 2.0 * out.b_K[x] - (K.contains(x) ? out.lambda_K : 0.0);

  // postcondition: h + chi >= 0 on the ambient graph
  GraphFunction neg_chi(g);
  for (int x = 0; x < g.n(); ++x) neg_chi[x] = -out.chi[x];
  out.postcondition = form_positivity(g, neg_chi, nullptr, opts);
  out.postcondition.check = "boundary_correction_postcondition";
  if (!out.hypothesis_ok)
    out.postcondition.notes.push_back("hypothesis h >= 0 off K failed; result returned anyway");
  return out;
}

}  // namespace agmonlab
