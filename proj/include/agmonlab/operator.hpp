#pragma once

#include <optional>

#include "agmonlab/graph.hpp"
#include "agmonlab/report.hpp"
#include "agmonlab/spectral.hpp"

namespace agmonlab {

// Energy h(phi) split into its kinetic part sum |grad phi|^2 m and potential
// part sum q phi^2 m.
struct FormValue {
  double value = 0.0;
  double kinetic = 0.0;
  double potential = 0.0;
};

// Formal Schroedinger operator: (Hf)(x) = (1/m) sum_y b(x,y)(f(x)-f(y)) + q f(x).
GraphFunction apply_H(const WeightedGraph& g, const GraphFunction& f);

// Bilinear form h(phi,psi); for phi == psi the breakdown parts are the
// kinetic and potential energies.
FormValue form_h(const WeightedGraph& g, const GraphFunction& phi, const GraphFunction& psi);

inline FormValue form_h(const WeightedGraph& g, const GraphFunction& phi) {
  return form_h(g, phi, phi);
}

// Pointwise |grad f|^2, or the v-weighted variant
// |grad_v f|^2(x) = (1/2m) sum_y b(x,y) v(x) v(y) (f(x)-f(y))^2.
// v must be strictly positive; see grad_sq_weighted for nonnegative weights.
GraphFunction grad_sq(const WeightedGraph& g, const GraphFunction& f,
                      const GraphFunction* v = nullptr);

// Same with v >= 0 allowed (vertices with v = 0 contribute zero weight on
// incident edges). Used with v = |u|.
GraphFunction grad_sq_weighted(const WeightedGraph& g, const GraphFunction& f,
                               const GraphFunction& v);

// grad u . grad psi (x) = (1/2m) sum_y b(x,y)(u(x)-u(y))(psi(x)-psi(y)).
GraphFunction grad_dot(const WeightedGraph& g, const GraphFunction& u, const GraphFunction& psi);

// Green's formula: h(u,phi) against sum u (H phi) m, both sides computed
// independently. Pass at 1e-12 relative.
VerificationReport greens_check(const WeightedGraph& g, const GraphFunction& u,
                                const GraphFunction& phi);

// Ground state transform identity
//   (1/2) sum b v v (phi - phi)^2 + sum (v phi^2)(H v) m = h(v phi),
// pass at 1e-10 relative. When lambda is supplied and v is a supersolution
// to it, the inequality sum |grad_v phi|^2 m <= (h - lambda)(v phi) is
// reported in the notes.
VerificationReport gst_check(const WeightedGraph& g, const GraphFunction& v,
                             const GraphFunction& phi,
                             std::optional<double> lambda = std::nullopt);

// Caccioppoli inequality h(psi u) <= sum |grad_{|u|} psi|^2 m + sum (H u)(psi^2 u) m.
// On a finite graph every function is compactly supported and lies in the
// operator domain, so the two hypothesis regimes of the inequality collapse
// into this one unconditional check.
VerificationReport caccioppoli_check(const WeightedGraph& g, const GraphFunction& u,
                                     const GraphFunction& psi);

// Membership test for the class V: q_- <= (1-eps) h_+ + C as forms, decided
// by the smallest eigenvalue of (1-eps) h_+ + C - q_-.
VerificationReport q_in_V_check(const WeightedGraph& g, double eps, double C,
                                const SolverOptions& opts = {});

// chi = 2 b_K - lambda_K 1_K with
//   b_K = (1/m)(1_K sum_{y notin K} b(.,y) + 1_{X\K} sum_{y in K} b(.,y)),
//   lambda_K = inf of h on unit-norm functions supported in K.
// Requires h >= 0 off K; that hypothesis and the conclusion
// min-eig(h + chi) >= -1e-9 scale are both verified and reported.
struct BoundaryCorrection {
  GraphFunction chi;
  GraphFunction b_K;
  double lambda_K = 0.0;
  bool hypothesis_ok = true;          // h >= 0 on C_c(X \ K)
  VerificationReport hypothesis;      // empty complement => trivially true
  VerificationReport postcondition;   // min-eig(h + chi) >= -tol
};

BoundaryCorrection boundary_correction(const WeightedGraph& g, const VertexSet& K,
                                       const SolverOptions& opts = {});

}  // namespace agmonlab
