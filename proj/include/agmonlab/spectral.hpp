#pragma once

#include <optional>
#include <string>
#include <vector>

#include "agmonlab/graph.hpp"
#include "agmonlab/report.hpp"

namespace agmonlab {

// Eigenpairs of the m-symmetric operator H on l2(X,m), eigenvalues ascending,
// eigenvectors m-orthonormal with the entry of largest magnitude positive.
struct SpectralResult {
  std::vector<double> eigenvalues;
  std::vector<GraphFunction> eigenvectors;
  std::vector<double> residuals;  // ||(H - lambda) u||_m per pair
  std::string method;             // "dense" | "iterative"
};

struct SolverOptions {
  // Dense symmetric solve up to this size, shift-invert Lanczos beyond.
  int dense_threshold = 2000;
  bool force_iterative = false;
  double residual_tol = 1e-8;
};

SpectralResult eigensolve_lowest(const WeightedGraph& g, int k, const SolverOptions& opts = {});

// Smallest / largest eigenvalue of the form h - w on l2(X,m) (w optional).
double lowest_eigenvalue(const WeightedGraph& g, const GraphFunction* w = nullptr,
                         const SolverOptions& opts = {});
double largest_eigenvalue(const WeightedGraph& g, const GraphFunction* w = nullptr,
                          const SolverOptions& opts = {});

struct Lambda0EssEstimate {
  std::vector<double> values;  // lambda_0 of the Dirichlet restriction to X \ K_j
  double lambda0 = 0.0;        // lambda_0 of the full truncation
  double estimate = 0.0;       // last value of the sequence
  double gap = 0.0;            // estimate - lambda0
};

// Dirichlet-exhaustion estimate of the bottom of the essential spectrum:
// lambda_0 of the restriction to the complement of each K_j. The sequence is
// nondecreasing by form monotonicity; that is verified and a violation beyond
// round-off is a solver failure.
Lambda0EssEstimate lambda0_ess_estimate(const WeightedGraph& g,
                                        const std::vector<VertexSet>& exhaustion,
                                        const SolverOptions& opts = {});

// Solves (H - lambda) u = f in l2(X,m). Dense factorization under the dense
// threshold, Jacobi-preconditioned CG beyond; the residual in the m-norm is
// checked against 1e-9 * ||f||_m.
GraphFunction solve_H_eq(const WeightedGraph& g, const GraphFunction& f, double lambda,
                         const SolverOptions& opts = {});

// Pass iff the smallest eigenvalue of h - w on the Dirichlet restriction to
// X \ K is >= -1e-9 * scale. K may be empty.
VerificationReport form_positivity(const WeightedGraph& g, const GraphFunction& w,
                                   const VertexSet* K = nullptr, const SolverOptions& opts = {});

double norm_m(const WeightedGraph& g, const GraphFunction& f);
double inner_m(const WeightedGraph& g, const GraphFunction& f, const GraphFunction& h);

}  // namespace agmonlab
