#pragma once

#include <optional>
#include <string>
#include <vector>

#include "agmonlab/graph.hpp"
#include "agmonlab/metrics.hpp"
#include "agmonlab/report.hpp"
#include "agmonlab/spectral.hpp"

namespace agmonlab {

// Cut-offs phi_n = (1 - d(B_n, .)/eps)_+ over the balls of the given metric,
// n = 1..n_levels. Each phi_n is 1 on B_n, lies in [0,1] and is monotone in n.
std::vector<GraphFunction> cutoff_sequence(const WeightedGraph& g, const MetricField& metric,
                                           double eps, int n_levels);

struct ApproximabilityReport {
  std::vector<double> energies;  // E_n = sum u^2 |grad phi_n|^2 m (or the weak variant)
  bool decreasing_toward_zero = false;
  std::string verdict;
};

// Diagnostic only: on a truncation the limit cannot be decided, so the
// verdict is a trend call (last value <= tail_fraction of the max, tail
// monotone within noise).
ApproximabilityReport approximability_report(const WeightedGraph& g, const GraphFunction& u,
                                             const std::vector<GraphFunction>& cutoffs,
                                             bool weak = false, double tail_fraction = 0.10,
                                             double noise = 1e-12);

struct FolnerReport {
  std::vector<double> boundary_mass;  // b(boundary F_n)
  std::vector<double> set_measure;    // m(F_n)
  std::vector<double> ratios;         // b(boundary F_n) / m(F_n)
  // filled when a function u is supplied: max |u| on the vertex boundary and
  // the fitted constant C with |u| <= C m(F_n)^{-1/2}
  std::vector<double> u_boundary_max;
  double fitted_C = 0.0;
};

FolnerReport folner_report(const WeightedGraph& g, const std::vector<VertexSet>& sets,
                           const GraphFunction* u = nullptr);

// CSV for ratio sequences: level,set_size,boundary,volume,ratio.
std::string ratio_csv(const WeightedGraph& g, const std::vector<VertexSet>& sets);

struct IsoperimetricProfile {
  std::vector<double> boundaries;  // |dW| per evaluated set
  std::vector<double> volumes;     // vol(W) = sum_W deg
  std::vector<double> measures;    // m(W)
  std::vector<double> ratios;
  double best_ratio = 0.0;
  std::string method;  // "exact_bruteforce" | "family_bound"
  bool exact = false;  // true when every proper connected subset was enumerated
  std::optional<double> family_best;
};

// |dW| = sum_{(x,y) in W x (X\W)} b(x,y) + sum_{x in W} q_+(x) m(x).
double set_boundary_mass(const WeightedGraph& g, const VertexSet& w);
double set_volume(const WeightedGraph& g, const VertexSet& w);

// Number of nonempty connected subsets with at most max_size vertices (the
// sets the exact Cheeger search walks).
std::size_t count_connected_subsets(const WeightedGraph& g, int max_size);

// Cheeger constant by brute force over connected W with |W| <= max_exact_size
// (proper subsets only) plus the supplied candidate family. Sets inside K are
// skipped when K is given (the at-infinity variant). max_exact_size > 14 is
// rejected; the enumeration is exhaustive exactly when max_exact_size >= n-1.
IsoperimetricProfile cheeger_report(const WeightedGraph& g, int max_exact_size,
                                    const std::vector<VertexSet>& family = {},
                                    const VertexSet* K = nullptr);

// Form inequality (1 - a~) deg_m - k~ <= h <= (1 + a~) deg_m + k~, each side
// decided by the smallest eigenvalue of the difference form. When
// dirichlet_mode is set the lower inequality is checked on every subspace
// {phi(x0) = 0} instead (the finite-graph reading of "compactly supported":
// on a closed finite graph constants defeat any k~ = 0 lower bound, while the
// level-set argument behind the Cheeger bound applies to functions that
// vanish somewhere).
VerificationReport sparse_form_check(const WeightedGraph& g, double a_tilde, double k_tilde,
                                     bool dirichlet_mode = false, const SolverOptions& opts = {});

}  // namespace agmonlab
