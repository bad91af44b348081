#pragma once

#include <optional>
#include <string>
#include <vector>

#include "agmonlab/graph.hpp"
#include "agmonlab/report.hpp"
#include "agmonlab/spectral.hpp"

namespace agmonlab {

// Hardy weight w = H(v^alpha)/v^alpha with its certificate: the generating
// positive supersolution v, the exponent, the exceptional set and the
// oscillation sup_{x~y} v(x)/v(y).
struct HardyWeight {
  GraphFunction w;
  GraphFunction v;
  double alpha = 0.5;
  VertexSet K;
  double oscillation = 1.0;
  int clamped = 0;                 // entries below -1e-12 rejected; tiny negatives zeroed
  VerificationReport positivity;   // h >= w on the truncation (recorded, not enforced)
  std::vector<std::string> warnings;
};

// Supersolution construction. Requires v > 0 everywhere and q = 0 unless
// allow_general_q is set (the construction still runs but is flagged;
// nonnegativity of the weight needs a superharmonic v^alpha, which a sign
// change in q can break).
HardyWeight supersolution_hardy(const WeightedGraph& g, const GraphFunction& v, double alpha,
                                bool allow_general_q = false, const SolverOptions& opts = {});

// Green function of the q = 0 operator with the given boundary layer held at
// zero: solves H v = 1_root / m on the interior. The boundary defaults to
// the outermost coordinate layer of a generated box. Positive on the
// interior (verified).
GraphFunction green_function(const WeightedGraph& g, int root,
                             const VertexSet* boundary = nullptr, const SolverOptions& opts = {});

struct OscillationGamma {
  double eps0 = 0.0;   // (inf_{x~y} v(x)/v(y))^{1/2}
  double gamma = 0.0;  // ((1 - eps0^alpha)/(1 - eps0))^2
  VerificationReport pointwise_check;
};

// eps0 and gamma of the power inequality |t^a - (st)^a|^2 / t^{2a} <= gamma (1-s)^2,
// validated on all graph edges and on a 10^4-point (s,t) grid.
OscillationGamma oscillation_and_gamma(const WeightedGraph& g, const GraphFunction& v, double alpha);

struct NullCriticalityTrend {
  std::vector<double> partial_sums;  // S_j = sum_{B_j} v w m
  std::string classification;       // "bounded" | "increasing"
};

// Diagnostic partial sums of v w m over an exhaustion; never a pass/fail.
NullCriticalityTrend null_criticality_trend(const WeightedGraph& g, const HardyWeight& hw,
                                            const std::vector<VertexSet>& exhaustion);

}  // namespace agmonlab
