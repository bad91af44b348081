#pragma once

#include <optional>
#include <string>
#include <vector>

#include "agmonlab/graph.hpp"
#include "agmonlab/hardy.hpp"
#include "agmonlab/metrics.hpp"
#include "agmonlab/report.hpp"
#include "agmonlab/spectral.hpp"

namespace agmonlab {

// Exponential inequality |grad e^{theta/2}|^2 <= e^theta (1+e^r)/8 |grad theta|^2
// with r = sup_{x~y} |theta(x)-theta(y)|, checked vertexwise, plus the scalar
// inequality |e^a - e^b|^2 <= (e^{2a}+e^{2b})/2 |a-b|^2 on 10^4 random pairs.
VerificationReport exp_lemma_check(const WeightedGraph& g, const GraphFunction& theta);

enum class RateMode { Bisect, ClosedForm };

// Largest safe decay rate for a spectral gap a: the defining inequality is
// r^2 (1+e^r)/16 < a. ClosedForm returns 2 a e^{-a} (valid for a <= 1, falls
// back to bisection beyond); Bisect finds the largest r with
// r^2 (1+e^r)/16 <= 0.99 a. The defining inequality is re-checked on return.
double rate_from_gap(double a, RateMode mode = RateMode::Bisect);

// r^2 (1+e^r)/16, the quantity the rate must keep below the gap.
double rate_check_value(double r);

// Eikonal inequality |grad g^{1/2}|^2 <= gamma g w; on the zero set of g w
// the numerator must vanish (g = 0 propagates along connected components).
VerificationReport eikonal_check(const WeightedGraph& g, const GraphFunction& gfun,
                                 const GraphFunction& w, double gamma);

// Rellich inequality (1-gamma)^2 sum u^2 g w m <= sum f^2 g w^{-1} m for
// H u = f with f supported in supp w; the eikonal hypothesis is re-verified
// and a failure raises EikonalFailed.
VerificationReport rellich_check(const WeightedGraph& g, const GraphFunction& w,
                                 const GraphFunction& gfun, double gamma,
                                 const GraphFunction& u, const GraphFunction& f);

// w'(x) = |grad g_N^{1/2}|^2(x)/(gamma g_N(x)) on K where g_N != 0 (else 0),
// w_N outside K: caps the Hardy weight on the exceptional set while keeping
// the eikonal inequality.
GraphFunction wn_prime_regularization(const WeightedGraph& g, const GraphFunction& w_N,
                                      const GraphFunction& g_N, double gamma, const VertexSet& K);

enum class DecayMode { Metric, BelowEss, Sparse, Cheeger, TwoSided, Supersolution };

const char* decay_mode_name(DecayMode m);

struct DecayParams {
  std::vector<VertexSet> exhaustion;  // >= 3 nested levels
  double stability_threshold = 0.01;

  double lambda = 0.0;                 // eigenvalue of u
  std::optional<double> gap_a;         // spectral gap a (BelowEss/Sparse/Cheeger); estimated when absent
  RateMode rate_mode = RateMode::Bisect;

  const MetricField* intrinsic = nullptr;  // intrinsic metric (Metric/BelowEss/TwoSided)
  const GraphFunction* w = nullptr;        // Hardy weight field (Metric/TwoSided)
  std::optional<VertexSet> K;              // exceptional set

  const HardyWeight* hardy = nullptr;  // Supersolution mode
  double alpha = 0.5;                  // decay exponent (Supersolution/TwoSided)
  const GraphFunction* f = nullptr;    // right-hand side of (H-lambda) u = f (TwoSided)

  int cheeger_exact_size = 8;          // brute-force cap for the Cheeger sweep
};

// Executable decay certificate: hypothesis checks, the mode's weight field,
// weighted norms along the exhaustion and their stability. "u in l2(weight)"
// is undecidable from finitely many terms, so pass means: every hypothesis
// check passed and the partial sums moved less than the stability threshold
// between the two largest exhaustion levels.
struct DecayCertificate {
  DecayMode mode = DecayMode::Metric;
  double lambda = 0.0;
  double gap_a = 0.0;
  double r = 0.0;
  double gamma = 0.0;
  double alpha = 0.0;
  double C = 0.0;              // two-sided constant (1 - alpha^2 e^alpha / 8)^{-2}
  int saturation_N = 0;        // first N with g ^ e^N = g on the truncation
  GraphFunction weight;        // per-vertex weight; norms are sum u^2 weight m
  std::vector<double> weighted_norms;
  double stability = 0.0;
  std::vector<VerificationReport> hypothesis_checks;
  std::optional<VerificationReport> inequality;  // two-sided display
  std::vector<std::string> notes;
  bool pass = false;

  std::string to_json_string() const;
};

DecayCertificate decay_certificate(const WeightedGraph& g, const GraphFunction& u, DecayMode mode,
                                   const DecayParams& params, const SolverOptions& opts = {});

// q -> q - lambda; the form of the shifted graph is h - lambda.
WeightedGraph shift_potential(const WeightedGraph& g, double lambda);

}  // namespace agmonlab
