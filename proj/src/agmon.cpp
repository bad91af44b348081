#include "agmonlab/agmon.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include <json.hpp>

#include "agmonlab/exhaustion.hpp"
#include "agmonlab/operator.hpp"

namespace agmonlab {

namespace {

double sup_edge_jump(const WeightedGraph& g, const GraphFunction& theta) {
  double r = 0.0;
  for (const Edge& e : g.edges()) r = std::max(r, std::fabs(theta[e.u] - theta[e.v]));
  return r;
}

void require_graph(const WeightedGraph& g, const GraphFunction& f, const char* what) {
  if (f.graph() != &g) fail(Errc::GraphMismatch, std::string(what) + " belongs to another graph");
}

}  // namespace

const char* decay_mode_name(DecayMode m) {
  switch (m) {
    case DecayMode::Metric: return "metric";
    case DecayMode::BelowEss: return "below_ess";
    case DecayMode::Sparse: return "sparse";
    case DecayMode::Cheeger: return "cheeger";
    case DecayMode::TwoSided: return "two_sided";
    case DecayMode::Supersolution: return "supersolution";
  }
  return "unknown";
}

WeightedGraph shift_potential(const WeightedGraph& g, double lambda) {
  std::vector<EdgeInput> edges;
  edges.reserve(g.edges().size());
  for (const Edge& e : g.edges()) edges.push_back({e.u, e.v, e.b});
  std::vector<double> q(static_cast<std::size_t>(g.n()));
  std::vector<std::string> labels;
  std::vector<std::vector<int>> coords;
  for (int x = 0; x < g.n(); ++x) {
    q[static_cast<std::size_t>(x)] = g.q(x) - lambda;
    labels.push_back(g.label(x));
    if (g.has_coords()) coords.push_back(g.coords(x));
  }
  return build_graph(edges, g.m(), std::move(q), std::move(labels), std::move(coords), g.origin());
}

VerificationReport exp_lemma_check(const WeightedGraph& g, const GraphFunction& theta) {
  require_graph(g, theta, "theta");
  const double r = sup_edge_jump(g, theta);
  const double factor = (1.0 + std::exp(r)) / 8.0;

  GraphFunction exp_half(g);
  for (int x = 0; x < g.n(); ++x) exp_half[x] = std::exp(theta[x] / 2.0);
  GraphFunction lhs = grad_sq(g, exp_half);
  GraphFunction gradsq_theta = grad_sq(g, theta);

  double worst = 0.0;
  for (int x = 0; x < g.n(); ++x) {
    double rhs = std::exp(theta[x]) * factor * gradsq_theta[x];
    double slack = 1e-12 * std::max(1.0, std::max(lhs[x], rhs));
    worst = std::max(worst, lhs[x] - rhs - slack);
  }

  // scalar version |e^a - e^b|^2 <= (e^{2a}+e^{2b})/2 |a-b|^2
  std::uint64_t state = 0x13198a2e03707344ULL;
  auto next = [&state]() {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<double>(state >> 11) * (1.0 / 9007199254740992.0);
  };
  int scalar_violations = 0;
  for (int i = 0; i < 10000; ++i) {
    double a = -5.0 + 10.0 * next();
    double b = -5.0 + 10.0 * next();
    double d = std::exp(a) - std::exp(b);
    double left = d * d;
    double right = 0.5 * (std::exp(2 * a) + std::exp(2 * b)) * (a - b) * (a - b);
    if (left > right + 1e-12 * std::max(1.0, right)) ++scalar_violations;
  }

  VerificationReport rep;
  rep.check = "exp_lemma";
  rep.lhs = worst;
  rep.rhs = 0.0;
  rep.margin = -worst;
  rep.tol = 0.0;
  rep.pass = worst <= 0.0 && scalar_violations == 0;
  rep.notes.push_back("r = " + fmt_double(r));
  rep.notes.push_back("scalar violations: " + std::to_string(scalar_violations) + " / 10000");
  return rep;
}

double rate_check_value(double r) { return r * r * (1.0 + std::exp(r)) / 16.0; }

double rate_from_gap(double a, RateMode mode) {
  if (!(a > 0.0)) fail(Errc::NonPositiveGap, "gap must be positive");
  double r;
  if (mode == RateMode::ClosedForm && a <= 1.0) {
    r = 2.0 * a * std::exp(-a);
  } else {
    // r^2 (1+e^r)/16 is increasing in r; find the largest r at 0.99 a
    double target = 0.99 * a;
    double lo = 0.0, hi = 1.0;
    while (rate_check_value(hi) < target && hi < 700.0) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
      double mid = 0.5 * (lo + hi);
      if (rate_check_value(mid) <= target)
        lo = mid;
      else
        hi = mid;
      if (hi - lo < 1e-10) break;
    }
    r = lo;
  }
  if (!(rate_check_value(r) < a))
    fail(Errc::SolverFailure, "rate postcondition violated: r^2(1+e^r)/16 >= a");
  return r;
}

VerificationReport eikonal_check(const WeightedGraph& g, const GraphFunction& gfun,
                                 const GraphFunction& w, double gamma) {
  require_graph(g, gfun, "g");
  require_graph(g, w, "w");
  for (int x = 0; x < g.n(); ++x) {
    if (gfun[x] < 0.0) fail(Errc::BadParams, "eikonal g must be >= 0");
    if (w[x] < 0.0) fail(Errc::BadParams, "eikonal w must be >= 0");
  }
  GraphFunction root(g);
  for (int x = 0; x < g.n(); ++x) root[x] = std::sqrt(gfun[x]);
  GraphFunction num = grad_sq(g, root);

  double ratio = 0.0;
  bool zero_set_ok = true;
  for (int x = 0; x < g.n(); ++x) {
    double denom = gfun[x] * w[x];
    if (denom > 0.0) {
      ratio = std::max(ratio, num[x] / denom);
    } else if (num[x] > 1e-14) {
      // g vanishing propagates along connected components; a nonzero
      // gradient against a vanishing g w is a structural failure
      zero_set_ok = false;
    }
  }

  VerificationReport rep;
  rep.check = "eikonal";
  rep.lhs = ratio;
  rep.rhs = gamma;
  rep.margin = gamma - ratio;
  rep.tol = 1e-10 * std::max(1.0, gamma);
  rep.pass = zero_set_ok && ratio <= gamma * (1.0 + 1e-10);
  if (!zero_set_ok) rep.notes.push_back("nonzero gradient on the zero set of g w");
  return rep;
}

VerificationReport rellich_check(const WeightedGraph& g, const GraphFunction& w,
                                 const GraphFunction& gfun, double gamma,
                                 const GraphFunction& u, const GraphFunction& f) {
  require_graph(g, w, "w");
  require_graph(g, gfun, "g");
  require_graph(g, u, "u");
  require_graph(g, f, "f");
  if (!(gamma > 0.0 && gamma < 1.0)) fail(Errc::BadParams, "gamma must lie in (0,1)");

  VerificationReport eik = eikonal_check(g, gfun, w, gamma);
  if (!eik.pass)
    fail(Errc::EikonalFailed, "eikonal hypothesis fails: ratio " + fmt_double(eik.lhs) +
                                  " > gamma " + fmt_double(gamma));
  for (int x = 0; x < g.n(); ++x)
    if (f[x] != 0.0 && w[x] == 0.0)
      fail(Errc::SupportViolation, "f is nonzero where w vanishes (vertex " + g.label(x) + ")");

  // verify H u = f to solver tolerance
  GraphFunction hu = apply_H(g, u);
  double resid = 0.0, fnorm = 0.0;
  for (int x = 0; x < g.n(); ++x) {
    double d = hu[x] - f[x];
    resid += d * d * g.m(x);
    fnorm += f[x] * f[x] * g.m(x);
  }
  resid = std::sqrt(resid);
  fnorm = std::sqrt(fnorm);
  if (resid > 1e-6 * std::max(1.0, fnorm))
    fail(Errc::BadParams, "u does not solve H u = f (residual " + fmt_double(resid) + ")");

  double lhs = 0.0, rhs = 0.0;
  for (int x = 0; x < g.n(); ++x) {
    lhs += u[x] * u[x] * gfun[x] * w[x] * g.m(x);
    if (f[x] != 0.0) rhs += f[x] * f[x] * gfun[x] / w[x] * g.m(x);
  }
  lhs *= (1.0 - gamma) * (1.0 - gamma);

  VerificationReport rep;
  rep.check = "rellich";
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.margin = rhs - lhs;
  rep.tol = 1e-10 * check_scale(lhs, rhs);
  rep.pass = rep.margin >= -rep.tol;
  rep.notes.push_back("gamma = " + fmt_double(gamma));
  rep.notes.push_back("solve residual " + fmt_double(resid));
  return rep;
}

GraphFunction wn_prime_regularization(const WeightedGraph& g, const GraphFunction& w_N,
                                      const GraphFunction& g_N, double gamma, const VertexSet& K) {
  require_graph(g, w_N, "w_N");
  require_graph(g, g_N, "g_N");
  if (K.graph() && K.graph() != &g) fail(Errc::GraphMismatch, "K belongs to another graph");

  GraphFunction root(g);
  for (int x = 0; x < g.n(); ++x) root[x] = std::sqrt(std::max(g_N[x], 0.0));
  GraphFunction num = grad_sq(g, root);

  GraphFunction out = w_N;
  for (int x : K.indices())
    out[x] = g_N[x] != 0.0 ? num[x] / (gamma * g_N[x]) : 0.0;
  return out;
}

namespace {

void append_check(DecayCertificate& cert, VerificationReport rep, const std::string& name) {
  rep.check = name;
  cert.hypothesis_checks.push_back(std::move(rep));
}

[[noreturn]] void hypothesis_failed(const VerificationReport& rep) {
  fail(Errc::HypothesisFailed, rep.check + " failed: " + rep.to_json_string());
}

int saturation_level(const GraphFunction& gfun) {
  double mx = 0.0;
  for (double v : gfun.values()) mx = std::max(mx, v);
  int n = 0;
  while (std::exp(static_cast<double>(n)) < mx && n < 10000) ++n;
  return n;
}

void validate_exhaustion(const WeightedGraph& g, const std::vector<VertexSet>& levels) {
  if (levels.size() < 3)
    fail(Errc::InsufficientExhaustion, "decay certificates need at least 3 exhaustion levels");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i].graph() != &g) fail(Errc::GraphMismatch, "exhaustion set belongs to another graph");
    if (levels[i].empty()) fail(Errc::EmptySet, "exhaustion levels must be nonempty");
    if (i > 0)
      for (int x : levels[i - 1].indices())
        if (!levels[i].contains(x)) fail(Errc::NotNested, "exhaustion levels are not nested");
  }
}

// partial sums of u^2 weight m over the exhaustion plus their stability
void accumulate_norms(DecayCertificate& cert, const WeightedGraph& g, const GraphFunction& u,
                      const std::vector<VertexSet>& levels) {
  for (const VertexSet& lv : levels) {
    double s = 0.0;
    for (int x : lv.indices()) s += u[x] * u[x] * cert.weight[x] * g.m(x);
    if (!cert.weighted_norms.empty() && s < cert.weighted_norms.back() - 1e-12)
      fail(Errc::SolverFailure, "weighted norms decreased along the exhaustion");
    cert.weighted_norms.push_back(s);
  }
  double last = cert.weighted_norms.back();
  double prev = cert.weighted_norms[cert.weighted_norms.size() - 2];
  cert.stability = last > 0.0 ? (last - prev) / last : 0.0;
}

}  // namespace

DecayCertificate decay_certificate(const WeightedGraph& g, const GraphFunction& u, DecayMode mode,
                                   const DecayParams& params, const SolverOptions& opts) {
  require_graph(g, u, "u");
  validate_exhaustion(g, params.exhaustion);

  DecayCertificate cert;
  cert.mode = mode;
  cert.lambda = params.lambda;
  cert.alpha = params.alpha;
  cert.weight = GraphFunction(g);

  switch (mode) {
    case DecayMode::Metric: {
      if (!params.intrinsic || !params.w)
        fail(Errc::ConfigError, "metric mode needs an intrinsic metric and a Hardy weight");
      if (!g.origin()) fail(Errc::NoOrigin, "metric mode needs an origin");
      VertexSet K = params.K.value_or(VertexSet(g, {}));

      append_check(cert, intrinsic_audit(*params.intrinsic), "intrinsic_metric");
      WeightedGraph shifted = shift_potential(g, params.lambda);
      GraphFunction w_shifted(shifted, params.w->values());
      VertexSet K_shifted(shifted, K.indices());
      append_check(cert,
                   form_positivity(shifted, w_shifted, K.empty() ? nullptr : &K_shifted, opts),
                   "hardy_off_K");
      for (const auto& c : cert.hypothesis_checks)
        if (!c.pass) hypothesis_failed(c);

      cert.r = rate_from_gap(1.0, params.rate_mode);
      cert.gamma = rate_check_value(cert.r);
      MetricField rho = agmon_metric(g, params.intrinsic->edge_lengths, *params.w, *g.origin(),
                                     AgmonVariant::Cutoff);
      GraphFunction gfun(g);
      for (int x = 0; x < g.n(); ++x)
        gfun[x] = std::isfinite(rho.dist[static_cast<std::size_t>(x)])
                      ? std::exp(cert.r * rho.dist[static_cast<std::size_t>(x)])
                      : 0.0;
      cert.saturation_N = saturation_level(gfun);
      VerificationReport eik = eikonal_check(g, gfun, *params.w, cert.gamma);
      append_check(cert, eik, "eikonal_chain");
      if (!eik.pass) hypothesis_failed(cert.hypothesis_checks.back());

      for (int x = 0; x < g.n(); ++x) cert.weight[x] = gfun[x] * (*params.w)[x];
      cert.notes.push_back("weight e^{r rho} w with rho the cutoff Agmon metric");
      break;
    }

    case DecayMode::BelowEss: {
      if (!params.intrinsic) fail(Errc::ConfigError, "below_ess mode needs an intrinsic metric");
      if (!g.origin()) fail(Errc::NoOrigin, "below_ess mode needs an origin");
      append_check(cert, intrinsic_audit(*params.intrinsic), "intrinsic_metric");
      if (!cert.hypothesis_checks.back().pass) hypothesis_failed(cert.hypothesis_checks.back());
      if (params.intrinsic->jump_size > 1.0 + 1e-12)
        fail(Errc::HypothesisFailed, "below_ess needs an intrinsic metric with jump size <= 1");

      double a;
      if (params.gap_a) {
        a = *params.gap_a;
      } else {
        // the estimate removes each K_j, so only levels with a nonempty
        // complement are usable
        std::vector<VertexSet> proper;
        for (const VertexSet& k : params.exhaustion)
          if (!k.complement().empty()) proper.push_back(k);
        if (proper.empty())
          fail(Errc::ConfigError, "below_ess needs exhaustion levels with nonempty complement");
        Lambda0EssEstimate est = lambda0_ess_estimate(g, proper, opts);
        a = est.estimate - params.lambda;
        cert.notes.push_back("lambda0_ess estimate " + fmt_double(est.estimate) +
                             " from Dirichlet exhaustion (monotone lower surrogate)");
      }
      if (!(a > 0.0)) fail(Errc::HypothesisFailed, "spectral gap estimate is not positive");
      cert.gap_a = a;
      cert.r = rate_from_gap(a, params.rate_mode);
      cert.gamma = rate_check_value(cert.r) / a;

      // (h - lambda) >= gamma a off some finite K: sweep the exhaustion for
      // the first K that verifies
      WeightedGraph shifted = shift_potential(g, params.lambda);
      GraphFunction w_gamma_a(shifted, std::vector<double>(static_cast<std::size_t>(g.n()),
                                                           cert.gamma * a));
      bool found = false;
      VerificationReport last_pos;
      for (const VertexSet& K : params.exhaustion) {
        VertexSet comp = K.complement();
        if (comp.empty()) break;
        VertexSet K_shift(shifted, K.indices());
        last_pos = form_positivity(shifted, w_gamma_a, &K_shift, opts);
        if (last_pos.pass) {
          found = true;
          cert.notes.push_back("Hardy bound verified off a set of " + std::to_string(K.size()) +
                               " vertices");
          break;
        }
      }
      append_check(cert, last_pos, "gap_hardy_off_K");
      if (!found) hypothesis_failed(cert.hypothesis_checks.back());

      GraphFunction gfun(g);
      for (int x = 0; x < g.n(); ++x) {
        double d = params.intrinsic->dist[static_cast<std::size_t>(x)];
        gfun[x] = std::isfinite(d) ? std::exp(cert.r * d) : 0.0;
      }
      cert.saturation_N = saturation_level(gfun);
      GraphFunction w_const(g, std::vector<double>(static_cast<std::size_t>(g.n()), a));
      VerificationReport eik = eikonal_check(g, gfun, w_const, cert.gamma);
      append_check(cert, eik, "eikonal_chain");
      if (!eik.pass) hypothesis_failed(cert.hypothesis_checks.back());

      cert.weight = gfun;  // the space is l2(X, e^{r d} m)
      cert.notes.push_back("weight e^{r d(o,.)} with the supplied intrinsic metric");
      break;
    }

    case DecayMode::Sparse:
    case DecayMode::Cheeger: {
      if (!g.origin()) fail(Errc::NoOrigin, "sparse/cheeger modes need an origin");
      VertexSet K = params.K.value_or(VertexSet(g, {}));
      double a;
      if (mode == DecayMode::Cheeger) {
        // a = 1 - sqrt(1 - alpha_inf^2) from the Cheeger constant at
        // infinity; the sweep below is an upper-bound family, so the derived
        // a errs large and the verified form inequality is the honest gate.
        IsoperimetricProfile prof =
            cheeger_report(g, params.cheeger_exact_size, {}, K.empty() ? nullptr : &K);
        double alpha_inf = std::min(prof.best_ratio, 1.0);
        a = 1.0 - std::sqrt(std::max(0.0, 1.0 - alpha_inf * alpha_inf));
        cert.notes.push_back("alpha_inf estimate " + fmt_double(alpha_inf) + " (" + prof.method +
                             "; upper-bound family, conservatism: a errs large)");
        if (params.gap_a) a = std::min(a, *params.gap_a);
      } else {
        if (!params.gap_a) fail(Errc::ConfigError, "sparse mode needs the gap a");
        a = *params.gap_a;
      }
      if (!(a > 0.0 && a <= 1.0))
        fail(Errc::HypothesisFailed, "sparse/cheeger rate needs a in (0,1]");
      cert.gap_a = a;
      cert.r = rate_from_gap(a, params.rate_mode);
      cert.gamma = rate_check_value(cert.r) / a;

      // hypothesis (h - lambda) >= a deg_m on C_c(X \ K)
      WeightedGraph shifted = shift_potential(g, params.lambda);
      GraphFunction w_deg(shifted);
      for (int x = 0; x < g.n(); ++x) w_deg[x] = a * g.deg_m(x);
      VertexSet K_shift(shifted, K.indices());
      VerificationReport pos =
          form_positivity(shifted, w_deg, K.empty() ? nullptr : &K_shift, opts);
      append_check(cert, pos, "sparse_gap_off_K");
      if (!pos.pass) hypothesis_failed(cert.hypothesis_checks.back());

      // combinatorial distance from the origin
      MetricField hops = shortest_paths(g, uniform_edge_lengths(g, 1.0), VertexSet(g, {*g.origin()}));
      GraphFunction gfun(g);
      for (int x = 0; x < g.n(); ++x) {
        double d = hops.dist[static_cast<std::size_t>(x)];
        gfun[x] = std::isfinite(d) ? std::exp(cert.r * d) : 0.0;
      }
      cert.saturation_N = saturation_level(gfun);
      GraphFunction w_deg_g(g);
      for (int x = 0; x < g.n(); ++x) w_deg_g[x] = a * g.deg_m(x);
      VerificationReport eik = eikonal_check(g, gfun, w_deg_g, cert.gamma);
      append_check(cert, eik, "eikonal_chain");
      if (!eik.pass) hypothesis_failed(cert.hypothesis_checks.back());

      for (int x = 0; x < g.n(); ++x) cert.weight[x] = gfun[x] * g.deg_m(x);
      cert.notes.push_back("weight e^{r |.|} deg (deg_m against the measure m)");
      break;
    }

    case DecayMode::Supersolution: {
      if (!params.hardy) fail(Errc::ConfigError, "supersolution mode needs a HardyWeight");
      if (!(params.alpha > 0.0 && params.alpha < 1.0))
        fail(Errc::ConfigError, "supersolution decay exponent must lie in (0,1)");
      const HardyWeight& hw = *params.hardy;
      if (hw.w.graph() != &g) fail(Errc::GraphMismatch, "Hardy weight belongs to another graph");

      OscillationGamma og = oscillation_and_gamma(g, hw.v, params.alpha);
      append_check(cert, og.pointwise_check, "power_inequality");
      if (!og.pointwise_check.pass) hypothesis_failed(cert.hypothesis_checks.back());
      cert.gamma = og.gamma;
      if (!(cert.gamma < 1.0))
        fail(Errc::HypothesisFailed, "oscillation gives gamma >= 1; no Rellich contraction");

      append_check(cert, hw.positivity, "hardy_positivity");
      if (!hw.positivity.pass) hypothesis_failed(cert.hypothesis_checks.back());

      GraphFunction gfun(g);
      for (int x = 0; x < g.n(); ++x) gfun[x] = std::pow(hw.v[x], params.alpha);
      cert.saturation_N = saturation_level(gfun);
      VerificationReport eik = eikonal_check(g, gfun, hw.w, cert.gamma);
      append_check(cert, eik, "eikonal_chain");
      if (!eik.pass) hypothesis_failed(cert.hypothesis_checks.back());

      for (int x = 0; x < g.n(); ++x) cert.weight[x] = gfun[x] * hw.w[x];
      cert.notes.push_back("weight v^alpha w with the supersolution Hardy pair");
      break;
    }

    case DecayMode::TwoSided: {
      if (!params.intrinsic || !params.w || !params.f)
        fail(Errc::ConfigError, "two_sided mode needs an intrinsic metric, w and f");
      if (!g.origin()) fail(Errc::NoOrigin, "two_sided mode needs an origin");
      const double alpha = params.alpha;
      double contraction = alpha * alpha * std::exp(alpha) / 8.0;
      if (!(contraction < 1.0))
        fail(Errc::HypothesisFailed, "two_sided needs alpha^2 e^alpha < 8");
      cert.C = 1.0 / ((1.0 - contraction) * (1.0 - contraction));

      append_check(cert, intrinsic_audit(*params.intrinsic), "intrinsic_metric");
      WeightedGraph shifted = shift_potential(g, params.lambda);
      GraphFunction w_shifted(shifted, params.w->values());
      append_check(cert, form_positivity(shifted, w_shifted, nullptr, opts), "hardy_global");
      for (const auto& c : cert.hypothesis_checks)
        if (!c.pass) hypothesis_failed(c);

      MetricField rho = agmon_metric(g, params.intrinsic->edge_lengths, *params.w, *g.origin(),
                                     AgmonVariant::Cutoff);
      // the proof's pointwise engine: |grad e^{alpha rho / 2}|^2 <= (alpha^2 e^alpha / 8) e^{alpha rho} w
      {
        GraphFunction half_weight(g);
        for (int x = 0; x < g.n(); ++x) {
          double d = rho.dist[static_cast<std::size_t>(x)];
          half_weight[x] = std::isfinite(d) ? std::exp(alpha * d) : 0.0;
        }
        VerificationReport eik = eikonal_check(g, half_weight, *params.w, contraction);
        append_check(cert, eik, "eikonal_chain");
        if (!eik.pass) hypothesis_failed(cert.hypothesis_checks.back());
      }
      // hypothesis u in l2(e^{-alpha rho} w m) checked at truncation scale
      double hyp_total = 0.0;
      for (int x = 0; x < g.n(); ++x) {
        double d = rho.dist[static_cast<std::size_t>(x)];
        if (std::isfinite(d)) hyp_total += u[x] * u[x] * std::exp(-alpha * d) * (*params.w)[x] * g.m(x);
      }
      cert.notes.push_back("hypothesis sum u^2 e^{-alpha rho} w m = " + fmt_double(hyp_total) +
                           " (truncation-scale check; completeness of rho assumed, not certified)");

      // displayed inequality: sum u^2 e^{2 alpha rho} w m <= C sum f^2 e^{2 alpha rho} w^{-1} m
      const GraphFunction& f = *params.f;
      for (int x = 0; x < g.n(); ++x)
        if (f[x] != 0.0 && (*params.w)[x] == 0.0)
          fail(Errc::SupportViolation, "f is nonzero where w vanishes");
      double lhs = 0.0, rhs = 0.0;
      GraphFunction gfun(g);
      for (int x = 0; x < g.n(); ++x) {
        double d = rho.dist[static_cast<std::size_t>(x)];
        double e2 = std::isfinite(d) ? std::exp(2.0 * alpha * d) : 0.0;
        gfun[x] = e2;
        lhs += u[x] * u[x] * e2 * (*params.w)[x] * g.m(x);
        if (f[x] != 0.0) rhs += f[x] * f[x] * e2 / (*params.w)[x] * g.m(x);
      }
      rhs *= cert.C;
      cert.saturation_N = saturation_level(gfun);
      VerificationReport ineq;
      ineq.check = "two_sided_inequality";
      ineq.lhs = lhs;
      ineq.rhs = rhs;
      ineq.margin = rhs - lhs;
      ineq.tol = 1e-10 * check_scale(lhs, rhs);
      ineq.pass = ineq.margin >= -ineq.tol;
      ineq.notes.push_back("C = " + fmt_double(cert.C));
      cert.inequality = ineq;

      for (int x = 0; x < g.n(); ++x) cert.weight[x] = gfun[x] * (*params.w)[x];
      cert.notes.push_back("weight e^{2 alpha rho} w");
      break;
    }
  }

  accumulate_norms(cert, g, u, params.exhaustion);

  bool hyp_ok = true;
  for (const auto& c : cert.hypothesis_checks) hyp_ok = hyp_ok && c.pass;
  bool ineq_ok = !cert.inequality || cert.inequality->pass;
  cert.pass = hyp_ok && ineq_ok && cert.stability <= params.stability_threshold;
  return cert;
}

std::string DecayCertificate::to_json_string() const {
  nlohmann::ordered_json j;
  j["mode"] = decay_mode_name(mode);
  j["lambda"] = lambda;
  j["gap_a"] = gap_a;
  j["r"] = r;
  j["gamma"] = gamma;
  j["alpha"] = alpha;
  j["C"] = C;
  j["saturation_N"] = saturation_N;
  j["weighted_norms"] = weighted_norms;
  j["stability"] = stability;
  j["pass"] = pass;
  j["notes"] = notes;
  auto reports = nlohmann::ordered_json::array();
  for (const auto& c : hypothesis_checks)
    reports.push_back(nlohmann::ordered_json::parse(c.to_json_string()));
  j["hypothesis_checks"] = reports;
  if (inequality) j["inequality"] = nlohmann::ordered_json::parse(inequality->to_json_string());
  return j.dump(2);
}

}  // namespace agmonlab
