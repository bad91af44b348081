#include "agmonlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace agmonlab {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Form matrix A with h(phi,psi) = phi^T A psi; the operator is M^{-1} A.
SpMat assemble_form(const WeightedGraph& g, const GraphFunction* w) {
  const int n = g.n();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(4 * g.edges().size() + static_cast<std::size_t>(n));
  for (const Edge& e : g.edges()) {
    trip.emplace_back(e.u, e.v, -e.b);
    trip.emplace_back(e.v, e.u, -e.b);
    trip.emplace_back(e.u, e.u, e.b);
    trip.emplace_back(e.v, e.v, e.b);
  }
  for (int x = 0; x < n; ++x) {
    double qx = g.q(x);
    if (w) qx -= (*w)[x];
    if (qx != 0.0) trip.emplace_back(x, x, qx * g.m(x));
  }
  SpMat a(n, n);
  a.setFromTriplets(trip.begin(), trip.end());
  return a;
}

// Symmetrized operator S = M^{-1/2} A M^{-1/2}; same spectrum as (A, M).
SpMat symmetrize(const WeightedGraph& g, const SpMat& a) {
  const int n = g.n();
  Vec dinv(n);
  for (int x = 0; x < n; ++x) dinv[x] = 1.0 / std::sqrt(g.m(x));
  SpMat s = a;
  for (int k = 0; k < s.outerSize(); ++k)
    for (SpMat::InnerIterator it(s, k); it; ++it)
      it.valueRef() *= dinv[it.row()] * dinv[it.col()];
  return s;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Vec deterministic_unit_vector(int n) {
  Vec v(n);
  std::uint64_t st = 0x51a7f00ddeadbeefULL;
  for (int i = 0; i < n; ++i)
    v[i] = static_cast<double>(splitmix64(st) >> 11) * (1.0 / 9007199254740992.0) - 0.5;
  v.normalize();
  return v;
}

double gershgorin_lower(const SpMat& s) {
  double lo = std::numeric_limits<double>::infinity();
  for (int k = 0; k < s.outerSize(); ++k) {
    double diag = 0.0, off = 0.0;
    for (SpMat::InnerIterator it(s, k); it; ++it) {
      if (it.row() == it.col())
        diag = it.value();
      else
        off += std::fabs(it.value());
    }
    lo = std::min(lo, diag - off);
  }
  return std::isfinite(lo) ? lo : 0.0;
}

double gershgorin_upper(const SpMat& s) {
  double hi = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < s.outerSize(); ++k) {
    double diag = 0.0, off = 0.0;
    for (SpMat::InnerIterator it(s, k); it; ++it) {
      if (it.row() == it.col())
        diag = it.value();
      else
        off += std::fabs(it.value());
    }
    hi = std::max(hi, diag + off);
  }
  return std::isfinite(hi) ? hi : 0.0;
}

// Jacobi-preconditioned CG with indefiniteness detection: p^T A p <= 0 means
// the shift is not below the spectrum, so callers can lower it.
struct CgOutcome {
  bool converged = false;
  bool indefinite = false;
};

CgOutcome cg_solve(const SpMat& a, const Vec& rhs, Vec& x, double rel_tol, int max_iter) {
  const int n = static_cast<int>(rhs.size());
  Vec dinv(n);
  for (int i = 0; i < n; ++i) {
    double d = a.coeff(i, i);
    dinv[i] = d > 0.0 ? 1.0 / d : 1.0;
  }
  x.setZero();
  Vec r = rhs;
  double rhs_norm = rhs.norm();
  if (rhs_norm == 0.0) return {true, false};
  Vec z = dinv.asDiagonal() * r;
  Vec p = z;
  Vec ap(n);
  double rz = r.dot(z);
  for (int it = 0; it < max_iter; ++it) {
    ap.noalias() = a * p;
    double pap = p.dot(ap);
    if (!(pap > 0.0)) return {false, true};
    double alpha = rz / pap;
    x += alpha * p;
    r -= alpha * ap;
    if (r.norm() <= rel_tol * rhs_norm) return {true, false};
    z = dinv.asDiagonal() * r;
    double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  return {false, false};
}

struct LanczosOut {
  std::vector<double> values;  // ascending eigenvalues of S
  Mat vectors;                 // columns, orthonormal
  bool ok = false;
  bool indefinite = false;
  // best-effort Ritz estimates for re-shifting, filled even when not ok
  std::vector<double> ritz;
};

// Shift-invert Lanczos with full reorthogonalization of the search basis.
// Applying (S - sigma I)^{-1} is done by CG; sigma must stay below the
// bottom eigenvalue or the run reports indefiniteness.
LanczosOut lanczos_shift_invert(const SpMat& s, double sigma, int k, int max_steps) {
  const int n = static_cast<int>(s.rows());
  SpMat shifted = s;
  for (int i = 0; i < n; ++i) shifted.coeffRef(i, i) -= sigma;
  shifted.makeCompressed();

  LanczosOut out;
  const int m = std::min(max_steps, n);
  Mat basis(n, m);
  std::vector<double> alpha, beta;
  Vec v = deterministic_unit_vector(n);
  Vec v_prev = Vec::Zero(n);
  double beta_prev = 0.0;

  auto ritz_of = [&](int steps, Eigen::SelfAdjointEigenSolver<Mat>& es) {
    Mat t = Mat::Zero(steps, steps);
    for (int i = 0; i < steps; ++i) {
      t(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i + 1 < steps) {
        t(i, i + 1) = beta[static_cast<std::size_t>(i)];
        t(i + 1, i) = beta[static_cast<std::size_t>(i)];
      }
    }
    es.compute(t);
  };

  for (int j = 0; j < m; ++j) {
    basis.col(j) = v;
    Vec w(n);
    auto cg = cg_solve(shifted, v, w, 1e-13, 40 * n + 200);
    if (cg.indefinite) {
      out.indefinite = true;
      return out;
    }
    if (!cg.converged) return out;
    w -= beta_prev * v_prev;
    double a = v.dot(w);
    w -= a * v;
    for (int pass = 0; pass < 2; ++pass)
      w -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).transpose() * w);
    alpha.push_back(a);
    const int steps = j + 1;
    double b = w.norm();
    beta.push_back(b);
    const bool exhausted = (steps == m) || b < 1e-14;

    if (exhausted || (steps >= std::max(2 * k, 8) && steps % 4 == 0)) {
      Eigen::SelfAdjointEigenSolver<Mat> es;
      ritz_of(steps, es);
      out.ritz.clear();
      for (int i = steps - 1; i >= 0; --i) {
        double mu = es.eigenvalues()[i];
        if (mu > 0.0) out.ritz.push_back(sigma + 1.0 / mu);
      }
      // largest mu of (S - sigma)^{-1} <-> smallest eigenvalues of S
      bool plausible = steps >= k;
      for (int i = 0; i < k && plausible; ++i) {
        int idx = steps - 1 - i;
        double mu = es.eigenvalues()[idx];
        double resid = (b < 1e-14 ? 0.0 : b) * std::fabs(es.eigenvectors()(steps - 1, idx));
        if (mu <= 0.0 || resid > 1e-9 * mu) plausible = false;
      }
      if (plausible) {
        // verify with true residuals on S before accepting
        std::vector<double> vals(static_cast<std::size_t>(k));
        Mat vecs(n, k);
        bool good = true;
        for (int i = 0; i < k; ++i) {
          int idx = steps - 1 - i;
          vals[static_cast<std::size_t>(i)] = sigma + 1.0 / es.eigenvalues()[idx];
          vecs.col(i) = basis.leftCols(steps) * es.eigenvectors().col(idx);
          vecs.col(i).normalize();
          double resid =
              (s * vecs.col(i) - vals[static_cast<std::size_t>(i)] * vecs.col(i)).norm();
          if (resid > 1e-9 * (1.0 + std::fabs(vals[static_cast<std::size_t>(i)]))) good = false;
        }
        if (good) {
          // i = 0 holds the largest mu, i.e. the smallest eigenvalue of S,
          // so vals is already ascending.
          out.values = std::move(vals);
          out.vectors = std::move(vecs);
          out.ok = true;
          return out;
        }
      }
      if (exhausted) return out;
    }
    if (b < 1e-14) return out;
    v_prev = basis.col(j);
    beta_prev = b;
    v = w / b;
  }
  return out;
}

LanczosOut smallest_eigs_iterative(const SpMat& s, int k) {
  const double glb = gershgorin_lower(s);
  const double gub = gershgorin_upper(s);
  const double span = std::max(gub - glb, 1.0);

  // Probe far below the spectrum to locate the bottom, then re-shift close
  // underneath it; overshooting shifts are detected and backed off.
  LanczosOut probe = lanczos_shift_invert(s, glb - 1e-3 * span, k, 50);
  if (probe.ok) return probe;
  double bottom = glb;
  double width = span * 1e-4;
  if (!probe.ritz.empty()) {
    bottom = probe.ritz.front();
    std::size_t kk = std::min(probe.ritz.size() - 1, static_cast<std::size_t>(k));
    width = std::max(probe.ritz[kk] - probe.ritz.front(), span * 1e-9);
  }

  for (int attempt = 0; attempt < 7; ++attempt) {
    double shift = bottom - width * 0.5 * std::pow(8.0, attempt);
    if (attempt == 6) shift = glb - 1e-3 * span;
    LanczosOut out = lanczos_shift_invert(s, shift, k, 240);
    if (out.ok) return out;
  }
  return {};
}

void sign_fix(Vec& v) {
  int arg = 0;
  double best = 0.0;
  for (int i = 0; i < v.size(); ++i) {
    if (std::fabs(v[i]) > best) {
      best = std::fabs(v[i]);
      arg = i;
    }
  }
  if (v[arg] < 0.0) v = -v;
}

}  // namespace

double norm_m(const WeightedGraph& g, const GraphFunction& f) {
  double s = 0.0;
  for (int x = 0; x < g.n(); ++x) s += f[x] * f[x] * g.m(x);
  return std::sqrt(s);
}

double inner_m(const WeightedGraph& g, const GraphFunction& f, const GraphFunction& h) {
  double s = 0.0;
  for (int x = 0; x < g.n(); ++x) s += f[x] * h[x] * g.m(x);
  return s;
}

SpectralResult eigensolve_lowest(const WeightedGraph& g, int k, const SolverOptions& opts) {
  const int n = g.n();
  if (k < 1 || k > n) fail(Errc::BadParams, "eigensolve_lowest needs 1 <= k <= n");
  SpMat a = assemble_form(g, nullptr);
  SpMat s = symmetrize(g, a);

  SpectralResult res;
  Mat vecs;
  if (n <= opts.dense_threshold && !opts.force_iterative) {
    Eigen::SelfAdjointEigenSolver<Mat> es{Mat(s)};
    if (es.info() != Eigen::Success) fail(Errc::SolverFailure, "dense eigensolver failed");
    res.method = "dense";
    res.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + k);
    vecs = es.eigenvectors().leftCols(k);
  } else {
    LanczosOut out = smallest_eigs_iterative(s, k);
    if (!out.ok) fail(Errc::SolverFailure, "shift-invert Lanczos did not converge");
    res.method = "iterative";
    res.eigenvalues = out.values;
    vecs = out.vectors;
  }

  for (int i = 0; i < k; ++i) {
    Vec y = vecs.col(i);
    // map back from the symmetrized space; u = M^{-1/2} y is m-orthonormal
    Vec u(n);
    for (int x = 0; x < n; ++x) u[x] = y[x] / std::sqrt(g.m(x));
    sign_fix(u);
    GraphFunction gf(g);
    for (int x = 0; x < n; ++x) gf[x] = u[x];
    // residual ||(H - lambda) u||_m = ||M^{-1}(A - lambda M) u||_m
    Vec r = a * u;
    for (int x = 0; x < n; ++x) r[x] = r[x] / g.m(x) - res.eigenvalues[static_cast<std::size_t>(i)] * u[x];
    double rn = 0.0;
    for (int x = 0; x < n; ++x) rn += r[x] * r[x] * g.m(x);
    res.residuals.push_back(std::sqrt(rn));
    res.eigenvectors.push_back(std::move(gf));
  }
  for (int i = 0; i < k; ++i) {
    if (res.residuals[static_cast<std::size_t>(i)] >
        opts.residual_tol * (1.0 + std::fabs(res.eigenvalues[static_cast<std::size_t>(i)])))
      fail(Errc::SolverFailure, "eigenpair residual exceeds tolerance");
  }
  return res;
}

double lowest_eigenvalue(const WeightedGraph& g, const GraphFunction* w, const SolverOptions& opts) {
  if (w && w->graph() != &g) fail(Errc::GraphMismatch, "weight function belongs to another graph");
  const int n = g.n();
  SpMat a = assemble_form(g, w);
  SpMat s = symmetrize(g, a);
  if (n <= opts.dense_threshold && !opts.force_iterative) {
    Eigen::SelfAdjointEigenSolver<Mat> es{Mat(s), Eigen::EigenvaluesOnly};
    if (es.info() != Eigen::Success) fail(Errc::SolverFailure, "dense eigensolver failed");
    return es.eigenvalues()[0];
  }
  LanczosOut out = smallest_eigs_iterative(s, 1);
  if (!out.ok) fail(Errc::SolverFailure, "shift-invert Lanczos did not converge");
  return out.values.front();
}

double largest_eigenvalue(const WeightedGraph& g, const GraphFunction* w, const SolverOptions& opts) {
  if (w && w->graph() != &g) fail(Errc::GraphMismatch, "weight function belongs to another graph");
  const int n = g.n();
  SpMat a = assemble_form(g, w);
  SpMat s = symmetrize(g, a);
  if (n <= opts.dense_threshold && !opts.force_iterative) {
    Eigen::SelfAdjointEigenSolver<Mat> es{Mat(s), Eigen::EigenvaluesOnly};
    if (es.info() != Eigen::Success) fail(Errc::SolverFailure, "dense eigensolver failed");
    return es.eigenvalues()[n - 1];
  }
  // mirror the spectrum: largest of S is sigma - smallest of (sigma I - S)
  double sigma = gershgorin_upper(s) + 1.0;
  SpMat mirrored = -s;
  for (int i = 0; i < n; ++i) mirrored.coeffRef(i, i) += sigma;
  mirrored.makeCompressed();
  LanczosOut out = smallest_eigs_iterative(mirrored, 1);
  if (!out.ok) fail(Errc::SolverFailure, "shift-invert Lanczos did not converge");
  return sigma - out.values.front();
}

Lambda0EssEstimate lambda0_ess_estimate(const WeightedGraph& g,
                                        const std::vector<VertexSet>& exhaustion,
                                        const SolverOptions& opts) {
  if (exhaustion.empty()) fail(Errc::BadParams, "empty exhaustion");
  Lambda0EssEstimate out;
  out.lambda0 = lowest_eigenvalue(g, nullptr, opts);
  for (const VertexSet& k : exhaustion) {
    if (k.graph() != &g) fail(Errc::GraphMismatch, "exhaustion set belongs to another graph");
    VertexSet comp = k.complement();
    if (comp.empty()) fail(Errc::EmptyComplement, "exhaustion set covers the whole graph");
    WeightedGraph restricted = dirichlet_restriction(g, comp);
    out.values.push_back(lowest_eigenvalue(restricted, nullptr, opts));
  }
  for (std::size_t j = 1; j < out.values.size(); ++j) {
    double scale = std::max({1.0, std::fabs(out.values[j - 1]), std::fabs(out.values[j])});
    if (out.values[j] < out.values[j - 1] - 1e-8 * scale)
      fail(Errc::SolverFailure, "Dirichlet monotonicity violated; eigensolver inaccurate");
  }
  out.estimate = out.values.back();
  out.gap = out.estimate - out.lambda0;
  return out;
}

GraphFunction solve_H_eq(const WeightedGraph& g, const GraphFunction& f, double lambda,
                         const SolverOptions& opts) {
  if (f.graph() != &g) fail(Errc::GraphMismatch, "right-hand side belongs to another graph");
  const int n = g.n();
  const double fnorm = norm_m(g, f);
  GraphFunction u(g);
  if (fnorm == 0.0) return u;

  SpMat a = assemble_form(g, nullptr);
  // (A - lambda M) u = M f
  SpMat sys = a;
  Vec rhs(n);
  for (int x = 0; x < n; ++x) {
    sys.coeffRef(x, x) -= lambda * g.m(x);
    rhs[x] = g.m(x) * f[x];
  }
  sys.makeCompressed();

  Vec sol(n);
  if (n < opts.dense_threshold) {
    if (n <= 512) {
      SpMat s = symmetrize(g, a);
      Eigen::SelfAdjointEigenSolver<Mat> es{Mat(s), Eigen::EigenvaluesOnly};
      for (int i = 0; i < n; ++i)
        if (std::fabs(es.eigenvalues()[i] - lambda) < 1e-10)
          fail(Errc::NearSingular, "lambda within 1e-10 of a truncation eigenvalue");
    }
    Eigen::LDLT<Mat> ldlt{Mat(sys)};
    if (ldlt.info() != Eigen::Success) fail(Errc::SolverFailure, "dense factorization failed");
    sol = ldlt.solve(rhs);
  } else {
    auto cg = cg_solve(sys, rhs, sol, 1e-12, 40 * n + 200);
    if (cg.indefinite)
      fail(Errc::SolverFailure, "system is indefinite; iterative path needs lambda below the spectrum");
    if (!cg.converged) fail(Errc::SolverFailure, "conjugate gradient did not converge");
  }

  for (int x = 0; x < n; ++x) u[x] = sol[x];
  // residual check in the m-norm
  Vec r = a * sol;
  double rn = 0.0;
  for (int x = 0; x < n; ++x) {
    double rx = r[x] / g.m(x) - lambda * sol[x] - f[x];
    rn += rx * rx * g.m(x);
  }
  rn = std::sqrt(rn);
  if (rn > 1e-9 * fnorm)
    fail(Errc::NearSingular, "solve residual " + fmt_double(rn) + " exceeds 1e-9 * ||f||_m");
  return u;
}

VerificationReport form_positivity(const WeightedGraph& g, const GraphFunction& w,
                                   const VertexSet* K, const SolverOptions& opts) {
  if (w.graph() != &g) fail(Errc::GraphMismatch, "weight function belongs to another graph");
  VerificationReport rep;
  rep.check = "form_positivity";
  double lam;
  if (K && !K->empty()) {
    VertexSet comp = K->complement();
    if (comp.empty()) fail(Errc::EmptyComplement, "K covers the whole graph");
    WeightedGraph restricted = dirichlet_restriction(g, comp);
    GraphFunction wr(restricted);
    const auto& keep = comp.indices();
    for (std::size_t i = 0; i < keep.size(); ++i) wr[static_cast<int>(i)] = w[keep[i]];
    lam = lowest_eigenvalue(restricted, &wr, opts);
    rep.notes.push_back("restricted to the complement of K (" + std::to_string(K->size()) +
                        " vertices removed)");
  } else {
    lam = lowest_eigenvalue(g, &w, opts);
  }
  rep.lhs = lam;
  rep.rhs = 0.0;
  rep.margin = lam;
  rep.tol = 1e-9 * std::max(1.0, std::fabs(lam));
  rep.pass = lam >= -rep.tol;
  rep.notes.push_back("smallest eigenvalue of h - w on the admissible subspace");
  return rep;
}

}  // namespace agmonlab
