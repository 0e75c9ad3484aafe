#include "epinet/stability.hpp"

#include "epinet/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace epinet {

namespace {

constexpr double kExpFloor = -745.0;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace

double f_eval(double s, std::size_t n, double delta_u) {
  require(std::isfinite(s) && s >= 0.0, "f is defined for s >= 0");
  require(n >= 1, "f needs n >= 1");
  require(std::isfinite(delta_u), "uncertainty must be finite");
  require(delta_u > 0.0, "uncertainty must be > 0 (the zero case is the static network)");
  const auto nd = static_cast<double>(n);
  const double exponent = std::log(2.0) + 2.0 * std::log(nd) - 3.0 * s * s / (2.0 * s + 6.0 * delta_u);
  const double tail = exponent < kExpFloor ? 0.0 : std::exp(exponent);
  return s + tail;
}

UncertaintyBound minimize_f(std::size_t n, double delta_u, const MinimizeOptions& opts) {
  require(n >= 1, "minimize_f needs n >= 1");
  require(std::isfinite(delta_u) && delta_u > 0.0, "minimize_f needs uncertainty > 0");
  const auto f = [&](double s) { return f_eval(s, n, delta_u); };

  // Sign change of h(t) = c2 t² − c3 − sqrt(2 c3 t), t = s + 3Δ.
  const double c2 = 1.5;
  const double c3 = 13.5 * delta_u * delta_u;
  const auto h = [&](double t) { return c2 * t * t - c3 - std::sqrt(2.0 * c3 * t); };
  double lo = 3.0 * delta_u;
  double hi = 5.0 * delta_u;
  if (!(h(lo) < 0.0))
    fail(ErrorKind::Numerical, "convexity onset: h(3Δ) is not negative, contradicting the concave-then-convex shape of f");
  for (int k = 0; h(hi) <= 0.0; ++k) {
    if (k > 200)
      fail(ErrorKind::Numerical, "convexity onset: no sign change of h found");
    lo = hi;
    hi *= 2.0;
  }
  for (int k = 0; k < 300 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++k) {
    const double mid = 0.5 * (lo + hi);
    (h(mid) < 0.0 ? lo : hi) = mid;
  }
  // hi is on the convex side of the root.
  const double s0 = std::max(0.0, hi - 3.0 * delta_u);

  // Bracket the minimizer of the convex piece: grow b until a forward secant
  // slope is positive; then the minimizer lies in [a, b].
  double a = s0;
  double width = std::max({s0, delta_u, 1.0});
  double b = s0 + width;
  for (int k = 0;; ++k) {
    if (k > 2000)
      fail(ErrorKind::Numerical, "could not bracket the minimizer of f");
    const double step = 1e-6 * std::max(b, 1e-300);
    if (f(b + step) > f(b)) {
      b += step;
      break;
    }
    a = b;
    width *= 2.0;
    b = s0 + width;
  }

  // Golden-section search on [a, b].
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int k = 0; k < 10000 && (b - a) > opts.rel_tol * std::max(b, 1e-300); ++k) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  double s_conv = f1 <= f2 ? x1 : x2;
  double f_conv = std::min(f1, f2);
  if (const double f_s0 = f(s0); f_s0 < f_conv) {
    s_conv = s0;
    f_conv = f_s0;
  }

  UncertaintyBound ub;
  ub.n = n;
  ub.delta_uncertainty = delta_u;
  ub.s0 = s0;
  ub.s_upper = b;
  const double f_zero = f(0.0);
  if (f_zero <= f_conv) {
    ub.f_min = f_zero;
    ub.s_star = 0.0;
    ub.min_at_zero = true;
  } else {
    ub.f_min = f_conv;
    ub.s_star = s_conv;
  }
  return ub;
}

const char* to_string(SufficientVerdict v) {
  switch (v) {
  case SufficientVerdict::StableAlmostSurely:
    return "stable-a.s.";
  case SufficientVerdict::Inconclusive:
    return "inconclusive";
  }
  return "?";
}

const char* to_string(ExactVerdict v) {
  switch (v) {
  case ExactVerdict::NotRun:
    return "not-run";
  case ExactVerdict::MeanStable:
    return "mean-stable";
  case ExactVerdict::NotMeanStable:
    return "not-mean-stable";
  case ExactVerdict::SkippedTooLarge:
    return "skipped-too-large";
  }
  return "?";
}

StabilityReport spectral_condition(std::size_t n, double lambda_max, double delta_u, const EpidemicParams& params) {
  make_params(params.beta, params.delta);
  require(std::isfinite(lambda_max), "lambda_max must be finite");
  StabilityReport r;
  r.condition = "spectral";
  r.n = n;
  r.beta = params.beta;
  r.delta = params.delta;
  r.threshold = params.threshold();
  r.lambda_max_abar = lambda_max;
  r.delta_uncertainty = delta_u;
  if (delta_u <= 0.0) {
    r.static_branch = true;
    r.f_min = 0.0;
    r.notes.push_back("zero uncertainty: the graph process is a static network and the threshold is exact");
  } else {
    r.bound = minimize_f(n, delta_u);
    r.f_min = r.bound->f_min;
  }
  r.lhs_sufficient = lambda_max + r.f_min;
  r.verdict_sufficient =
      r.lhs_sufficient < r.threshold ? SufficientVerdict::StableAlmostSurely : SufficientVerdict::Inconclusive;
  return r;
}

std::pair<double, std::string> stationary_lambda_max(const StationaryStats& stats, const LambdaOptions& opts) {
  if (stats.vertex_count() <= opts.dense_cap)
    return {lambda_max_dense(stats.abar_dense()), "dense"};
  SymmetricOperator op{stats.vertex_count(),
                       [&stats](std::span<const double> x, std::span<double> y) { stats.apply_abar(x, y); }};
  const auto res = lambda_max_iterative(op, opts.iterative);
  return {res.value, res.converged ? "power-iteration" : "power-iteration (not converged)"};
}

StabilityReport check_spectral(const StationaryStats& stats, const EpidemicParams& params, const LambdaOptions& opts) {
  require(stats.kind() == EdgeKind::Binary, "the binary spectral condition needs binary edge chains; use check_weighted");
  const auto [lam, method] = stationary_lambda_max(stats, opts);
  StabilityReport r = spectral_condition(stats.vertex_count(), lam, stats.delta_uncertainty(), params);
  r.lambda_method = method;
  return r;
}

StabilityReport check_weighted(const StationaryStats& stats, const EpidemicParams& params, const LambdaOptions& opts) {
  require(stats.kind() == EdgeKind::Weighted, "check_weighted needs weighted edge chains");
  for (const auto& pm : stats.pairs()) {
    if (pm.mean > 1.0)
      fail(ErrorKind::InvalidArgument,
           "edge " + edge_label(pm.i, pm.j) + " has mean weight above 1; weights must be normalized so that w <= 1");
  }
  const auto [lam, method] = stationary_lambda_max(stats, opts);
  StabilityReport r = spectral_condition(stats.vertex_count(), lam, stats.delta_uncertainty(), params);
  r.condition = "weighted-spectral";
  r.lambda_method = method;
  return r;
}

StabilityReport check_expected_degree(const ExpectedDegreeStats& st, const EpidemicParams& params) {
  StabilityReport r = spectral_condition(st.n, st.d_tilde, std::max(st.delta_d, 0.0), params);
  r.condition = "expected-degree";
  r.lambda_method = "rank-one";
  r.d_tilde = st.d_tilde;
  r.lhs_expected_degree = r.lhs_sufficient;
  if (st.lambda_iterative) {
    r.notes.push_back("power iteration on the zero-diagonal mean adjacency gives " + fmt(st.lambda_iterative->value) +
                      (st.lambda_iterative->converged ? "" : " (not converged)"));
  }
  if (st.invalid_vertices > 0) {
    r.notes.push_back("warning: " + std::to_string(st.invalid_vertices) +
                      " vertices take part in pairs with rho*d_i*d_j > 1 (max " + fmt(st.max_pair_probability) +
                      "); these are not valid edge probabilities and a(1-a) was evaluated as written");
  }
  if (st.delta_d <= 0.0)
    r.notes.push_back("warning: computed uncertainty " + fmt(st.delta_d) + " is not positive; treated as static");
  return r;
}

StabilityReport check_expected_degree(const DegreeSource& degrees, const EpidemicParams& params,
                                      const ExpectedDegreeOptions& opts) {
  make_params(params.beta, params.delta);
  return check_expected_degree(expected_degree_stats(degrees, opts), params);
}

ExpectedSpectrumVerdict check_expected_spectrum(const JointChain& joint, const EpidemicParams& params) {
  ExpectedSpectrumVerdict v;
  for (std::size_t k = 0; k < joint.adjacency.size(); ++k) {
    if (joint.stationary[k] == 0.0)
      continue;
    v.e_lambda_max += joint.stationary[k] * lambda_max_dense(joint.adjacency[k]);
  }
  v.threshold = params.threshold();
  v.stable = v.e_lambda_max < v.threshold;
  return v;
}

std::vector<std::string> verdict_lines(const StabilityReport& r) {
  std::vector<std::string> lines;
  std::ostringstream os;
  os.precision(6);
  if (r.condition == "expected-degree") {
    os << "expected-degree condition: d~ + min f = " << *r.d_tilde << " + " << r.f_min << " = " << r.lhs_sufficient;
  } else if (r.static_branch) {
    os << "static network: lambda_max(Abar) = " << r.lambda_max_abar;
  } else {
    os << "spectral condition: lambda_max(Abar) + min f = " << r.lambda_max_abar << " + " << r.f_min << " = "
       << r.lhs_sufficient;
  }
  os << (r.verdict_sufficient == SufficientVerdict::StableAlmostSurely ? " < " : " >= ") << "delta/beta = "
     << r.threshold << " -> " << (r.static_branch && r.verdict_sufficient == SufficientVerdict::Inconclusive
                                      ? "not stable"
                                      : to_string(r.verdict_sufficient));
  lines.push_back(os.str());

  if (r.e_lambda_max) {
    std::ostringstream e;
    e.precision(6);
    e << "expected spectrum: E[lambda_max(A)] = " << *r.e_lambda_max
      << (*r.e_lambda_max < r.threshold ? " < " : " >= ") << "delta/beta -> "
      << (*r.e_lambda_max < r.threshold ? "stable-a.s." : "inconclusive");
    lines.push_back(e.str());
  }
  if (r.verdict_exact != ExactVerdict::NotRun) {
    std::ostringstream e;
    e.precision(10);
    if (r.verdict_exact == ExactVerdict::SkippedTooLarge) {
      e << "exact mean-stability test: skipped-too-large";
    } else {
      e << "exact mean-stability test (authoritative): eta = " << *r.lhs_exact
        << (r.verdict_exact == ExactVerdict::MeanStable ? " < " : " >= ") << "delta = " << r.delta << " -> "
        << to_string(r.verdict_exact);
    }
    lines.push_back(e.str());
  }
  for (const auto& note : r.notes)
    lines.push_back("note: " + note);
  return lines;
}

}  // namespace epinet
