#ifndef EPINET_STABILITY_HPP
#define EPINET_STABILITY_HPP

// Spectral sufficient conditions for extinction of SIS epidemics on randomly
// switched networks, and the one-dimensional minimization they rely on.
//
// The uncertainty penalty is f(s) = s + 2n² exp(−3s²/(2s + 6Δ)). The
// network dies out almost surely when λ_max(Ā) + min_{s≥0} f(s) < δ/β.

#include "epinet/ensembles.hpp"
#include "epinet/exact_analysis.hpp"
#include "epinet/net_model.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace epinet {

double f_eval(double s, std::size_t n, double delta_u);

struct UncertaintyBound {
  std::size_t n = 0;
  double delta_uncertainty = 0.0;
  double f_min = 0.0;
  double s_star = 0.0;
  double s0 = 0.0;  // convexity onset: f'' < 0 on [0, s0), f'' > 0 after
  double s_upper = 0.0;  // certified bracket end for the convex piece
  bool min_at_zero = false;
};

struct MinimizeOptions {
  double rel_tol = 1e-10;
};

/// min_{s≥0} f = min(f(0), min_{s≥s0} f). s0 is the unique root of
/// h(t) = (3/2)t² − 27Δ²/2 − sqrt(27Δ² t) in the shifted variable t = s + 3Δ,
/// found by bisection; the convex piece is minimized by golden-section search.
UncertaintyBound minimize_f(std::size_t n, double delta_u, const MinimizeOptions& opts = {});

enum class SufficientVerdict { StableAlmostSurely, Inconclusive };
enum class ExactVerdict { NotRun, MeanStable, NotMeanStable, SkippedTooLarge };

const char* to_string(SufficientVerdict v);
const char* to_string(ExactVerdict v);

struct StabilityReport {
  std::string condition;  // "spectral", "expected-degree", "weighted-spectral"
  std::size_t n = 0;
  double beta = 0.0;
  double delta = 0.0;
  double threshold = 0.0;  // δ/β
  double lambda_max_abar = 0.0;
  std::string lambda_method;
  double delta_uncertainty = 0.0;
  bool static_branch = false;  // Δ = 0: exact static threshold applies
  std::optional<UncertaintyBound> bound;
  double f_min = 0.0;
  double lhs_sufficient = 0.0;
  SufficientVerdict verdict_sufficient = SufficientVerdict::Inconclusive;

  std::optional<double> d_tilde;
  std::optional<double> lhs_expected_degree;

  std::optional<double> e_lambda_max;  // E_π[λ_max(A_G)], when enumerated
  std::optional<double> lhs_exact;     // η(𝒜_β)
  ExactVerdict verdict_exact = ExactVerdict::NotRun;
  std::optional<std::size_t> configurations;

  std::vector<std::string> notes;
};

/// Shared core: compares lambda_max + min f against δ/β (strictly).
StabilityReport spectral_condition(std::size_t n, double lambda_max, double delta_u,
                                         const EpidemicParams& params);

struct LambdaOptions {
  std::size_t dense_cap = 2000;
  PowerIterationOptions iterative{1e-12};
};

/// λ_max(Ā) from sparse stationary stats: dense eigensolve up to the cap,
/// power iteration above. Returns the value and the method used.
std::pair<double, std::string> stationary_lambda_max(const StationaryStats& stats, const LambdaOptions& opts = {});

StabilityReport check_spectral(const StationaryStats& stats, const EpidemicParams& params, const LambdaOptions& opts = {});

/// Expected-degree condition: d̃ + min f(Δ_d) < δ/β.
StabilityReport check_expected_degree(const DegreeSource& degrees, const EpidemicParams& params,
                           const ExpectedDegreeOptions& opts = {});
StabilityReport check_expected_degree(const ExpectedDegreeStats& stats, const EpidemicParams& params);

/// Weighted networks: Δ is the max row sum of Var(A_w).
StabilityReport check_weighted(const StationaryStats& stats, const EpidemicParams& params, const LambdaOptions& opts = {});

struct ExpectedSpectrumVerdict {
  double e_lambda_max = 0.0;
  double threshold = 0.0;
  bool stable = false;
};

/// E_π[λ_max(A_G)] < δ/β by enumeration of the joint chain.
ExpectedSpectrumVerdict check_expected_spectrum(const JointChain& joint, const EpidemicParams& params);

/// Human-readable summary lines for a report.
std::vector<std::string> verdict_lines(const StabilityReport& report);

}  // namespace epinet

#endif
