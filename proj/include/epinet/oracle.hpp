#ifndef EPINET_ORACLE_HPP
#define EPINET_ORACLE_HPP

// Brute-force verification on enumerable instances. Everything here is
// recomputed from the joint chain alone (Ā and Δ included) so that it stays
// independent of the stationary-statistics code path it checks.

#include "epinet/exact_analysis.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace epinet {

/// Σ_G π(G) g(A_G) over every configuration.
double enumerate_expectation(const JointChain& joint, const std::function<double(const Eigen::MatrixXd&)>& g);

/// Ā and Δ from the joint law by enumeration.
struct EnumeratedMoments {
  Eigen::MatrixXd abar;
  Eigen::MatrixXd variance;
  double delta_uncertainty = 0.0;
};
EnumeratedMoments enumerate_moments(const JointChain& joint);

struct TailCheck {
  double s = 0.0;
  double exact_tail = 0.0;  // P(λ_max(A) > λ_max(Ā) + s)
  double bound = 0.0;       // 2n exp(−3s²/(2s + 6Δ))
  bool ok = false;
};

/// Exact upper-tail probabilities of λ_max against the concentration bound.
std::vector<TailCheck> check_chung_radcliffe(const JointChain& joint, std::span<const double> s_grid);

struct OracleReport {
  std::string descriptor;
  std::size_t n = 0;
  std::size_t m = 0;
  double lambda_max_abar = 0.0;
  double e_lambda_max = 0.0;
  double delta_uncertainty = 0.0;
  double f_min = 0.0;
  double upper_bound = 0.0;   // λ_max(Ā) + min f
  double exact_abscissa = 0.0;  // η of the mean dynamics at β = 1
  bool sandwich_ok = false;
  std::size_t tail_violations = 0;
  std::vector<TailCheck> tails;
  std::vector<std::string> details;

  bool passed() const { return sandwich_ok && tail_violations == 0; }
};

/// Sandwich λ_max(Ā) ≤ E[λ_max] ≤ λ_max(Ā) + min f (relative tol 1e-8) and
/// the tail bound on a `grid_points` grid over [0, n].
OracleReport check_instance(const SwitchedNetworkSpec& spec, const std::string& descriptor,
                            std::size_t grid_points = 20);

/// Random binary instance: n ∈ {2,3,4}, each pair present with probability
/// 3/4 (at least one edge), rates uniform in [0.1, 5].
SwitchedNetworkSpec random_small_spec(std::uint64_t seed);

/// Runs check_instance on `count` seeded random instances, in parallel.
std::vector<OracleReport> run_sandwich_suite(std::size_t count, std::uint64_t seed);

}  // namespace epinet

#endif
