#ifndef EPINET_ENSEMBLES_HPP
#define EPINET_ENSEMBLES_HPP

// Structured ensembles whose stationary statistics have closed forms: the
// two-community block model and expected-degree (Chung-Lu) graphs, including
// power-law degree sequences at sizes where Ā cannot be materialized.

#include "epinet/net_model.hpp"
#include "epinet/spectral.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace epinet {

struct CommunitySpec {
  std::size_t n1 = 1;
  std::size_t n2 = 1;
  double theta1 = 0.0;
  double theta2 = 0.0;
  double phi = 0.0;
  double switch_scale = 1.0;

  void validate() const;
};

/// Ā for the two-community model: θ_ℓ inside community ℓ, φ across, zero
/// diagonal. Holds only the parameters; the matvec is O(n).
class CommunityAbar {
public:
  explicit CommunityAbar(const CommunitySpec& spec);

  std::size_t vertex_count() const { return spec_.n1 + spec_.n2; }
  /// Perron root of the 2x2 equitable-partition quotient, which is λ_max(Ā).
  double lambda_max() const { return lambda_max_; }
  double delta_uncertainty() const { return delta_u_; }
  Eigen::Matrix2d quotient() const;

  SymmetricOperator as_operator() const;
  Eigen::MatrixXd dense() const;

  /// Closed-form approximation (n1θ1 + n2θ2 + sqrt((n1θ1 − n2θ2)² + 4n1n2φ²))/2 − ε.
  double approximation(double epsilon) const;

private:
  CommunitySpec spec_;
  double lambda_max_ = 0.0;
  double delta_u_ = 0.0;
};

CommunityAbar community_abar(const CommunitySpec& spec);

/// Lazily evaluated degree sequence; `at(i)` for i in [0, n).
struct DegreeSource {
  std::size_t n = 0;
  std::function<double(std::size_t)> at;

  static DegreeSource from_vector(std::vector<double> d);
};

struct ExpectedDegreeSpec {
  std::vector<double> d;
  double switch_scale = 1.0;

  DegreeSource source() const;
};

enum class ProbabilityPolicy {
  Strict,     // reject sequences with some ρ d_i d_j > 1
  Unclipped,  // accept them and evaluate ā(1 − ā) as written
};

struct ExpectedDegreeOptions {
  ProbabilityPolicy policy = ProbabilityPolicy::Strict;
  /// Power iteration on ρdd^T − ρ diag(d²) runs only up to this n.
  std::size_t iterative_cap = 2'000'000;
  double iterative_tol = 1e-10;
};

struct ExpectedDegreeStats {
  std::size_t n = 0;
  double rho = 0.0;
  double d_tilde = 0.0;          // ρ Σ d_i², the rank-one λ_max
  double delta_d = 0.0;          // max_i Σ_{j≠i} ā_ij (1 − ā_ij)
  double max_degree = 0.0;
  double max_pair_probability = 0.0;
  std::size_t invalid_vertices = 0;  // vertices in some pair with ρ d_i d_j > 1
  std::optional<PowerIterationResult> lambda_iterative;
};

/// Two streaming passes over the sequence; O(1) extra memory unless the
/// power iteration runs.
ExpectedDegreeStats expected_degree_stats(const DegreeSource& degrees, const ExpectedDegreeOptions& opts = {});

struct PowerLawSpec {
  std::size_t n = 0;
  double exponent = 0.0;
  double max_degree = 0.0;
  double avg_degree = 0.0;
};

/// d_i = c (i + i0 − 1)^{−1/(γ−1)} (1-based i), with c chosen for the average
/// degree and i0 so that d_1 equals the maximum degree.
class PowerLawDegrees {
public:
  explicit PowerLawDegrees(const PowerLawSpec& spec);

  std::size_t size() const { return spec_.n; }
  double scale() const { return c_; }
  double offset() const { return i0_; }
  /// 0-based index.
  double operator()(std::size_t i) const;

  DegreeSource source() const;
  std::vector<double> materialize() const;

private:
  PowerLawSpec spec_;
  double c_ = 0.0;
  double i0_ = 0.0;
  double power_ = 0.0;
};

PowerLawDegrees power_law_degrees(const PowerLawSpec& spec);

/// Per-pair rates p = κā, q = κ(1 − ā); pairs with ā = 0 are left out.
SwitchedNetworkSpec realize_spec(const Eigen::MatrixXd& abar, double switch_scale);

SwitchedNetworkSpec realize_community(const CommunitySpec& spec);
SwitchedNetworkSpec realize_expected_degrees(const ExpectedDegreeSpec& spec);

}  // namespace epinet

#endif
