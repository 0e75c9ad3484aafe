#ifndef EPINET_EXACT_ANALYSIS_HPP
#define EPINET_EXACT_ANALYSIS_HPP

// Exhaustive joint-configuration analysis for small networks: the product
// Markov chain over all edge states, the exact mean-stability test, and the
// generic Markov-jump-system conditions it specializes.

#include "epinet/net_model.hpp"
#include "epinet/spectral.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace epinet {

struct JointChainOptions {
  std::size_t max_configurations = 4096;
};

/// Joint process of all edges. Configuration index k encodes the per-edge
/// states lexicographically: the first listed edge is the most significant
/// digit, each digit ranging over that edge's state index.
struct JointChain {
  std::size_t n = 0;
  std::size_t m = 0;
  Eigen::MatrixXd generator;              // N x N, Kronecker sum of edge generators
  std::vector<Eigen::MatrixXd> adjacency; // per configuration, n x n
  std::vector<double> stationary;         // product of per-edge laws
  std::vector<double> stationary_solved;  // null-space solve of pi Π = 0
  double stationary_residual = 0.0;       // ||pi Π||_inf for the product law

  std::size_t configuration_count() const { return adjacency.size(); }
};

JointChain build_joint_chain(const SwitchedNetworkSpec& spec, const JointChainOptions& opts = {});

struct ExactOptions {
  std::size_t max_dimension = 10000;  // cap on nN
};

/// Assembles Π^T ⊗ I_n + β diag(A_G1, ..., A_GN).
Eigen::MatrixXd assemble_mean_dynamics(const JointChain& joint, double beta, const ExactOptions& opts = {});

/// η of the matrix above. The network is mean stable iff η < δ.
double exact_mean_abscissa(const JointChain& joint, const EpidemicParams& params, const ExactOptions& opts = {});

struct JumpSystemVerdict {
  double value = 0.0;   // η(𝒜) for the mean test, E[μ] for the almost-sure test
  bool stable = false;  // value < 0
};

/// Mean stability of the positive jump system x' = A_σ x: η(Π^T ⊗ I + diag(A_k)) < 0.
JumpSystemVerdict check_jump_mean_stability(const std::vector<Eigen::MatrixXd>& modes, const Eigen::MatrixXd& generator,
                              const ExactOptions& opts = {});

/// Almost-sure stability via E_π[μ(βA_G − δI)] < 0.
JumpSystemVerdict check_jump_as_stability(const JointChain& joint, const EpidemicParams& params);

/// Writes a dense matrix as MatrixMarket coordinate real general, 1-based,
/// skipping exact zeros.
void write_matrix_market(std::ostream& os, const Eigen::MatrixXd& m);

}  // namespace epinet

#endif
