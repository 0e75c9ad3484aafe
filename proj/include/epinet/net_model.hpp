#ifndef EPINET_NET_MODEL_HPP
#define EPINET_NET_MODEL_HPP

// Switched networks whose edges are independent finite-state Markov chains,
// and the stationary statistics of the graph process they induce.
//
// Vertices are 0-based in the C++ API. The JSON document format is 1-based;
// the conversion happens in io.cpp.

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace epinet {

/// Binary edge process with generator [[-p, p], [q, -q]] over {absent, present}.
struct EdgeChain {
  std::size_t i = 0;
  std::size_t j = 0;
  double p_rate = 0.0;  // 0 -> 1
  double q_rate = 0.0;  // 1 -> 0
};

/// Edge whose weight follows a finite-state chain over `states` (all in [0, 1]).
struct WeightedEdgeChain {
  std::size_t i = 0;
  std::size_t j = 0;
  std::vector<double> states;
  Eigen::MatrixXd generator;
};

/// Common view of both edge kinds: the state values and the rate matrix.
struct EdgeProcess {
  std::size_t i = 0;
  std::size_t j = 0;
  std::vector<double> values;
  Eigen::MatrixXd generator;

  std::size_t state_count() const { return values.size(); }
  double exit_rate(std::size_t state) const { return -generator(state, state); }
};

struct EpidemicParams {
  double beta = 0.0;
  double delta = 0.0;

  double threshold() const { return delta / beta; }
};

/// Validates beta > 0 and delta > 0 (both finite).
EpidemicParams make_params(double beta, double delta);

enum class EdgeKind { Binary, Weighted };

/// A vertex count plus one independent chain per listed vertex pair. Pairs
/// that are not listed are permanently non-adjacent. Immutable once built.
class SwitchedNetworkSpec {
public:
  static SwitchedNetworkSpec binary(std::size_t n, std::vector<EdgeChain> edges);
  static SwitchedNetworkSpec weighted(std::size_t n, std::vector<WeightedEdgeChain> edges);

  std::size_t vertex_count() const { return n_; }
  std::size_t edge_count() const { return processes_.size(); }
  EdgeKind kind() const { return kind_; }
  bool is_weighted() const { return kind_ == EdgeKind::Weighted; }

  const std::vector<EdgeProcess>& processes() const { return processes_; }
  /// Only populated for binary networks.
  const std::vector<EdgeChain>& binary_edges() const { return binary_; }

  /// Product of per-edge state counts, saturating at SIZE_MAX.
  std::size_t configuration_count() const;

  /// Returns a copy with vertex v relabeled to perm[v].
  SwitchedNetworkSpec relabeled(std::span<const std::size_t> perm) const;

private:
  SwitchedNetworkSpec() = default;
  void check_pairs() const;

  std::size_t n_ = 0;
  EdgeKind kind_ = EdgeKind::Binary;
  std::vector<EdgeChain> binary_;
  std::vector<EdgeProcess> processes_;
};

/// "(i,j)" with 1-based labels, for diagnostics.
std::string edge_label(std::size_t i, std::size_t j);

double stationary_edge_prob(const EdgeChain& chain);

/// Solves pi G = 0, sum(pi) = 1 densely. Rejects generators without a unique
/// stationary law (more than one closed class).
std::vector<double> stationary_distribution(const Eigen::MatrixXd& generator);

struct PairMoment {
  std::size_t i = 0;
  std::size_t j = 0;
  double mean = 0.0;
  double variance = 0.0;
};

/// Stationary mean adjacency Ā, entrywise variances, and the uncertainty
/// scalar Δ = max_i Σ_j Var(A_ij). Stored sparsely over the listed pairs.
class StationaryStats {
public:
  StationaryStats(std::size_t n, std::vector<PairMoment> pairs, EdgeKind kind);

  std::size_t vertex_count() const { return n_; }
  EdgeKind kind() const { return kind_; }
  const std::vector<PairMoment>& pairs() const { return pairs_; }
  double delta_uncertainty() const { return delta_u_; }
  const std::vector<double>& variance_row_sums() const { return var_rows_; }

  Eigen::MatrixXd abar_dense() const;
  Eigen::MatrixXd variance_dense() const;

  /// out = Ā x
  void apply_abar(std::span<const double> x, std::span<double> out) const;

private:
  std::size_t n_;
  std::vector<PairMoment> pairs_;
  EdgeKind kind_;
  std::vector<double> var_rows_;
  double delta_u_ = 0.0;
};

StationaryStats stationary_stats(const SwitchedNetworkSpec& spec);

}  // namespace epinet

#endif
