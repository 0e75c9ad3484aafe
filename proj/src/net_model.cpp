#include "epinet/net_model.hpp"

#include "epinet/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <utility>

namespace epinet {

namespace {

void check_endpoints(std::size_t n, std::size_t i, std::size_t j) {
  if (i == j)
    fail(ErrorKind::InvalidArgument, "edge " + edge_label(i, j) + ": self-loops are not allowed");
  if (i >= n || j >= n)
    fail(ErrorKind::InvalidArgument,
         "edge " + edge_label(i, j) + ": vertex out of range for n = " + std::to_string(n));
}

void check_generator(const Eigen::MatrixXd& g, const std::string& where) {
  if (g.rows() != g.cols() || g.rows() == 0)
    fail(ErrorKind::InvalidArgument, where + ": generator must be a non-empty square matrix");
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  for (Eigen::Index r = 0; r < g.rows(); ++r) {
    for (Eigen::Index c = 0; c < g.cols(); ++c) {
      if (!std::isfinite(g(r, c)))
        fail(ErrorKind::InvalidArgument, where + ": generator has a non-finite entry");
      if (r != c && g(r, c) < 0.0)
        fail(ErrorKind::InvalidArgument, where + ": generator has a negative off-diagonal rate");
    }
    if (std::abs(g.row(r).sum()) > 1e-12 * scale * static_cast<double>(g.cols()))
      fail(ErrorKind::InvalidArgument, where + ": generator row " + std::to_string(r) + " does not sum to zero");
  }
}

EdgeProcess to_process(const EdgeChain& e) {
  EdgeProcess p;
  p.i = e.i;
  p.j = e.j;
  p.values = {0.0, 1.0};
  p.generator.resize(2, 2);
  p.generator << -e.p_rate, e.p_rate, e.q_rate, -e.q_rate;
  return p;
}

}  // namespace

std::string edge_label(std::size_t i, std::size_t j) {
  std::ostringstream os;
  os << '(' << i + 1 << ',' << j + 1 << ')';
  return os.str();
}

EpidemicParams make_params(double beta, double delta) {
  require(std::isfinite(beta) && beta > 0.0, "infection rate beta must be > 0");
  require(std::isfinite(delta) && delta > 0.0, "curing rate delta must be > 0");
  return {beta, delta};
}

double stationary_edge_prob(const EdgeChain& chain) {
  const std::string where = "edge " + edge_label(chain.i, chain.j);
  if (!(std::isfinite(chain.p_rate) && std::isfinite(chain.q_rate)) || chain.p_rate < 0.0 || chain.q_rate < 0.0)
    fail(ErrorKind::InvalidArgument, where + ": rates must be finite and >= 0");
  if (chain.p_rate + chain.q_rate <= 0.0)
    fail(ErrorKind::InvalidArgument, where + ": p + q = 0, the chain has no unique stationary distribution");
  return chain.p_rate / (chain.p_rate + chain.q_rate);
}

std::vector<double> stationary_distribution(const Eigen::MatrixXd& generator) {
  check_generator(generator, "chain");
  const Eigen::Index k = generator.rows();
  const Eigen::MatrixXd gt = generator.transpose();
  Eigen::FullPivLU<Eigen::MatrixXd> rank_lu(gt);
  rank_lu.setThreshold(1e-12);
  if (rank_lu.rank() != k - 1)
    fail(ErrorKind::InvalidArgument, "chain has no unique stationary distribution (more than one closed class)");

  Eigen::MatrixXd system = gt;
  system.row(k - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k);
  rhs(k - 1) = 1.0;
  const Eigen::VectorXd pi = system.fullPivLu().solve(rhs);

  std::vector<double> out(static_cast<std::size_t>(k));
  for (Eigen::Index s = 0; s < k; ++s)
    out[static_cast<std::size_t>(s)] = std::max(0.0, pi(s));
  return out;
}

SwitchedNetworkSpec SwitchedNetworkSpec::binary(std::size_t n, std::vector<EdgeChain> edges) {
  require(n >= 1, "network must have at least one vertex");
  SwitchedNetworkSpec spec;
  spec.n_ = n;
  spec.kind_ = EdgeKind::Binary;
  spec.processes_.reserve(edges.size());
  for (auto& e : edges) {
    check_endpoints(n, e.i, e.j);
    if (e.i > e.j)
      std::swap(e.i, e.j);
    stationary_edge_prob(e);
    spec.processes_.push_back(to_process(e));
  }
  spec.binary_ = std::move(edges);
  spec.check_pairs();
  return spec;
}

SwitchedNetworkSpec SwitchedNetworkSpec::weighted(std::size_t n, std::vector<WeightedEdgeChain> edges) {
  require(n >= 1, "network must have at least one vertex");
  SwitchedNetworkSpec spec;
  spec.n_ = n;
  spec.kind_ = EdgeKind::Weighted;
  spec.processes_.reserve(edges.size());
  for (auto& e : edges) {
    check_endpoints(n, e.i, e.j);
    const std::string where = "edge " + edge_label(e.i, e.j);
    if (e.states.empty())
      fail(ErrorKind::InvalidArgument, where + ": weighted edge needs at least one state");
    for (double w : e.states) {
      if (!std::isfinite(w) || w < 0.0 || w > 1.0)
        fail(ErrorKind::InvalidArgument,
             where + ": weight " + std::to_string(w) + " outside [0, 1]; weights must be normalized so that w <= 1");
    }
    if (static_cast<std::size_t>(e.generator.rows()) != e.states.size())
      fail(ErrorKind::InvalidArgument, where + ": generator size does not match the number of states");
    check_generator(e.generator, where);
    try {
      stationary_distribution(e.generator);
    } catch (const Error& err) {
      fail(err.kind(), where + ": " + err.what());
    }
    EdgeProcess p;
    p.i = std::min(e.i, e.j);
    p.j = std::max(e.i, e.j);
    p.values = e.states;
    p.generator = e.generator;
    spec.processes_.push_back(std::move(p));
  }
  spec.check_pairs();
  return spec;
}

void SwitchedNetworkSpec::check_pairs() const {
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& p : processes_) {
    if (!seen.emplace(p.i, p.j).second)
      fail(ErrorKind::InvalidArgument, "edge " + edge_label(p.i, p.j) + " is listed more than once");
  }
}

std::size_t SwitchedNetworkSpec::configuration_count() const {
  constexpr std::size_t kMax = std::numeric_limits<std::size_t>::max();
  std::size_t total = 1;
  for (const auto& p : processes_) {
    const std::size_t k = p.state_count();
    if (total > kMax / k)
      return kMax;
    total *= k;
  }
  return total;
}

SwitchedNetworkSpec SwitchedNetworkSpec::relabeled(std::span<const std::size_t> perm) const {
  require(perm.size() == n_, "permutation length must equal the vertex count");
  SwitchedNetworkSpec out = *this;
  for (auto& e : out.binary_) {
    e.i = perm[e.i];
    e.j = perm[e.j];
    if (e.i > e.j)
      std::swap(e.i, e.j);
  }
  for (auto& p : out.processes_) {
    p.i = perm[p.i];
    p.j = perm[p.j];
    if (p.i > p.j)
      std::swap(p.i, p.j);
  }
  return out;
}

StationaryStats::StationaryStats(std::size_t n, std::vector<PairMoment> pairs, EdgeKind kind)
    : n_(n), pairs_(std::move(pairs)), kind_(kind), var_rows_(n, 0.0) {
  for (const auto& pm : pairs_) {
    var_rows_[pm.i] += pm.variance;
    var_rows_[pm.j] += pm.variance;
  }
  delta_u_ = var_rows_.empty() ? 0.0 : *std::max_element(var_rows_.begin(), var_rows_.end());
}

Eigen::MatrixXd StationaryStats::abar_dense() const {
  const auto n = static_cast<Eigen::Index>(n_);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const auto& pm : pairs_) {
    a(static_cast<Eigen::Index>(pm.i), static_cast<Eigen::Index>(pm.j)) = pm.mean;
    a(static_cast<Eigen::Index>(pm.j), static_cast<Eigen::Index>(pm.i)) = pm.mean;
  }
  return a;
}

Eigen::MatrixXd StationaryStats::variance_dense() const {
  const auto n = static_cast<Eigen::Index>(n_);
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, n);
  for (const auto& pm : pairs_) {
    v(static_cast<Eigen::Index>(pm.i), static_cast<Eigen::Index>(pm.j)) = pm.variance;
    v(static_cast<Eigen::Index>(pm.j), static_cast<Eigen::Index>(pm.i)) = pm.variance;
  }
  return v;
}

void StationaryStats::apply_abar(std::span<const double> x, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  for (const auto& pm : pairs_) {
    out[pm.i] += pm.mean * x[pm.j];
    out[pm.j] += pm.mean * x[pm.i];
  }
}

StationaryStats stationary_stats(const SwitchedNetworkSpec& spec) {
  std::vector<PairMoment> pairs;
  pairs.reserve(spec.edge_count());
  if (spec.kind() == EdgeKind::Binary) {
    for (const auto& e : spec.binary_edges()) {
      const double a = stationary_edge_prob(e);
      pairs.push_back({std::min(e.i, e.j), std::max(e.i, e.j), a, a * (1.0 - a)});
    }
  } else {
    for (const auto& p : spec.processes()) {
      std::vector<double> pi;
      try {
        pi = stationary_distribution(p.generator);
      } catch (const Error& err) {
        fail(err.kind(), "edge " + edge_label(p.i, p.j) + ": " + err.what());
      }
      double mean = 0.0;
      for (std::size_t s = 0; s < pi.size(); ++s)
        mean += pi[s] * p.values[s];
      double var = 0.0;
      for (std::size_t s = 0; s < pi.size(); ++s)
        var += pi[s] * (p.values[s] - mean) * (p.values[s] - mean);
      pairs.push_back({p.i, p.j, mean, var});
    }
  }
  return StationaryStats(spec.vertex_count(), std::move(pairs), spec.kind());
}

}  // namespace epinet
