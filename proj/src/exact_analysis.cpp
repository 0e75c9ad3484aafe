#include "epinet/exact_analysis.hpp"

#include "epinet/error.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace epinet {

namespace {

Eigen::MatrixXd jump_system_matrix(const std::vector<Eigen::MatrixXd>& modes, const Eigen::MatrixXd& generator,
                                   std::size_t cap) {
  const auto big_n = static_cast<Eigen::Index>(modes.size());
  if (big_n == 0)
    fail(ErrorKind::InvalidArgument, "jump system needs at least one mode");
  const Eigen::Index n = modes.front().rows();
  if (generator.rows() != big_n || generator.cols() != big_n)
    fail(ErrorKind::InvalidArgument, "generator size does not match the number of modes");
  if (static_cast<std::size_t>(n * big_n) > cap)
    fail(ErrorKind::Capacity, "jump-system matrix dimension " + std::to_string(n * big_n) + " exceeds the cap " +
                                  std::to_string(cap));

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n * big_n, n * big_n);
  for (Eigen::Index k = 0; k < big_n; ++k) {
    if (modes[static_cast<std::size_t>(k)].rows() != n || modes[static_cast<std::size_t>(k)].cols() != n)
      fail(ErrorKind::InvalidArgument, "all modes must be square with the same dimension");
    a.block(k * n, k * n, n, n) = modes[static_cast<std::size_t>(k)];
    // Block (k, l) of Π^T ⊗ I is Π(l, k) I.
    for (Eigen::Index l = 0; l < big_n; ++l) {
      const double rate = generator(l, k);
      if (rate != 0.0)
        a.block(k * n, l * n, n, n).diagonal().array() += rate;
    }
  }
  return a;
}

}  // namespace

JointChain build_joint_chain(const SwitchedNetworkSpec& spec, const JointChainOptions& opts) {
  const std::size_t big_n = spec.configuration_count();
  if (big_n > opts.max_configurations) {
    std::ostringstream os;
    os << "joint chain has " << (big_n == SIZE_MAX ? std::string("more than 2^64") : std::to_string(big_n))
       << " configurations, above the cap of " << opts.max_configurations
       << "; the configuration space grows like 2^{n(n-1)/2}, use the spectral sufficient conditions instead";
    fail(ErrorKind::Capacity, os.str());
  }

  const auto& procs = spec.processes();
  const std::size_t m = procs.size();
  const std::size_t n = spec.vertex_count();

  std::vector<std::size_t> stride(m, 1);
  for (std::size_t e = m; e-- > 1;)
    stride[e - 1] = stride[e] * procs[e].state_count();

  std::vector<std::vector<double>> edge_pi(m);
  for (std::size_t e = 0; e < m; ++e) {
    try {
      edge_pi[e] = stationary_distribution(procs[e].generator);
    } catch (const Error& err) {
      fail(err.kind(), "edge " + edge_label(procs[e].i, procs[e].j) + ": " + err.what());
    }
  }

  JointChain jc;
  jc.n = n;
  jc.m = m;
  const auto nn = static_cast<Eigen::Index>(big_n);
  jc.generator = Eigen::MatrixXd::Zero(nn, nn);
  jc.adjacency.reserve(big_n);
  jc.stationary.assign(big_n, 1.0);

  std::vector<std::size_t> digit(m);
  for (std::size_t k = 0; k < big_n; ++k) {
    std::size_t rest = k;
    for (std::size_t e = 0; e < m; ++e) {
      digit[e] = rest / stride[e];
      rest %= stride[e];
    }
    Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t e = 0; e < m; ++e) {
      const auto& p = procs[e];
      const std::size_t s = digit[e];
      const double w = p.values[s];
      adj(static_cast<Eigen::Index>(p.i), static_cast<Eigen::Index>(p.j)) = w;
      adj(static_cast<Eigen::Index>(p.j), static_cast<Eigen::Index>(p.i)) = w;
      jc.stationary[k] *= edge_pi[e][s];
      for (std::size_t t = 0; t < p.state_count(); ++t) {
        if (t == s)
          continue;
        const double rate = p.generator(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(t));
        if (rate == 0.0)
          continue;
        const std::size_t target = k - s * stride[e] + t * stride[e];
        jc.generator(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(target)) += rate;
        jc.generator(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) -= rate;
      }
    }
    jc.adjacency.push_back(std::move(adj));
  }

  Eigen::MatrixXd system = jc.generator.transpose();
  system.row(nn - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nn);
  rhs(nn - 1) = 1.0;
  const Eigen::VectorXd solved = system.partialPivLu().solve(rhs);
  jc.stationary_solved.assign(solved.data(), solved.data() + nn);

  Eigen::Map<const Eigen::RowVectorXd> pi(jc.stationary.data(), nn);
  jc.stationary_residual = (pi * jc.generator).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, jc.generator.cwiseAbs().maxCoeff());
  double gap = 0.0;
  for (std::size_t k = 0; k < big_n; ++k)
    gap = std::max(gap, std::abs(jc.stationary[k] - jc.stationary_solved[k]));
  if (jc.stationary_residual > 1e-12 * scale || gap > 1e-10) {
    std::ostringstream os;
    os << "joint stationary law failed its cross-check (residual " << jc.stationary_residual << ", product vs solve gap "
       << gap << ")";
    fail(ErrorKind::Numerical, os.str());
  }
  return jc;
}

Eigen::MatrixXd assemble_mean_dynamics(const JointChain& joint, double beta, const ExactOptions& opts) {
  std::vector<Eigen::MatrixXd> modes;
  modes.reserve(joint.adjacency.size());
  for (const auto& a : joint.adjacency)
    modes.push_back(beta * a);
  return jump_system_matrix(modes, joint.generator, opts.max_dimension);
}

double exact_mean_abscissa(const JointChain& joint, const EpidemicParams& params, const ExactOptions& opts) {
  const Eigen::MatrixXd a = assemble_mean_dynamics(joint, params.beta, opts);
  return spectral_abscissa(a, {opts.max_dimension});
}

JumpSystemVerdict check_jump_mean_stability(const std::vector<Eigen::MatrixXd>& modes, const Eigen::MatrixXd& generator,
                              const ExactOptions& opts) {
  for (std::size_t k = 0; k < modes.size(); ++k) {
    if (!is_metzler(modes[k]))
      fail(ErrorKind::InvalidArgument,
           "mode " + std::to_string(k) + " is not Metzler; the positive-system criterion does not apply");
  }
  const Eigen::MatrixXd a = jump_system_matrix(modes, generator, opts.max_dimension);
  const double eta = spectral_abscissa(a, {opts.max_dimension});
  return {eta, eta < 0.0};
}

JumpSystemVerdict check_jump_as_stability(const JointChain& joint, const EpidemicParams& params) {
  double expected = 0.0;
  for (std::size_t k = 0; k < joint.adjacency.size(); ++k) {
    const double lam = joint.adjacency[k].rows() ? lambda_max_dense(joint.adjacency[k]) : 0.0;
    expected += joint.stationary[k] * (params.beta * lam - params.delta);
  }
  return {expected, expected < 0.0};
}

void write_matrix_market(std::ostream& os, const Eigen::MatrixXd& m) {
  std::size_t nnz = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      nnz += m(r, c) != 0.0;
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << m.rows() << ' ' << m.cols() << ' ' << nnz << '\n';
  const auto old = os.precision(17);
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      if (m(r, c) != 0.0)
        os << r + 1 << ' ' << c + 1 << ' ' << m(r, c) << '\n';
  os.precision(old);
}

}  // namespace epinet
