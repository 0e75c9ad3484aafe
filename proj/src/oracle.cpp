#include "epinet/oracle.hpp"

#include "epinet/error.hpp"
#include "epinet/simulator.hpp"
#include "epinet/stability.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

namespace epinet {

double enumerate_expectation(const JointChain& joint, const std::function<double(const Eigen::MatrixXd&)>& g) {
  double total = 0.0;
  for (std::size_t k = 0; k < joint.configuration_count(); ++k)
    total += joint.stationary[k] * g(joint.adjacency[k]);
  return total;
}

EnumeratedMoments enumerate_moments(const JointChain& joint) {
  const auto n = static_cast<Eigen::Index>(joint.n);
  EnumeratedMoments mo;
  mo.abar = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd second = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k < joint.configuration_count(); ++k) {
    mo.abar += joint.stationary[k] * joint.adjacency[k];
    second += joint.stationary[k] * joint.adjacency[k].cwiseProduct(joint.adjacency[k]);
  }
  mo.variance = (second - mo.abar.cwiseProduct(mo.abar)).cwiseMax(0.0);
  mo.delta_uncertainty = n ? mo.variance.rowwise().sum().maxCoeff() : 0.0;
  return mo;
}

std::vector<TailCheck> check_chung_radcliffe(const JointChain& joint, std::span<const double> s_grid) {
  const auto mo = enumerate_moments(joint);
  const double lam_bar = lambda_max_dense(mo.abar);
  std::vector<double> lam(joint.configuration_count());
  for (std::size_t k = 0; k < lam.size(); ++k)
    lam[k] = lambda_max_dense(joint.adjacency[k]);

  const double tie = 1e-12 * std::max(1.0, std::abs(lam_bar));
  const auto n = static_cast<double>(joint.n);
  std::vector<TailCheck> out;
  out.reserve(s_grid.size());
  for (double s : s_grid) {
    TailCheck tc;
    tc.s = s;
    for (std::size_t k = 0; k < lam.size(); ++k)
      if (lam[k] > lam_bar + s + tie)
        tc.exact_tail += joint.stationary[k];
    const double denom = 2.0 * s + 6.0 * mo.delta_uncertainty;
    tc.bound = denom > 0.0 ? 2.0 * n * std::exp(-3.0 * s * s / denom) : 2.0 * n;
    tc.ok = tc.exact_tail <= tc.bound;
    out.push_back(tc);
  }
  return out;
}

OracleReport check_instance(const SwitchedNetworkSpec& spec, const std::string& descriptor, std::size_t grid_points) {
  OracleReport rep;
  rep.descriptor = descriptor;
  rep.n = spec.vertex_count();
  rep.m = spec.edge_count();

  const JointChain joint = build_joint_chain(spec);
  const auto mo = enumerate_moments(joint);
  rep.lambda_max_abar = lambda_max_dense(mo.abar);
  rep.delta_uncertainty = mo.delta_uncertainty;
  rep.e_lambda_max = enumerate_expectation(joint, [](const Eigen::MatrixXd& a) { return lambda_max_dense(a); });
  rep.f_min = mo.delta_uncertainty > 0.0 ? minimize_f(rep.n, mo.delta_uncertainty).f_min : 0.0;
  rep.upper_bound = rep.lambda_max_abar + rep.f_min;
  rep.exact_abscissa = exact_mean_abscissa(joint, {1.0, 1.0});

  const double tol = 1e-8 * std::max(1.0, std::abs(rep.upper_bound));
  const bool lower_ok = rep.lambda_max_abar - tol <= rep.e_lambda_max;
  const bool upper_ok = rep.e_lambda_max <= rep.upper_bound + tol;
  rep.sandwich_ok = lower_ok && upper_ok;
  if (!lower_ok)
    rep.details.push_back("lower sandwich violated: E[lambda_max] below lambda_max(Abar)");
  if (!upper_ok)
    rep.details.push_back("upper sandwich violated: E[lambda_max] above lambda_max(Abar) + min f");

  std::vector<double> grid(grid_points);
  for (std::size_t k = 0; k < grid_points; ++k)
    grid[k] = grid_points > 1 ? static_cast<double>(rep.n) * static_cast<double>(k) / static_cast<double>(grid_points - 1)
                              : 0.0;
  rep.tails = check_chung_radcliffe(joint, grid);
  for (const auto& tc : rep.tails) {
    if (!tc.ok) {
      ++rep.tail_violations;
      std::ostringstream os;
      os << "tail bound violated at s = " << tc.s << ": exact " << tc.exact_tail << " > bound " << tc.bound;
      rep.details.push_back(os.str());
    }
  }
  return rep;
}

SwitchedNetworkSpec random_small_spec(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick_n(2, 4);
  std::uniform_real_distribution<double> rate(0.1, 5.0);
  std::bernoulli_distribution keep(0.75);
  const std::size_t n = pick_n(rng);
  std::vector<EdgeChain> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (keep(rng)) {
        const double p = rate(rng);
        const double q = rate(rng);
        edges.push_back({i, j, p, q});
      }
  if (edges.empty()) {
    const double p = rate(rng);
    const double q = rate(rng);
    edges.push_back({0, 1, p, q});
  }
  return SwitchedNetworkSpec::binary(n, std::move(edges));
}

std::vector<OracleReport> run_sandwich_suite(std::size_t count, std::uint64_t seed) {
  require(count >= 1, "sandwich suite needs count >= 1");
  std::vector<OracleReport> reports(count);
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr failure;
  const auto worker = [&] {
    for (std::size_t k = next++; k < count; k = next++) {
      try {
        const std::uint64_t s = trial_seed(seed, k);
        reports[k] = check_instance(random_small_spec(s), "random#" + std::to_string(k) + " seed=" + std::to_string(s));
      } catch (...) {
        std::lock_guard lock(err_mutex);
        if (!failure)
          failure = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::min(worker_count(), count);
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w)
    pool.emplace_back(worker);
  worker();
  for (auto& t : pool)
    t.join();
  if (failure)
    std::rethrow_exception(failure);
  return reports;
}

}  // namespace epinet
