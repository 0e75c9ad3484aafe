#include "epinet/error.hpp"
#include "epinet/exact_analysis.hpp"
#include "epinet/stability.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

using namespace epinet;

namespace {

SwitchedNetworkSpec single_edge(double p = 1.0, double q = 1.0) { return SwitchedNetworkSpec::binary(2, {{0, 1, p, q}}); }

SwitchedNetworkSpec random_binary(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> rate(0.1, 4.0);
  std::vector<EdgeChain> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      edges.push_back({i, j, rate(rng), rate(rng)});
  return SwitchedNetworkSpec::binary(n, edges);
}

}  // namespace

TEST_SUITE("exact-analysis") {

TEST_CASE("joint chain of one edge") {
  const auto joint = build_joint_chain(single_edge());
  REQUIRE(joint.configuration_count() == 2);
  Eigen::Matrix2d expected;
  expected << -1, 1, 1, -1;
  CHECK((joint.generator - expected).norm() == 0.0);
  CHECK(joint.stationary[0] == doctest::Approx(0.5));
  CHECK(joint.stationary[1] == doctest::Approx(0.5));
  CHECK(joint.adjacency[0].norm() == 0.0);
  CHECK(joint.adjacency[1](0, 1) == 1.0);
}

TEST_CASE("joint law of independent edges factorizes") {
  const auto spec = SwitchedNetworkSpec::binary(3, {{0, 1, 1.0, 1.0}, {1, 2, 2.0, 1.0}});
  const auto joint = build_joint_chain(spec);
  // First edge is the most significant digit.
  const double a[2] = {0.5, 0.5}, b[2] = {1.0 / 3.0, 2.0 / 3.0};
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      CHECK(joint.stationary[2 * x + y] == doctest::Approx(a[x] * b[y]).epsilon(1e-15));
  CHECK(joint.adjacency[1](1, 2) == 1.0);
  CHECK(joint.adjacency[1](0, 1) == 0.0);
  CHECK(joint.adjacency[2](0, 1) == 1.0);
}

TEST_CASE("null-space solve agrees with the product law") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const auto joint = build_joint_chain(random_binary(rng, 3));
    for (std::size_t k = 0; k < joint.configuration_count(); ++k)
      CHECK(std::abs(joint.stationary[k] - joint.stationary_solved[k]) < 1e-12);
    CHECK(joint.stationary_residual < 1e-12);
  }
}

TEST_CASE("joint chain refuses large instances") {
  std::mt19937_64 rng(1);
  const auto spec = random_binary(rng, 6);  // 15 edges, 32768 configurations
  try {
    (void)build_joint_chain(spec);
    FAIL("expected refusal");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Capacity);
    CHECK(std::string(e.what()).find("2^") != std::string::npos);
  }
  const auto fits = build_joint_chain(random_binary(rng, 5));  // 10 edges
  CHECK(fits.configuration_count() == 1024);
}

TEST_CASE("single-edge mean abscissa") {
  const auto joint = build_joint_chain(single_edge());
  const double eta = exact_mean_abscissa(joint, {1.0, 1.0});
  CHECK(eta == doctest::Approx(testing::golden()["eta_single_edge"].get<double>()).epsilon(1e-12));

  // Symmetric/antisymmetric block reduction for general β.
  for (double beta : {0.3, 1.0, 2.5, 7.0}) {
    const double expected = ((beta - 2.0) + std::sqrt(beta * beta + 4.0)) / 2.0;
    CHECK(exact_mean_abscissa(joint, {beta, 1.0}) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("demo network against the independent oracle") {
  const auto& g = testing::golden()["demo3"];
  const auto spec = SwitchedNetworkSpec::binary(3, {{0, 1, 1.0, 1.0}, {1, 2, 2.0, 0.5}, {0, 2, 0.5, 1.5}});
  const auto joint = build_joint_chain(spec);
  CHECK(joint.configuration_count() == g["configurations"].get<std::size_t>());
  CHECK(exact_mean_abscissa(joint, {1.0, 5.0}) == doctest::Approx(g["lhs_exact"].get<double>()).epsilon(1e-12));
  CHECK(check_expected_spectrum(joint, {1.0, 5.0}).e_lambda_max ==
        doctest::Approx(g["e_lambda_max"].get<double>()).epsilon(1e-12));
}

TEST_CASE("vanishing infection rate leaves the generator spectrum") {
  std::mt19937_64 rng(8);
  const auto joint = build_joint_chain(random_binary(rng, 3));
  CHECK(std::abs(exact_mean_abscissa(joint, {1e-300, 1.0})) < 1e-12);
}

TEST_CASE("frozen chain recovers the static threshold") {
  // Single-state chains: Π = 0 and the only configuration is the path 1-3-2.
  auto fixed = [](std::size_t i, std::size_t j) {
    return WeightedEdgeChain{i, j, {1.0}, Eigen::MatrixXd::Zero(1, 1)};
  };
  const auto joint = build_joint_chain(SwitchedNetworkSpec::weighted(3, {fixed(0, 2), fixed(1, 2)}));
  REQUIRE(joint.configuration_count() == 1);
  CHECK(joint.generator.norm() == 0.0);
  for (double beta : {0.5, 2.0})
    CHECK(exact_mean_abscissa(joint, {beta, 1.0}) == doctest::Approx(beta * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("relation between the two mode conventions") {
  std::mt19937_64 rng(12);
  const auto joint = build_joint_chain(random_binary(rng, 3));
  const double beta = 1.7, delta = 2.2;
  std::vector<Eigen::MatrixXd> modes;
  for (const auto& a : joint.adjacency)
    modes.push_back(beta * a - delta * Eigen::MatrixXd::Identity(3, 3));
  const auto v = check_jump_mean_stability(modes, joint.generator);
  const double eta_beta = exact_mean_abscissa(joint, {beta, delta});
  CHECK(v.value == doctest::Approx(eta_beta - delta).epsilon(1e-10));
  CHECK(v.stable == (eta_beta < delta));
}

TEST_CASE("generic jump-system mean stability") {
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(1, 1);
  const auto s = check_jump_mean_stability({-Eigen::MatrixXd::Identity(2, 2)}, zero);
  CHECK(s.stable);
  CHECK(s.value == doctest::Approx(-1.0));
  CHECK_FALSE(check_jump_mean_stability({Eigen::MatrixXd::Identity(1, 1)}, zero).stable);

  Eigen::MatrixXd bad(2, 2);
  bad << -1, -0.5, 0, -1;
  CHECK_THROWS_AS(check_jump_mean_stability({bad}, zero), Error);
  CHECK_THROWS_AS(check_jump_mean_stability({zero, zero}, zero), Error);
}

TEST_CASE("almost-sure test via the expected matrix measure") {
  const auto joint = build_joint_chain(single_edge());
  for (double delta : {0.3, 0.49, 0.51, 2.0}) {
    const auto v = check_jump_as_stability(joint, {1.0, delta});
    CHECK(v.value == doctest::Approx(0.5 - delta).epsilon(1e-12));
    CHECK(v.stable == (delta > 0.5));
  }
  const auto frozen = build_joint_chain(SwitchedNetworkSpec::binary(2, {{0, 1, 1.0, 0.0}}));
  CHECK(check_jump_as_stability(frozen, {2.0, 3.0}).value == doctest::Approx(2.0 - 3.0));
}

TEST_CASE("almost-sure and expected-spectrum verdicts coincide") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> d(0.2, 4.0);
  for (int trial = 0; trial < 30; ++trial) {
    const auto joint = build_joint_chain(random_binary(rng, 2 + trial % 3));
    const EpidemicParams params{1.0, d(rng)};
    CHECK(check_jump_as_stability(joint, params).stable == check_expected_spectrum(joint, params).stable);
  }
}

TEST_CASE("edge order does not change the abscissa") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 10; ++trial) {
    const auto spec = random_binary(rng, 3);
    auto edges = spec.binary_edges();
    std::shuffle(edges.begin(), edges.end(), rng);
    const auto shuffled = SwitchedNetworkSpec::binary(3, edges);
    const double a = exact_mean_abscissa(build_joint_chain(spec), {1.3, 1.0});
    const double b = exact_mean_abscissa(build_joint_chain(shuffled), {1.3, 1.0});
    CHECK(b == doctest::Approx(a).epsilon(1e-10));
  }
}

TEST_CASE("weighted chains enumerate every state") {
  WeightedEdgeChain w{0, 1, {0.0, 0.3, 0.9}, Eigen::MatrixXd(3, 3)};
  w.generator << -1, 1, 0, 0.5, -1.5, 1, 0, 2, -2;
  const auto joint = build_joint_chain(SwitchedNetworkSpec::weighted(2, {w}));
  REQUIRE(joint.configuration_count() == 3);
  CHECK(joint.adjacency[2](0, 1) == doctest::Approx(0.9));
  double total = 0.0;
  for (double p : joint.stationary)
    total += p;
  CHECK(total == doctest::Approx(1.0));
}

TEST_CASE("mean dynamics dimension cap and MatrixMarket output") {
  const auto joint = build_joint_chain(single_edge());
  CHECK_THROWS_AS(assemble_mean_dynamics(joint, 1.0, {3}), Error);
  const Eigen::MatrixXd a = assemble_mean_dynamics(joint, 1.0);
  std::ostringstream os;
  write_matrix_market(os, a);
  const std::string text = os.str();
  CHECK(text.rfind("%%MatrixMarket matrix coordinate real general", 0) == 0);
  CHECK(text.find("\n4 4 10\n") != std::string::npos);
  CHECK(text.find("\n4 3 1\n") != std::string::npos);
}

}  // TEST_SUITE
