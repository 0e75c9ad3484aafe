#include "epinet/error.hpp"
#include "epinet/net_model.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

using namespace epinet;

namespace {

SwitchedNetworkSpec triangle(double p, double q) {
  return SwitchedNetworkSpec::binary(3, {{0, 1, p, q}, {1, 2, p, q}, {0, 2, p, q}});
}

WeightedEdgeChain two_point(std::size_t i, std::size_t j, double hi, double rate) {
  WeightedEdgeChain w{i, j, {0.0, hi}, Eigen::MatrixXd(2, 2)};
  w.generator << -rate, rate, rate, -rate;
  return w;
}

SwitchedNetworkSpec random_binary(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> rate(0.1, 4.0);
  std::bernoulli_distribution keep(0.7);
  std::vector<EdgeChain> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (keep(rng))
        edges.push_back({i, j, rate(rng), rate(rng)});
  return SwitchedNetworkSpec::binary(n, edges);
}

}  // namespace

TEST_SUITE("net-model") {

TEST_CASE("stationary edge probability") {
  CHECK(stationary_edge_prob({0, 1, 1.0, 1.0}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(stationary_edge_prob({0, 1, 2.0, 1.0}) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(stationary_edge_prob({0, 1, 0.0, 3.0}) == 0.0);
  CHECK_THROWS_AS(stationary_edge_prob({0, 1, 0.0, 0.0}), Error);
}

TEST_CASE("complete triangle with symmetric rates") {
  const auto stats = stationary_stats(triangle(1.0, 1.0));
  const Eigen::MatrixXd abar = stats.abar_dense();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(abar(i, j) == doctest::Approx(i == j ? 0.0 : 0.5));
  CHECK(stats.delta_uncertainty() == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("two-point weighted edge") {
  const auto spec = SwitchedNetworkSpec::weighted(2, {two_point(0, 1, 0.4, 1.3)});
  const auto stats = stationary_stats(spec);
  CHECK(stats.abar_dense()(0, 1) == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(stats.variance_dense()(0, 1) == doctest::Approx(0.04).epsilon(1e-13));
  CHECK(stats.delta_uncertainty() == doctest::Approx(0.04).epsilon(1e-13));

  // Independent check: explicit stationary law of the symmetric chain is (1/2, 1/2).
  const auto pi = stationary_distribution(spec.processes()[0].generator);
  CHECK(pi[0] == doctest::Approx(0.5));
  CHECK(0.5 * 0.04 + 0.5 * 0.04 == doctest::Approx(stats.variance_dense()(0, 1)));
}

TEST_CASE("never-present edge contributes nothing") {
  const auto spec = SwitchedNetworkSpec::binary(3, {{0, 1, 0.0, 3.0}, {1, 2, 1.0, 1.0}});
  const auto stats = stationary_stats(spec);
  CHECK(stats.abar_dense()(0, 1) == 0.0);
  CHECK(stats.variance_row_sums()[0] == 0.0);
  CHECK(stats.variance_row_sums()[1] == doctest::Approx(0.25));
  CHECK(stats.delta_uncertainty() == doctest::Approx(0.25));
}

TEST_CASE("uniqueness failures name the edge") {
  try {
    (void)SwitchedNetworkSpec::binary(3, {{0, 1, 1.0, 1.0}, {1, 2, 0.0, 0.0}});
    FAIL("expected rejection");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("(2,3)") != std::string::npos);
  }
  WeightedEdgeChain reducible{0, 1, {0.0, 0.5, 1.0}, Eigen::MatrixXd::Zero(3, 3)};
  reducible.generator(1, 0) = 1.0;
  reducible.generator(1, 1) = -1.0;
  try {
    (void)stationary_stats(SwitchedNetworkSpec::weighted(2, {reducible}));
    FAIL("expected rejection");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("(1,2)") != std::string::npos);
  }
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(SwitchedNetworkSpec::binary(2, {{0, 0, 1.0, 1.0}}), Error);
  CHECK_THROWS_AS(SwitchedNetworkSpec::binary(2, {{0, 2, 1.0, 1.0}}), Error);
  CHECK_THROWS_AS(SwitchedNetworkSpec::binary(2, {{0, 1, 1.0, 1.0}, {1, 0, 1.0, 1.0}}), Error);
  CHECK_THROWS_AS(SwitchedNetworkSpec::binary(2, {{0, 1, -1.0, 1.0}}), Error);
  CHECK_THROWS_AS(SwitchedNetworkSpec::weighted(2, {two_point(0, 1, 1.5, 1.0)}), Error);
  CHECK_THROWS_AS(SwitchedNetworkSpec::binary(0, {}), Error);
  CHECK_THROWS_AS(make_params(1.0, 0.0), Error);
  CHECK_THROWS_AS(make_params(0.0, 1.0), Error);
  CHECK_THROWS_AS(make_params(1.0, std::nan("")), Error);
  CHECK(make_params(2.0, 5.0).threshold() == doctest::Approx(2.5));
}

TEST_CASE("configuration count") {
  CHECK(triangle(1, 1).configuration_count() == 8);
  std::vector<EdgeChain> many;
  for (std::size_t i = 0; i < 80; ++i)
    many.push_back({i, i + 1, 1.0, 1.0});
  CHECK(SwitchedNetworkSpec::binary(81, many).configuration_count() == SIZE_MAX);
}

TEST_CASE("relabeling permutes abar and keeps the uncertainty") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 3 + trial % 5;
    const auto spec = random_binary(rng, n);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const auto a = stationary_stats(spec);
    const auto b = stationary_stats(spec.relabeled(perm));
    CHECK(b.delta_uncertainty() == doctest::Approx(a.delta_uncertainty()).epsilon(1e-14));
    const Eigen::MatrixXd da = a.abar_dense(), db = b.abar_dense();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        CHECK(db(perm[i], perm[j]) == da(i, j));
  }
}

TEST_CASE("binary chain encoded as weighted {0,1} chain agrees") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const auto spec = random_binary(rng, 5);
    std::vector<WeightedEdgeChain> w;
    for (const auto& e : spec.binary_edges()) {
      WeightedEdgeChain c{e.i, e.j, {0.0, 1.0}, Eigen::MatrixXd(2, 2)};
      c.generator << -e.p_rate, e.p_rate, e.q_rate, -e.q_rate;
      w.push_back(c);
    }
    const auto sb = stationary_stats(spec);
    const auto sw = stationary_stats(SwitchedNetworkSpec::weighted(5, w));
    CHECK((sb.abar_dense() - sw.abar_dense()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((sb.variance_dense() - sw.variance_dense()).cwiseAbs().maxCoeff() < 1e-14);
    const Eigen::MatrixXd bern = sb.abar_dense().cwiseProduct((1.0 - sb.abar_dense().array()).matrix());
    Eigen::MatrixXd bern_offdiag = bern;
    bern_offdiag.diagonal().setZero();
    CHECK((sb.variance_dense() - bern_offdiag).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("zero uncertainty exactly when the graph is static") {
  // p = 0 pins the edge absent, q = 0 pins it present.
  const auto frozen = SwitchedNetworkSpec::binary(3, {{0, 1, 0.0, 2.0}, {1, 2, 1.5, 0.0}});
  const auto fs = stationary_stats(frozen);
  CHECK(fs.delta_uncertainty() == 0.0);
  CHECK(fs.abar_dense()(1, 2) == 1.0);

  const auto live = SwitchedNetworkSpec::binary(3, {{0, 1, 0.0, 2.0}, {1, 2, 1.5, 1e-9}});
  CHECK(stationary_stats(live).delta_uncertainty() > 0.0);
}

TEST_CASE("apply_abar matches the dense product") {
  std::mt19937_64 rng(3);
  const auto stats = stationary_stats(random_binary(rng, 9));
  Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(9, -1.0, 2.0);
  Eigen::VectorXd y(9);
  stats.apply_abar({x.data(), 9}, {y.data(), 9});
  CHECK((y - stats.abar_dense() * x).norm() < 1e-14);
}

TEST_CASE("edge labels are 1-based") { CHECK(edge_label(0, 4) == "(1,5)"); }

}  // TEST_SUITE
