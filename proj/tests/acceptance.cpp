// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "epinet/analysis.hpp"
#include "epinet/exact_analysis.hpp"
#include "epinet/oracle.hpp"
#include "epinet/simulator.hpp"
#include "epinet/stability.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace epinet;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome example_criterion(const std::string& name, double budget) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto rep = run_example(name);
  const double secs = seconds_since(t0);
  std::ostringstream os;
  bool pass = secs < budget;
  for (const auto& q : rep.quantities) {
    os << q.name << " " << q.computed << " vs " << q.reference << " (" << 100.0 * q.deviation() << "% <= "
       << 100.0 * q.tolerance << "%); ";
    pass = pass && q.ok();
  }
  os << secs << " s (budget " << budget << " s)";
  return {pass, os.str()};
}

Outcome single_edge_abscissa() {
  const auto joint = build_joint_chain(SwitchedNetworkSpec::binary(2, {{0, 1, 1.0, 1.0}}));
  const double eta = exact_mean_abscissa(joint, {1.0, 1.0});
  const double want = (std::sqrt(5.0) - 1.0) / 2.0;
  std::ostringstream os;
  os.precision(17);
  os << "eta = " << eta << ", expected " << want << ", |diff| = " << std::abs(eta - want);
  return {std::abs(eta - want) <= 1e-9, os.str()};
}

Outcome sandwich_suite() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto reports = run_sandwich_suite(100, 42);
  const double secs = seconds_since(t0);
  std::size_t sandwich = 0, tails = 0, points = 0;
  for (const auto& r : reports) {
    sandwich += r.sandwich_ok ? 0 : 1;
    tails += r.tail_violations;
    points += r.tails.size();
  }
  std::ostringstream os;
  os << reports.size() << " instances, " << sandwich << " sandwich violations, " << tails << " tail violations over "
     << points << " grid points, " << secs << " s";
  return {reports.size() == 100 && points == 2000 && sandwich == 0 && tails == 0 && secs < 60.0, os.str()};
}

SwitchedNetworkSpec random_switching(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> rate(0.1, 8.0);
  std::bernoulli_distribution keep(0.7);
  std::vector<EdgeChain> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (keep(rng))
        edges.push_back({i, j, rate(rng), rate(rng)});
  if (edges.empty())
    edges.push_back({0, 1, 1.0, 1.0});
  return SwitchedNetworkSpec::binary(n, edges);
}

Outcome coupled_domination() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0), logb(-1.0, 1.0), delta(0.1, 4.0);
  std::uniform_int_distribution<std::size_t> size(2, 10);
  double worst = std::numeric_limits<double>::infinity();
  std::size_t samples = 0;
  for (int run = 0; run < 100; ++run) {
    const auto spec = random_switching(rng, size(rng));
    std::vector<double> p0(spec.vertex_count());
    for (auto& v : p0)
      v = run % 4 == 0 ? 1.0 : u(rng);
    SimConfig cfg;
    cfg.horizon = 5.0;
    cfg.step = 0.01;
    cfg.seed = 500 + run;
    const auto r = simulate_coupled(spec, {std::pow(10.0, logb(rng)), delta(rng)}, p0, cfg);
    worst = std::min(worst, r.min_margin);
    samples += r.nonlinear.times.size();
  }
  std::ostringstream os;
  os << "100 coupled runs, " << samples << " sample times, min margin " << worst;
  return {worst >= -1e-7, os.str()};
}

Outcome decay_consistency() {
  std::size_t negative = 0;
  std::ostringstream os;
  for (std::uint64_t k = 0; k < 20; ++k) {
    const auto spec = random_small_spec(9000 + k);
    const double eta = exact_mean_abscissa(build_joint_chain(spec), {1.0, 1.0});
    const double delta = std::max(eta, 0.0) + 0.5;  // η ≤ δ − 0.5
    SimConfig cfg;
    cfg.horizon = 20.0 / delta;
    cfg.step = 0.01;
    cfg.trials = 200;
    cfg.seed = k;
    const auto est = estimate_decay(spec, make_params(1.0, delta), cfg);
    if (est.rate < 0.0)
      ++negative;
  }
  os << negative << "/20 instances with a negative fitted rate";
  return {negative >= 19, os.str()};
}

double grid_min(std::size_t n, double du, std::size_t points) {
  const double hi = 50.0 * (du + std::log(2.0 * double(n) * double(n)) + 1.0);
  const double lo = 1e-8 * std::min(1.0, du);
  double best = f_eval(0.0, n, du);
  const double step = std::log(hi / lo) / double(points - 1);
  for (std::size_t k = 0; k < points; ++k)
    best = std::min(best, f_eval(lo * std::exp(step * double(k)), n, du));
  return best;
}

Outcome convex_program() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> logn(1.0, 7.0), logd(-2.0, 5.0);
  double worst_rel = 0.0, worst_curv = 0.0;
  for (int k = 0; k < 50; ++k) {
    const auto n = static_cast<std::size_t>(std::llround(std::pow(10.0, logn(rng))));
    const double du = std::pow(10.0, logd(rng));
    const auto ub = minimize_f(n, du);
    worst_rel = std::max(worst_rel, std::abs(ub.f_min - grid_min(n, du, 1'000'000)) / ub.f_min);

    const double span = 20.0 * (ub.s_star + du) + 10.0 * ub.s0;
    const double h = 1e-4 * span;
    for (int j = 0; j < 2000; ++j) {
      const double s = ub.s0 + h + span * j / 2000.0;
      const double fs = f_eval(s, n, du);
      const double d2 = f_eval(s + h, n, du) - 2.0 * fs + f_eval(s - h, n, du);
      worst_curv = std::min(worst_curv, d2 / fs);
    }
  }
  std::ostringstream os;
  os << "50 (n, Delta) pairs: max relative gap to the grid " << worst_rel << ", min second difference / f "
     << worst_curv;
  return {worst_rel <= 1e-3 && worst_curv >= -1e-8, os.str()};
}

Outcome model_invariants() {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0), beta(0.5, 30.0), delta(0.1, 10.0);
  double lo = 0.0, hi = 0.0;
  bool identical = true;
  for (int k = 0; k < 40; ++k) {
    const auto spec = random_switching(rng, 2 + k % 7);
    std::vector<double> p0(spec.vertex_count());
    for (auto& v : p0)
      v = k % 3 == 0 ? 1.0 : u(rng);
    SimConfig cfg;
    cfg.horizon = 4.0;
    cfg.step = k % 2 ? 0.25 : 0.01;
    cfg.seed = 700 + k;
    const EpidemicParams params{beta(rng), delta(rng)};
    const auto a = simulate_path(spec, params, p0, cfg);
    const auto b = simulate_path(spec, params, p0, cfg);
    identical = identical && trajectory_csv(a) == trajectory_csv(b) && events_csv(a, spec) == events_csv(b, spec);
    for (const auto& p : a.p)
      for (double v : p) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
  }

  // Step halving on a frozen complete graph, sampled only at the horizon.
  std::vector<EdgeChain> edges;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j)
      edges.push_back({i, j, 1.0, 0.0});
  const auto k4 = SwitchedNetworkSpec::binary(4, edges);
  auto endpoint = [&](double h) {
    SimConfig cfg;
    cfg.horizon = 2.0;
    cfg.step = h;
    cfg.sample_interval = 2.0;
    return simulate_path(k4, {1.0, 1.0}, {0.9, 0.3, 0.05, 0.5}, cfg).p.back();
  };
  const auto e1 = endpoint(0.08), e2 = endpoint(0.04), e3 = endpoint(0.02);
  double d1 = 0.0, d2 = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    d1 = std::max(d1, std::abs(e1[i] - e2[i]));
    d2 = std::max(d2, std::abs(e2[i] - e3[i]));
  }
  const double ratio = d1 / d2;

  std::ostringstream os;
  os << "range [" << lo << ", " << hi << "], fixed-seed runs " << (identical ? "identical" : "DIFFER")
     << ", endpoint change on halving " << d2 << ", error ratio " << ratio;
  const bool pass = lo >= -1e-9 && hi <= 1.0 + 1e-9 && identical && d2 < 1e-6 && ratio >= 8.0 && ratio <= 32.0;
  return {pass, os.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"community example", [] { return example_criterion("community", 10.0); }},
      {"power-law example", [] { return example_criterion("powerlaw", 30.0); }},
      {"exact single-edge abscissa", single_edge_abscissa},
      {"sandwich suite", sandwich_suite},
      {"linearization domination", coupled_domination},
      {"decay consistency", decay_consistency},
      {"convex-program correctness", convex_program},
      {"model invariants", model_invariants},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
