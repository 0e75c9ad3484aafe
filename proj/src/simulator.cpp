#include "epinet/simulator.hpp"

#include "epinet/error.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <mutex>
#include <queue>
#include <random>
#include <thread>

namespace epinet {

namespace {

constexpr double kBoundTol = 1e-9;
constexpr int kMaxHalvings = 20;

using Observer = std::function<void(double t, const std::vector<double>& p, bool on_grid)>;

class FrozenField {
public:
  FrozenField(const SwitchedNetworkSpec& spec, const EpidemicParams& params, bool linear)
      : procs_(spec.processes()), weight_(procs_.size(), 0.0), ap_(spec.vertex_count()), beta_(params.beta),
        delta_(params.delta), linear_(linear) {}

  void set_state(std::size_t edge, std::size_t state) { weight_[edge] = procs_[edge].values[state]; }

  void operator()(const std::vector<double>& p, std::vector<double>& dp) {
    std::fill(ap_.begin(), ap_.end(), 0.0);
    for (std::size_t e = 0; e < procs_.size(); ++e) {
      const double w = weight_[e];
      if (w == 0.0)
        continue;
      ap_[procs_[e].i] += w * p[procs_[e].j];
      ap_[procs_[e].j] += w * p[procs_[e].i];
    }
    for (std::size_t k = 0; k < p.size(); ++k) {
      const double infection = linear_ ? ap_[k] : (1.0 - p[k]) * ap_[k];
      dp[k] = beta_ * infection - delta_ * p[k];
    }
  }

private:
  const std::vector<EdgeProcess>& procs_;
  std::vector<double> weight_;
  std::vector<double> ap_;
  double beta_;
  double delta_;
  bool linear_;
};

class Rk4 {
public:
  explicit Rk4(std::size_t n) : k1_(n), k2_(n), k3_(n), k4_(n), tmp_(n), out_(n) {}

  const std::vector<double>& step(FrozenField& field, const std::vector<double>& p, double h) {
    const std::size_t n = p.size();
    field(p, k1_);
    for (std::size_t i = 0; i < n; ++i)
      tmp_[i] = p[i] + 0.5 * h * k1_[i];
    field(tmp_, k2_);
    for (std::size_t i = 0; i < n; ++i)
      tmp_[i] = p[i] + 0.5 * h * k2_[i];
    field(tmp_, k3_);
    for (std::size_t i = 0; i < n; ++i)
      tmp_[i] = p[i] + h * k3_[i];
    field(tmp_, k4_);
    for (std::size_t i = 0; i < n; ++i)
      out_[i] = p[i] + h / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
    return out_;
  }

private:
  std::vector<double> k1_, k2_, k3_, k4_, tmp_, out_;
};

bool admissible(const std::vector<double>& p, bool linear) {
  for (double v : p) {
    if (!std::isfinite(v) || v < -kBoundTol || (!linear && v > 1.0 + kBoundTol))
      return false;
  }
  return true;
}

void advance(FrozenField& field, Rk4& rk, std::vector<double>& p, double h, bool linear, int depth) {
  const auto& next = rk.step(field, p, h);
  if (admissible(next, linear)) {
    p = next;
    return;
  }
  if (depth >= kMaxHalvings)
    fail(ErrorKind::Numerical, "integrator left the admissible region after " + std::to_string(kMaxHalvings) +
                                   " step halvings");
  advance(field, rk, p, 0.5 * h, linear, depth + 1);
  advance(field, rk, p, 0.5 * h, linear, depth + 1);
}

void check_initial(const SwitchedNetworkSpec& spec, const std::vector<double>& p0) {
  require(p0.size() == spec.vertex_count(), "initial vector length must equal the vertex count");
  for (double v : p0)
    require(std::isfinite(v) && v >= 0.0 && v <= 1.0, "initial infection probabilities must lie in [0, 1]");
}

std::vector<double> grid_times(const SimConfig& cfg) {
  const double dt = cfg.grid_spacing();
  const auto count = static_cast<std::size_t>(std::floor(cfg.horizon / dt + 1e-9));
  std::vector<double> grid;
  grid.reserve(count + 2);
  for (std::size_t k = 0; k <= count; ++k)
    grid.push_back(std::min(static_cast<double>(k) * dt, cfg.horizon));
  if (grid.back() < cfg.horizon)
    grid.push_back(cfg.horizon);
  return grid;
}

void integrate_core(const SwitchedNetworkSpec& spec, const EpidemicParams& params, const std::vector<double>& p0,
                    const SwitchingPath& path, const SimConfig& cfg, bool linear, const Observer& observe) {
  FrozenField field(spec, params, linear);
  for (std::size_t e = 0; e < path.initial_states.size(); ++e)
    field.set_state(e, path.initial_states[e]);
  Rk4 rk(p0.size());
  std::vector<double> p = p0;

  const auto grid = grid_times(cfg);
  std::size_t next_grid = 1;
  std::size_t next_event = 0;
  double t = 0.0;
  observe(0.0, p, true);

  while (next_grid < grid.size()) {
    const double t_grid = grid[next_grid];
    const double t_event =
        next_event < path.events.size() ? path.events[next_event].t : std::numeric_limits<double>::infinity();
    const double target = std::min(t_grid, t_event);
    if (target > t) {
      const double span = target - t;
      const auto sub = static_cast<std::size_t>(std::max(1.0, std::ceil(span / cfg.step - 1e-9)));
      const double h = span / static_cast<double>(sub);
      for (std::size_t k = 0; k < sub; ++k)
        advance(field, rk, p, h, linear, 0);
      t = target;
      observe(t, p, target == t_grid);
    }
    if (target == t_grid)
      ++next_grid;
    while (next_event < path.events.size() && path.events[next_event].t == target) {
      field.set_state(path.events[next_event].edge, path.events[next_event].new_state);
      ++next_event;
    }
  }
}

Trajectory record(const SwitchedNetworkSpec& spec, const EpidemicParams& params, const std::vector<double>& p0,
                  const SwitchingPath& path, const SimConfig& cfg, bool linear) {
  Trajectory tr;
  tr.n = spec.vertex_count();
  tr.seed = cfg.seed;
  tr.linearized = linear;
  tr.events = path.events;
  integrate_core(spec, params, p0, path, cfg, linear, [&](double t, const std::vector<double>& p, bool) {
    tr.times.push_back(t);
    tr.p.push_back(p);
  });
  return tr;
}

double l1(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v)
    s += std::abs(x);
  return s;
}

double l2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v)
    s += x * x;
  return std::sqrt(s);
}

/// Least-squares slope of log(y) against t over points with t >= t_from, y > 0.
std::optional<double> log_slope(const std::vector<double>& t, const std::vector<double>& y, double t_from) {
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  std::size_t cnt = 0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] < t_from || !(y[k] > 0.0))
      continue;
    const double ly = std::log(y[k]);
    st += t[k];
    sy += ly;
    stt += t[k] * t[k];
    sty += t[k] * ly;
    ++cnt;
  }
  if (cnt < 2)
    return std::nullopt;
  const double c = static_cast<double>(cnt);
  const double denom = c * stt - st * st;
  if (denom <= 0.0)
    return std::nullopt;
  return (c * sty - st * sy) / denom;
}

void append_number(std::string& out, double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

}  // namespace

void SimConfig::validate() const {
  require(std::isfinite(horizon) && horizon > 0.0, "simulation horizon must be > 0");
  require(std::isfinite(step) && step > 0.0, "integrator step must be > 0");
  require(trials >= 1, "trials must be >= 1");
  require(std::isfinite(sample_interval) && sample_interval >= 0.0, "sample interval must be >= 0");
}

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (trial + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::size_t worker_count() {
  if (const char* env = std::getenv("EPINET_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1)
      return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

SwitchingPath sample_switching_path(const SwitchedNetworkSpec& spec, double horizon, std::uint64_t seed) {
  const auto& procs = spec.processes();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  SwitchingPath path;
  path.horizon = horizon;
  path.initial_states.resize(procs.size());
  std::vector<std::size_t> state(procs.size());

  using Clock = std::pair<double, std::size_t>;
  std::priority_queue<Clock, std::vector<Clock>, std::greater<>> clocks;
  const auto draw_holding = [&](std::size_t e) {
    const double rate = procs[e].exit_rate(state[e]);
    if (rate <= 0.0)
      return std::numeric_limits<double>::infinity();
    return std::exponential_distribution<double>(rate)(rng);
  };

  for (std::size_t e = 0; e < procs.size(); ++e) {
    const auto pi = stationary_distribution(procs[e].generator);
    const double u = unif(rng);
    double acc = 0.0;
    std::size_t s = 0;
    for (; s + 1 < pi.size(); ++s) {
      acc += pi[s];
      if (u < acc)
        break;
    }
    state[e] = s;
    path.initial_states[e] = s;
    const double hold = draw_holding(e);
    if (hold < horizon)
      clocks.emplace(hold, e);
  }

  while (!clocks.empty()) {
    const auto [t, e] = clocks.top();
    clocks.pop();
    const auto& g = procs[e].generator;
    const std::size_t s = state[e];
    const double exit = procs[e].exit_rate(s);
    const double u = unif(rng) * exit;
    double acc = 0.0;
    std::size_t next = s;
    for (std::size_t c = 0; c < procs[e].state_count(); ++c) {
      if (c == s)
        continue;
      acc += g(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(c));
      next = c;
      if (u < acc)
        break;
    }
    state[e] = next;
    path.events.push_back({t, e, next});
    const double hold = draw_holding(e);
    if (t + hold < horizon)
      clocks.emplace(t + hold, e);
  }
  return path;
}

Trajectory integrate_along(const SwitchedNetworkSpec& spec, const EpidemicParams& params,
                           const std::vector<double>& p0, const SwitchingPath& path, const SimConfig& cfg,
                           bool linearized) {
  make_params(params.beta, params.delta);
  cfg.validate();
  check_initial(spec, p0);
  return record(spec, params, p0, path, cfg, linearized);
}

Trajectory simulate_path(const SwitchedNetworkSpec& spec, const EpidemicParams& params, const std::vector<double>& p0,
                         const SimConfig& cfg) {
  cfg.validate();
  const auto path = sample_switching_path(spec, cfg.horizon, cfg.seed);
  return integrate_along(spec, params, p0, path, cfg, false);
}

Trajectory simulate_linear_path(const SwitchedNetworkSpec& spec, const EpidemicParams& params,
                                const std::vector<double>& p0, const SimConfig& cfg) {
  cfg.validate();
  const auto path = sample_switching_path(spec, cfg.horizon, cfg.seed);
  return integrate_along(spec, params, p0, path, cfg, true);
}

CoupledRun simulate_coupled(const SwitchedNetworkSpec& spec, const EpidemicParams& params,
                            const std::vector<double>& p0, const SimConfig& cfg) {
  cfg.validate();
  const auto path = sample_switching_path(spec, cfg.horizon, cfg.seed);
  CoupledRun run;
  run.nonlinear = integrate_along(spec, params, p0, path, cfg, false);
  run.linear = integrate_along(spec, params, p0, path, cfg, true);
  run.min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < run.nonlinear.times.size(); ++k)
    run.min_margin = std::min(run.min_margin, l1(run.linear.p[k]) - l1(run.nonlinear.p[k]));
  return run;
}

DecayEstimate estimate_decay(const SwitchedNetworkSpec& spec, const EpidemicParams& params, const SimConfig& cfg,
                             std::optional<std::vector<double>> p0) {
  make_params(params.beta, params.delta);
  cfg.validate();
  const std::vector<double> start = p0 ? *p0 : std::vector<double>(spec.vertex_count(), 1.0);
  check_initial(spec, start);

  const auto grid = grid_times(cfg);

  std::vector<std::vector<double>> norms(cfg.trials);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    for (std::size_t k = next++; k < cfg.trials; k = next++) {
      try {
        const auto path = sample_switching_path(spec, cfg.horizon, trial_seed(cfg.seed, k));
        std::vector<double> row;
        row.reserve(grid.size());
        integrate_core(spec, params, start, path, cfg, cfg.linearized,
                       [&](double, const std::vector<double>& p, bool on_grid) {
                         if (on_grid)
                           row.push_back(l2(p));
                       });
        norms[k] = std::move(row);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure)
          failure = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::min(worker_count(), cfg.trials);
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w)
    pool.emplace_back(worker);
  worker();
  for (auto& th : pool)
    th.join();
  if (failure)
    std::rethrow_exception(failure);

  DecayEstimate est;
  est.trials = cfg.trials;
  est.grid_times = grid;
  est.mean_norm.assign(grid.size(), 0.0);
  for (const auto& row : norms)
    for (std::size_t g = 0; g < grid.size(); ++g)
      est.mean_norm[g] += row[g];
  for (auto& v : est.mean_norm)
    v /= static_cast<double>(cfg.trials);

  const double t_from = 0.5 * cfg.horizon;
  const auto slope = log_slope(grid, est.mean_norm, t_from);
  if (!slope) {
    est.all_zero = true;
    est.rate = -std::numeric_limits<double>::infinity();
    return est;
  }
  est.rate = *slope;

  if (cfg.trials >= 30) {
    std::vector<double> slopes;
    for (const auto& row : norms)
      if (const auto s = log_slope(grid, row, t_from))
        slopes.push_back(*s);
    if (slopes.size() >= 2) {
      double mean = 0.0;
      for (double s : slopes)
        mean += s;
      mean /= static_cast<double>(slopes.size());
      double var = 0.0;
      for (double s : slopes)
        var += (s - mean) * (s - mean);
      var /= static_cast<double>(slopes.size() - 1);
      est.half_width = 1.96 * std::sqrt(var / static_cast<double>(slopes.size()));
    }
  }
  return est;
}

std::string trajectory_csv(const Trajectory& traj) {
  std::string out = "t";
  for (std::size_t i = 1; i <= traj.n; ++i)
    out += ",p_" + std::to_string(i);
  out += '\n';
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    append_number(out, traj.times[k]);
    for (double v : traj.p[k]) {
      out += ',';
      append_number(out, v);
    }
    out += '\n';
  }
  return out;
}

std::string events_csv(const Trajectory& traj, const SwitchedNetworkSpec& spec) {
  std::string out = "t,i,j,new_state\n";
  for (const auto& ev : traj.events) {
    const auto& proc = spec.processes()[ev.edge];
    append_number(out, ev.t);
    out += ',' + std::to_string(proc.i + 1) + ',' + std::to_string(proc.j + 1) + ',' + std::to_string(ev.new_state) + '\n';
  }
  return out;
}

}  // namespace epinet
