#ifndef EPINET_SIMULATOR_HPP
#define EPINET_SIMULATOR_HPP

// Sample-path simulation of the switched N-intertwined model
//
//   dp_i/dt = β (1 − p_i) Σ_j A_ij(t) p_j − δ p_i
//
// and its linearization (the (1 − p_i) factor dropped). Edge chains are
// simulated exactly, event by event; between switches the frozen-graph ODE is
// integrated with classic RK4.

#include "epinet/net_model.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace epinet {

struct SimConfig {
  double horizon = 10.0;
  double step = 0.01;
  std::size_t trials = 1;
  std::uint64_t seed = 1;
  bool linearized = false;
  double sample_interval = 0.0;  // 0: horizon / 100

  void validate() const;
  double grid_spacing() const { return sample_interval > 0.0 ? sample_interval : horizon / 100.0; }
};

struct SwitchEvent {
  double t = 0.0;
  std::size_t edge = 0;  // index into spec.processes()
  std::size_t new_state = 0;
};

/// Realization of the edge processes on [0, horizon]: initial states drawn
/// from the stationary laws, then exponential holding times per edge.
struct SwitchingPath {
  std::vector<std::size_t> initial_states;
  std::vector<SwitchEvent> events;
  double horizon = 0.0;
};

SwitchingPath sample_switching_path(const SwitchedNetworkSpec& spec, double horizon, std::uint64_t seed);

struct Trajectory {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  bool linearized = false;
  std::vector<double> times;
  std::vector<std::vector<double>> p;
  std::vector<SwitchEvent> events;
};

/// Integrates one model along a given switching path. Samples are taken at
/// t = 0, at every switch, and on the uniform grid.
Trajectory integrate_along(const SwitchedNetworkSpec& spec, const EpidemicParams& params,
                           const std::vector<double>& p0, const SwitchingPath& path, const SimConfig& cfg,
                           bool linearized);

Trajectory simulate_path(const SwitchedNetworkSpec& spec, const EpidemicParams& params, const std::vector<double>& p0,
                         const SimConfig& cfg);

Trajectory simulate_linear_path(const SwitchedNetworkSpec& spec, const EpidemicParams& params,
                                const std::vector<double>& p0, const SimConfig& cfg);

struct CoupledRun {
  Trajectory nonlinear;
  Trajectory linear;
  double min_margin = 0.0;  // min over samples of ||p̄||_1 − ||p||_1
};

/// Both models on one shared switching path.
CoupledRun simulate_coupled(const SwitchedNetworkSpec& spec, const EpidemicParams& params,
                            const std::vector<double>& p0, const SimConfig& cfg);

struct DecayEstimate {
  double rate = 0.0;                 // slope of log E||p(t)|| over the second half
  std::optional<double> half_width;  // 95% normal half-width, trials >= 30
  std::size_t trials = 0;
  std::vector<double> grid_times;
  std::vector<double> mean_norm;
  bool all_zero = false;             // rate is -inf
};

/// Monte Carlo decay of E||p(t)||_2 from p0 (default all ones).
DecayEstimate estimate_decay(const SwitchedNetworkSpec& spec, const EpidemicParams& params, const SimConfig& cfg,
                             std::optional<std::vector<double>> p0 = std::nullopt);

/// Counter-based per-trial seed (splitmix64 of master + trial).
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial);

/// Worker count: EPINET_THREADS if set, else hardware concurrency.
std::size_t worker_count();

/// `t,p_1,...,p_n` with shortest round-trip number formatting.
std::string trajectory_csv(const Trajectory& traj);
/// `t,i,j,new_state` (1-based vertices).
std::string events_csv(const Trajectory& traj, const SwitchedNetworkSpec& spec);

}  // namespace epinet

#endif
