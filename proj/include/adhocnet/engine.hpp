#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "adhocnet/agent.hpp"
#include "adhocnet/config.hpp"
#include "adhocnet/metrics.hpp"
#include "adhocnet/net_model.hpp"
#include "adhocnet/rng.hpp"

namespace adhocnet {

// Runs fn(i) for i in [0, n) over `threads` workers in contiguous chunks.
// The first exception thrown by any worker is rethrown on the caller.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t workers = std::min(threads, n);
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = n * w / workers;
      const std::size_t end = n * (w + 1) / workers;
      pool.emplace_back([&, begin, end] {
        try {
          for (std::size_t i = begin; i < end; ++i) fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

struct StepRecord {
  std::size_t step = 0;
  StepMetrics metrics;
  std::vector<double> radii;  // relay radii after this step's actions
  double mean_loss = 0.0;     // over relays that trained this step
};

struct EpisodeTrace {
  std::uint64_t seed = 0;
  std::size_t num_relays = 0;
  std::vector<StepRecord> steps;
  // Full network state per step, only when snapshot recording is on.
  std::vector<Network> networks;
  std::vector<TopologySnapshot> topologies;
  // Final online network of each relay, also only with snapshot recording.
  std::vector<QNetParams> final_networks;

  const std::vector<double>& final_radii() const { return steps.back().radii; }
};

struct AggregateReport {
  std::size_t episodes = 0;
  std::size_t window_start = 0;
  std::size_t window_end = 0;
  double connectivity = 0.0;
  double goodput_mbps = 0.0;
  double power_dbm = 0.0;
  // Fraction of final relay radii within 0.1 * max_radius of 0 or max_radius,
  // averaged over episodes that have relays.
  double extreme_fraction = 0.0;

  std::vector<double> step_connectivity;
  std::vector<double> step_goodput_mbps;
  std::vector<double> step_phi;
  std::vector<double> step_power_dbm;

  std::vector<double> episode_connectivity;
  std::vector<double> episode_goodput_mbps;
};

inline std::uint64_t episode_seed(std::uint64_t master_seed, std::size_t episode) {
  return derive_seed(master_seed, StreamPurpose::kEpisode, episode);
}

namespace detail {

inline void check_radius(double r, double max_radius) {
  if (!(r >= 0.0 && r <= max_radius))
    throw DiagnosticError("relay radius left [0, max_radius]");
}

}  // namespace detail

// One episode of the activation loop. Per step: every relay picks an action
// and updates its radius, relays move, the graph is built and the normalized
// throughput is published, then every relay observes its new state and
// trains on the reward for the action it just took.
inline EpisodeTrace run_episode(const ExperimentConfig& config, std::uint64_t seed) {
  validate(config);
  auto placement = derive_stream(seed, StreamPurpose::kPlacement, 0);
  auto movement = derive_stream(seed, StreamPurpose::kMobility, 0);
  Network net = generate_episode(config.population(), placement);
  const MobilityModel mobility = config.mobility_model();
  const AgentOptions agent_opt = config.agent_options();
  const DdqnOptions ddqn_opt = config.ddqn_options();
  const bool learning = config.policy != PolicyKind::kAlwaysMax;

  std::vector<Agent> agents(net.relay_ids.size());
  for (std::size_t k = 0; k < agents.size(); ++k) {
    Agent& a = agents[k];
    a.node_id = net.relay_ids[k];
    a.radius = 0.0;
    a.rng = derive_stream(seed, StreamPurpose::kAgentExplore, k);
    auto init = derive_stream(seed, StreamPurpose::kAgentInit, k);
    a.ddqn = Ddqn::create(init, ddqn_opt);
    a.prev_state = observe_state(a.node_id, net);
  }

  EpisodeTrace trace;
  trace.seed = seed;
  trace.num_relays = agents.size();
  trace.steps.reserve(config.horizon);

  double phi_before = 0.0;  // phi_0
  std::vector<double> losses(agents.size(), 0.0);

  for (std::size_t step = 1; step <= config.horizon; ++step) {
    if (config.step_order == StepOrder::kMoveThenAct) relocate(net, mobility, movement);

    const double eps =
        config.policy == PolicyKind::kRandom ? 1.0 : config.epsilon.at(step);
    parallel_for(agents.size(), config.threads, [&](std::size_t k) {
      Agent& a = agents[k];
      if (config.policy == PolicyKind::kAlwaysMax) {
        a.radius = config.max_radius;
      } else {
        const double delta = get_action(a, a.prev_state, eps, agent_opt.state_divisor);
        a.radius = apply_action(a.radius, delta, config.max_radius);
      }
      detail::check_radius(a.radius, config.max_radius);
    });
    for (const Agent& a : agents) net.nodes[a.node_id].radius = a.radius;

    if (config.step_order == StepOrder::kActThenMove) relocate(net, mobility, movement);

    TopologySnapshot topo = build_graph(net, step);
    StepRecord rec;
    rec.step = step;
    rec.metrics = measure(topo, net, config.link);
    const double phi_now = rec.metrics.phi;

    // All updates happen after phi for this step is published.
    parallel_for(agents.size(), config.threads, [&](std::size_t k) {
      Agent& a = agents[k];
      const std::size_t state = observe_state(a.node_id, net);
      if (learning) {
        losses[k] = update(a, state, phi_now, phi_before, agent_opt).loss;
      } else {
        a.prev_state = state;
      }
    });

    rec.radii = net.relay_radii();
    if (learning && !agents.empty()) {
      double sum = 0.0;
      for (double l : losses) sum += l;
      rec.mean_loss = sum / static_cast<double>(agents.size());
    }
    trace.steps.push_back(std::move(rec));
    if (config.record_snapshots) {
      trace.networks.push_back(net);
      trace.topologies.push_back(std::move(topo));
    }
    phi_before = phi_now;
  }
  if (config.record_snapshots)
    for (const Agent& a : agents) trace.final_networks.push_back(a.ddqn.online);
  return trace;
}

// Share of radii within `tolerance` of 0 or max_radius.
inline double extreme_fraction(const std::vector<double>& radii, double max_radius,
                               double tolerance) {
  if (radii.empty()) return 0.0;
  std::size_t n = 0;
  for (double r : radii)
    if (r <= tolerance || r >= max_radius - tolerance) ++n;
  return static_cast<double>(n) / static_cast<double>(radii.size());
}

// Per-step and windowed means over a set of traces. Power is averaged in mW
// and converted to dBm afterwards.
inline AggregateReport aggregate(const ExperimentConfig& config,
                                 const std::vector<EpisodeTrace>& traces) {
  AggregateReport rep;
  rep.episodes = traces.size();
  rep.window_start = config.window_start;
  rep.window_end = std::min(config.window_end, config.horizon);
  const std::size_t T = config.horizon;
  const double E = static_cast<double>(traces.size());

  std::vector<double> power_mw(T, 0.0);
  rep.step_connectivity.assign(T, 0.0);
  rep.step_goodput_mbps.assign(T, 0.0);
  rep.step_phi.assign(T, 0.0);
  for (const auto& tr : traces) {
    for (std::size_t t = 0; t < T; ++t) {
      const auto& m = tr.steps[t].metrics;
      rep.step_connectivity[t] += m.connectivity_ratio / E;
      rep.step_goodput_mbps[t] += m.goodput_mbps / E;
      rep.step_phi[t] += m.phi / E;
      power_mw[t] += m.mean_power_mw / E;
    }
  }
  for (double p : power_mw) rep.step_power_dbm.push_back(mw_to_dbm(p));

  double window_mw = 0.0;
  std::size_t extreme_episodes = 0;
  for (const auto& tr : traces) {
    double conn = 0.0;
    double good = 0.0;
    double mw = 0.0;
    std::size_t n = 0;
    for (std::size_t t = rep.window_start; t <= rep.window_end; ++t) {
      const auto& m = tr.steps[t - 1].metrics;
      conn += m.connectivity_ratio;
      good += m.goodput_mbps;
      mw += m.mean_power_mw;
      ++n;
    }
    const double dn = n > 0 ? static_cast<double>(n) : 1.0;
    rep.episode_connectivity.push_back(conn / dn);
    rep.episode_goodput_mbps.push_back(good / dn);
    rep.connectivity += conn / dn / E;
    rep.goodput_mbps += good / dn / E;
    window_mw += mw / dn / E;
    if (tr.num_relays > 0) {
      rep.extreme_fraction +=
          extreme_fraction(tr.final_radii(), config.max_radius, 0.1 * config.max_radius);
      ++extreme_episodes;
    }
  }
  rep.power_dbm = mw_to_dbm(window_mw);
  if (extreme_episodes > 0) rep.extreme_fraction /= static_cast<double>(extreme_episodes);
  return rep;
}

// Runs config.episodes episodes with seeds derived from config.seed. Traces
// are handed back through `traces_out` when given.
inline AggregateReport run_experiment(const ExperimentConfig& config,
                                      std::vector<EpisodeTrace>* traces_out = nullptr) {
  validate(config);
  std::vector<EpisodeTrace> traces;
  traces.reserve(config.episodes);
  for (std::size_t e = 0; e < config.episodes; ++e)
    traces.push_back(run_episode(config, episode_seed(config.seed, e)));
  AggregateReport rep = aggregate(config, traces);
  if (traces_out) *traces_out = std::move(traces);
  return rep;
}

}  // namespace adhocnet
