#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "adhocnet/agent.hpp"
#include "adhocnet/errors.hpp"
#include "adhocnet/metrics.hpp"
#include "adhocnet/net_model.hpp"
#include "adhocnet/qnet.hpp"

namespace adhocnet {

enum class PolicyKind { kLearned, kRandom, kAlwaysMax };
enum class StepOrder { kActThenMove, kMoveThenAct };

inline const char* to_string(PolicyKind p) {
  switch (p) {
    case PolicyKind::kLearned: return "learned";
    case PolicyKind::kRandom: return "random";
    case PolicyKind::kAlwaysMax: return "always_max";
  }
  return "?";
}

inline const char* to_string(StepOrder o) {
  return o == StepOrder::kActThenMove ? "act_move" : "move_act";
}

inline const char* to_string(MobilityKind m) {
  switch (m) {
    case MobilityKind::kStatic: return "static";
    case MobilityKind::kRandomWalk: return "random_walk";
    case MobilityKind::kUniformRedraw: return "uniform_redraw";
  }
  return "?";
}

// Everything one experiment needs. Defaults are the "default" profile, where
// one length unit is 10 m: a 10 x 10 region (1e4 m^2) at 0.8 relays per
// unit^2 (80 expected relays) with maximum radius 3.0.
struct ExperimentConfig {
  std::string profile = "default";

  RegionSpec region{10.0, 10.0};
  double density = 0.8;
  std::size_t num_sources = 2;
  std::size_t terminals_per_source = 1;
  double source_x_frac = 0.05;
  double terminal_x_frac = 0.95;
  double max_radius = 3.0;

  std::size_t horizon = 150;
  std::size_t episodes = 20;

  double gamma = 0.7;
  RewardParams reward;
  EpsilonSchedule epsilon;
  double state_divisor = 100.0;
  std::size_t target_sync = 100;
  double learning_rate = 0.01;
  double rms_decay = 0.9;
  double rms_epsilon = 1e-8;
  double rms_initial = 1.0;
  std::size_t hidden = 32;

  LinkParams link;

  MobilityKind mobility = MobilityKind::kRandomWalk;
  double mobility_sigma_frac = 0.01;  // random-walk sigma as a fraction of width
  StepOrder step_order = StepOrder::kActThenMove;

  PolicyKind policy = PolicyKind::kLearned;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  bool record_snapshots = false;

  std::size_t window_start = 100;
  std::size_t window_end = 150;

  PopulationSpec population() const {
    PopulationSpec p;
    p.region = region;
    p.density = density;
    p.max_radius = max_radius;
    p.num_sources = num_sources;
    p.terminals_per_source = terminals_per_source;
    p.source_x_frac = source_x_frac;
    p.terminal_x_frac = terminal_x_frac;
    return p;
  }

  MobilityModel mobility_model() const {
    return {mobility, mobility_sigma_frac * region.width};
  }

  DdqnOptions ddqn_options() const {
    DdqnOptions o;
    o.hidden = hidden;
    o.actions = ActionSet::kSize;
    o.sync_interval = target_sync;
    o.lr = learning_rate;
    o.rms_decay = rms_decay;
    o.rms_epsilon = rms_epsilon;
    o.rms_initial = rms_initial;
    return o;
  }

  AgentOptions agent_options() const { return {reward, state_divisor, gamma}; }
};

namespace detail {

inline void require(bool ok, const std::string& field, const std::string& bounds) {
  if (!ok)
    throw ConfigError(field + " must be " + bounds, ConfigErrorKind::kOutOfRange);
}

}  // namespace detail

// Throws ConfigError naming the first offending field and its bounds.
inline void validate(const ExperimentConfig& c) {
  using detail::require;
  require(c.region.width > 0.0, "region_width", "> 0");
  require(c.region.height > 0.0, "region_height", "> 0");
  require(c.density >= 0.0, "density", ">= 0");
  require(c.num_sources >= 1, "num_sources", ">= 1");
  require(c.terminals_per_source >= 1, "terminals_per_source", ">= 1");
  require(c.source_x_frac >= 0.0 && c.source_x_frac <= 1.0, "source_x_frac", "in [0, 1]");
  require(c.terminal_x_frac >= 0.0 && c.terminal_x_frac <= 1.0, "terminal_x_frac", "in [0, 1]");
  require(c.max_radius > 0.0, "max_radius", "> 0");
  require(c.horizon >= 2, "horizon", ">= 2");
  require(c.episodes >= 1, "episodes", ">= 1");
  require(c.gamma >= 0.0 && c.gamma < 1.0, "gamma", "in [0, 1)");
  require(c.reward.omega >= 0.0 && c.reward.omega <= 1.0, "omega", "in [0, 1]");
  require(c.reward.divisor > 0.0, "reward_divisor", "> 0");
  require(c.state_divisor > 0.0, "state_divisor", "> 0");
  require(c.epsilon.start >= 0.0 && c.epsilon.start <= 1.0, "eps_start", "in [0, 1]");
  require(c.epsilon.end >= 0.0 && c.epsilon.end <= 1.0, "eps_end", "in [0, 1]");
  require(c.target_sync >= 1, "target_sync", ">= 1");
  require(c.learning_rate > 0.0, "learning_rate", "> 0");
  require(c.rms_decay >= 0.0 && c.rms_decay < 1.0, "rms_decay", "in [0, 1)");
  require(c.rms_epsilon > 0.0, "rms_epsilon", "> 0");
  require(c.rms_initial >= 0.0, "rms_initial", ">= 0");
  require(c.hidden >= 1, "hidden", ">= 1");
  require(c.link.throughput_mbps > 0.0, "link_throughput", "> 0");
  require(c.link.pathloss_eta > 0.0, "pathloss_eta", "> 0");
  require(c.link.pathloss_alpha > 0.0, "pathloss_alpha", "> 0");
  require(c.mobility_sigma_frac >= 0.0, "mobility_sigma_frac", ">= 0");
  require(c.threads >= 1, "threads", ">= 1");
  require(c.window_start >= 1 && c.window_start <= c.window_end, "window_start",
          "in [1, window_end]");
}

}  // namespace adhocnet
