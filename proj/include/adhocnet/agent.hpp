#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>

#include "adhocnet/qnet.hpp"
#include "adhocnet/rng.hpp"

namespace adhocnet {

// Radius deltas -1.0, -0.9, ..., +1.0.
class ActionSet {
 public:
  static constexpr std::size_t kSize = 21;

  static constexpr double delta(std::size_t index) {
    return (static_cast<double>(index) - 10.0) / 10.0;
  }

  // Inverse of delta(); the nearest index for values on the 0.1 grid.
  static std::size_t index_of(double delta) {
    const long i = std::lround(delta * 10.0) + 10;
    return static_cast<std::size_t>(std::clamp(i, 0L, static_cast<long>(kSize) - 1));
  }

  static std::array<double, kSize> all() {
    std::array<double, kSize> out{};
    for (std::size_t i = 0; i < kSize; ++i) out[i] = delta(i);
    return out;
  }
};

struct RewardParams {
  double u = 5.0;
  double omega = 0.8;
  double eta = 20.0;
  double divisor = 10.0;
};

struct Reward {
  double raw = 0.0;
  double scaled = 0.0;
};

// u + omega * eta * (phi_prev - phi_prev2) - (1 - omega) * action, applied to
// the executed delta before clamping. No floor at zero.
inline Reward compute_reward(const RewardParams& p, double phi_prev, double phi_prev2,
                             double prev_action) {
  Reward r;
  r.raw = p.u + p.omega * p.eta * (phi_prev - phi_prev2) - (1.0 - p.omega) * prev_action;
  r.scaled = r.raw / p.divisor;
  return r;
}

// Linear decay from `start` at step 1 to `end` after `decay_steps` steps.
struct EpsilonSchedule {
  double start = 1.0;
  double end = 0.01;
  std::size_t decay_steps = 100;

  double at(std::size_t step) const {
    if (decay_steps == 0) return end;
    if (step <= 1) return start;
    if (step - 1 >= decay_steps) return end;
    const double t = static_cast<double>(step - 1) / static_cast<double>(decay_steps);
    return std::max(end, start - (start - end) * t);
  }
};

struct AgentOptions {
  RewardParams reward;
  double state_divisor = 100.0;
  double gamma = 0.7;
};

// One relay's learner. Everything here is private to the relay; the only
// shared input to update() is the broadcast throughput history.
struct Agent {
  std::size_t node_id = 0;
  double radius = 0.0;
  std::size_t prev_state = 1;
  double prev_action = 0.0;
  std::size_t prev_action_index = ActionSet::index_of(0.0);
  Ddqn ddqn;
  RandomStream rng;
  double last_loss = 0.0;
  std::uint64_t explore_count = 0;
  std::uint64_t greedy_count = 0;
};

// Epsilon-greedy selection. Explores iff p < epsilon with p ~ U[0, 1).
inline double get_action(Agent& agent, std::size_t state, double epsilon,
                         double state_divisor = 100.0) {
  const double p = uniform01(agent.rng);
  std::size_t index;
  if (p < epsilon) {
    index = static_cast<std::size_t>(uniform_index(agent.rng, ActionSet::kSize));
    ++agent.explore_count;
  } else {
    const auto q = forward(agent.ddqn.online, static_cast<double>(state) / state_divisor);
    index = argmax(q);
    ++agent.greedy_count;
  }
  agent.prev_state = state;
  agent.prev_action_index = index;
  agent.prev_action = ActionSet::delta(index);
  return agent.prev_action;
}

// Learns from (prev_state, prev_action) -> new_state with the reward built
// from the two most recent throughput values, then makes new_state current.
inline TrainResult update(Agent& agent, std::size_t new_state, double phi_prev, double phi_prev2,
                          const AgentOptions& opt) {
  const Reward r = compute_reward(opt.reward, phi_prev, phi_prev2, agent.prev_action);
  const TrainResult result = train_step(
      agent.ddqn, static_cast<double>(agent.prev_state) / opt.state_divisor,
      agent.prev_action_index, r.scaled, static_cast<double>(new_state) / opt.state_divisor,
      opt.gamma);
  agent.prev_state = new_state;
  agent.last_loss = result.loss;
  return result;
}

}  // namespace adhocnet
