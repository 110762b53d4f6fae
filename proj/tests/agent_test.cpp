#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "adhocnet/agent.hpp"

namespace adhocnet {
namespace {

Agent make_agent(std::uint64_t seed, QNetParams online) {
  Agent a;
  a.rng = derive_stream(seed, StreamPurpose::kAgentExplore, 0);
  a.ddqn = Ddqn::create(std::move(online), {});
  return a;
}

Agent make_agent(std::uint64_t seed) {
  auto init = derive_stream(seed, StreamPurpose::kAgentInit, 0);
  return make_agent(seed, init_params(init));
}

TEST(ActionSet, DeltasAndIndices) {
  EXPECT_EQ(ActionSet::delta(0), -1.0);
  EXPECT_EQ(ActionSet::delta(10), 0.0);
  EXPECT_EQ(ActionSet::delta(20), 1.0);
  for (std::size_t i = 0; i < ActionSet::kSize; ++i)
    EXPECT_EQ(ActionSet::index_of(ActionSet::delta(i)), i);
  EXPECT_NEAR(ActionSet::delta(13), 0.3, 1e-15);
}

TEST(EpsilonSchedule, ClosedForm) {
  const EpsilonSchedule eps;
  EXPECT_EQ(eps.at(1), 1.0);
  EXPECT_NEAR(eps.at(50), 0.5149, 1e-12);
  EXPECT_EQ(eps.at(101), 0.01);
  EXPECT_EQ(eps.at(150), 0.01);
  for (std::size_t t = 1; t <= 101; ++t)
    EXPECT_NEAR(eps.at(t), 1.0 - 0.99 * static_cast<double>(t - 1) / 100.0, 1e-12);
  for (std::size_t t = 2; t <= 200; ++t) EXPECT_LE(eps.at(t), eps.at(t - 1));
}

TEST(Reward, WorkedExamples) {
  const RewardParams p;
  const Reward base = compute_reward(p, 0.3, 0.3, 0.0);
  EXPECT_EQ(base.raw, 5.0);
  EXPECT_EQ(base.scaled, 0.5);
  EXPECT_NEAR(compute_reward(p, 0.4, 0.3, 0.5).raw, 6.5, 6.5e-12);
  EXPECT_NEAR(compute_reward(p, 0.25, 0.3, -1.0).raw, 4.4, 4.4e-12);
}

TEST(Reward, SlopesAreLinear) {
  const RewardParams p;
  // Exactly representable steps keep the finite differences exact.
  const double dphi = 0.125;
  EXPECT_EQ(compute_reward(p, 0.5 + dphi, 0.5, 0.0).raw - compute_reward(p, 0.5, 0.5, 0.0).raw,
            p.omega * p.eta * dphi);
  EXPECT_NEAR((compute_reward(p, 0.625, 0.5, 0.0).raw - compute_reward(p, 0.5, 0.5, 0.0).raw) /
                  dphi,
              16.0, 1e-12);
  EXPECT_NEAR(compute_reward(p, 0.5, 0.5, 1.0).raw - compute_reward(p, 0.5, 0.5, 0.0).raw, -0.2,
              1e-12);
}

TEST(Reward, NonNegativeOnOperatingEnvelope) {
  const RewardParams p;
  for (double a : ActionSet::all()) {
    EXPECT_GE(compute_reward(p, 0.0, 0.2625, a).raw, 0.0);
    EXPECT_GE(compute_reward(p, 0.7375, 1.0, a).raw, 0.0);
  }
  // Not floored: a large drop goes negative.
  EXPECT_LT(compute_reward(p, 0.0, 0.5, 1.0).raw, 0.0);
}

TEST(GetAction, UniformWhenAlwaysExploring) {
  Agent a = make_agent(31);
  std::array<int, ActionSet::kSize> counts{};
  const int n = 10000;
  for (int i = 0; i < n; ++i) ++counts[ActionSet::index_of(get_action(a, 5, 1.0))];
  const double expected = static_cast<double>(n) / ActionSet::kSize;
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  // 20 degrees of freedom, 99.9th percentile.
  EXPECT_LT(chi2, 45.31);
  EXPECT_EQ(a.explore_count, static_cast<std::uint64_t>(n));
}

TEST(GetAction, PureExploitationPicksMaxOutput) {
  QNetParams p = QNetParams::zeros(1, 32, 21);
  p.b2[20] = 1.0;
  Agent a = make_agent(32, p);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(get_action(a, 1 + static_cast<std::size_t>(i), 0.0), 1.0);
    EXPECT_EQ(a.prev_action, 1.0);
    EXPECT_EQ(a.prev_action_index, 20u);
  }
}

TEST(GetAction, TiesGoToLowestIndex) {
  auto init = derive_stream(33, StreamPurpose::kAgentInit, 0);
  QNetParams p = init_params(init);
  // Rows 4 and 9 identical and dominant.
  for (std::size_t j = 0; j < p.hidden(); ++j) {
    p.w1[j] = std::abs(p.w1[j]);
    p.w2(9, j) = p.w2(4, j) = 1.0;
  }
  p.b2[4] = p.b2[9] = 10.0;
  Agent a = make_agent(33, p);
  EXPECT_EQ(get_action(a, 7, 0.0), ActionSet::delta(4));
}

TEST(GetAction, ExploreFractionWithinThreeSigma) {
  for (double eps : {0.1, 0.5, 0.9}) {
    Agent a = make_agent(34);
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
      const double d = get_action(a, 3, eps);
      ASSERT_EQ(d, a.prev_action);
      ASSERT_EQ(a.prev_state, 3u);
    }
    const double frac = static_cast<double>(a.explore_count) / n;
    EXPECT_NEAR(frac, eps, 3.0 * std::sqrt(eps * (1.0 - eps) / n)) << "eps " << eps;
  }
}

TEST(Update, PassesTransitionAndGammaToTrainStep) {
  Agent a = make_agent(35);
  get_action(a, 4, 1.0);
  Ddqn reference = a.ddqn;
  const AgentOptions opt;
  const TrainResult r = update(a, 6, 0.3, 0.0, opt);
  const double reward = compute_reward(opt.reward, 0.3, 0.0, a.prev_action).scaled;
  const TrainResult expected =
      train_step(reference, 0.04, a.prev_action_index, reward, 0.06, 0.7);
  EXPECT_EQ(r.td_target, expected.td_target);
  EXPECT_EQ(r.loss, expected.loss);
  EXPECT_EQ(a.ddqn.online, reference.online);
  EXPECT_EQ(a.prev_state, 6u);
}

TEST(Update, FirstStepUsesZeroPhiPlaceholder) {
  // Bias-only net with gamma 0 isolates the reward in the td target.
  Agent a = make_agent(36, QNetParams::zeros(1, 8, 21));
  get_action(a, 1, 0.0);  // all-zero Q -> index 0, delta -1.0
  AgentOptions opt;
  opt.gamma = 0.0;
  const TrainResult r = update(a, 1, 0.25, 0.0, opt);
  EXPECT_NEAR(r.td_target, (5.0 + 16.0 * 0.25 + 0.2) / 10.0, 1e-12);
}

TEST(Update, RepeatedTransitionDescends) {
  auto rng = derive_stream(37, StreamPurpose::kAgentInit, 1);
  int descended = 0;
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    Agent a = make_agent(1000 + static_cast<std::uint64_t>(t));
    const AgentOptions opt;
    const std::size_t s = 1 + uniform_index(rng, 80);
    const std::size_t s2 = 1 + uniform_index(rng, 80);
    const double phi_prev = uniform01(rng);
    const double phi_prev2 = uniform01(rng);
    get_action(a, s, 1.0);
    const double first = update(a, s2, phi_prev, phi_prev2, opt).loss;
    a.prev_state = s;
    const double second = update(a, s2, phi_prev, phi_prev2, opt).loss;
    if (second <= first) ++descended;
  }
  EXPECT_GE(descended, 950);
}

}  // namespace
}  // namespace adhocnet
