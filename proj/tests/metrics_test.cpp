#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "adhocnet/metrics.hpp"
#include "oracles.hpp"

namespace adhocnet {
namespace {

// Source 0 and terminal 1 at opposite ends, relays 2.. strung between.
Network line_network(double source_radius, std::vector<Position> relays,
                     std::vector<double> radii) {
  Network net;
  net.region = {10.0, 10.0};
  net.nodes.push_back({0, NodeKind::kSource, {0.0, 0.0}, source_radius});
  net.nodes.push_back({1, NodeKind::kTerminal, {4.0, 0.0}, 0.0});
  net.source_ids = {0};
  net.terminal_ids = {1};
  net.terminal_map = {{1}};
  for (std::size_t k = 0; k < relays.size(); ++k) {
    net.relay_ids.push_back(net.nodes.size());
    net.nodes.push_back({net.nodes.size(), NodeKind::kRelay, relays[k], radii[k]});
  }
  return net;
}

FlowResult flow(std::optional<std::size_t> hops) { return {0, 1, hops}; }

TEST(FlowHopCounts, DirectEdgeIsOneHop) {
  const Network net = line_network(4.0, {}, {});
  const auto flows = flow_hop_counts(build_graph(net), net);
  ASSERT_EQ(flows.size(), 1u);
  EXPECT_EQ(flows[0].hop_count, 1u);
}

TEST(FlowHopCounts, RelayForcesTwoHops) {
  const Network net = line_network(2.0, {{2.0, 0.0}}, {2.0});
  EXPECT_EQ(flow_hop_counts(build_graph(net), net)[0].hop_count, 2u);
}

TEST(FlowHopCounts, ZeroRelayRadiiUnreachable) {
  const Network net = line_network(2.0, {{2.0, 0.0}}, {0.0});
  EXPECT_FALSE(flow_hop_counts(build_graph(net), net)[0].reachable());
}

TEST(FlowHopCounts, MatchesFloydWarshall) {
  auto rng = derive_stream(21, StreamPurpose::kPlacement, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 4 + uniform_index(rng, 47);
    const Network net = oracle::random_network(rng, n, 10.0, 3.0);
    const auto dist = oracle::floyd_warshall(n, oracle::brute_force_edges(net));
    for (const auto& f : flow_hop_counts(build_graph(net), net)) {
      const std::size_t d = dist[f.source_id][f.terminal_id];
      if (d >= oracle::kInf) {
        EXPECT_FALSE(f.reachable());
      } else {
        ASSERT_TRUE(f.reachable());
        EXPECT_EQ(*f.hop_count, d);
      }
    }
  }
}

TEST(ShortestPath, EndsMatchAndLengthIsHopCount) {
  const Network net = line_network(2.0, {{2.0, 0.0}}, {2.0});
  const auto topo = build_graph(net);
  EXPECT_EQ(shortest_path(topo, 0, 1), (std::vector<std::size_t>{0, 2, 1}));
  const Network cut = line_network(2.0, {{2.0, 0.0}}, {0.0});
  EXPECT_TRUE(shortest_path(build_graph(cut), 0, 1).empty());
}

TEST(SystemGoodput, StoreAndForward) {
  const std::vector<FlowResult> a = {flow(2), flow(std::nullopt)};
  EXPECT_DOUBLE_EQ(system_goodput(a, 910.0), 455.0);
  const std::vector<FlowResult> b = {flow(1), flow(1)};
  EXPECT_DOUBLE_EQ(system_goodput(b, 910.0), 1820.0);
  const std::vector<FlowResult> c = {flow(std::nullopt), flow(std::nullopt)};
  EXPECT_DOUBLE_EQ(system_goodput(c, 910.0), 0.0);
}

TEST(SystemGoodput, AntiMonotoneInHopCount) {
  for (std::size_t h = 1; h < 20; ++h) {
    const std::vector<FlowResult> longer = {flow(h + 1), flow(3)};
    const std::vector<FlowResult> shorter = {flow(h), flow(3)};
    EXPECT_GT(system_goodput(shorter, 910.0), system_goodput(longer, 910.0));
  }
}

TEST(ConnectivityRatio, DirectRatio) {
  const std::vector<FlowResult> half = {flow(3), flow(std::nullopt)};
  EXPECT_DOUBLE_EQ(connectivity_ratio(half), 0.5);
  const std::vector<FlowResult> all = {flow(3), flow(1)};
  EXPECT_DOUBLE_EQ(connectivity_ratio(all), 1.0);
  const std::vector<FlowResult> none = {flow(std::nullopt)};
  EXPECT_DOUBLE_EQ(connectivity_ratio(none), 0.0);
}

TEST(ConnectivityRatio, NeverDecreasesWhenEdgesAreAdded) {
  auto rng = derive_stream(23, StreamPurpose::kPlacement, 0);
  for (int trial = 0; trial < 100; ++trial) {
    Network net = oracle::random_network(rng, 30, 10.0, 2.0);
    const double before = connectivity_ratio(flow_hop_counts(build_graph(net), net));
    // Growing one sender's radius only adds edges.
    const std::size_t id = net.relay_ids[uniform_index(rng, net.relay_ids.size())];
    net.nodes[id].radius += 1.0;
    const double after = connectivity_ratio(flow_hop_counts(build_graph(net), net));
    EXPECT_GE(after, before);
  }
}

TEST(TxPower, PathLossFormula) {
  EXPECT_DOUBLE_EQ(tx_power_mw(3.0), 9.0);
  EXPECT_DOUBLE_EQ(tx_power_mw(0.0), 0.0);
  EXPECT_DOUBLE_EQ(tx_power_mw(1.0), 1.0);
  // Strictly increasing and convex on a grid.
  for (double r = 0.0; r < 5.0; r += 0.25) {
    EXPECT_LT(tx_power_mw(r), tx_power_mw(r + 0.25));
    EXPECT_LE(2.0 * tx_power_mw(r + 0.25), tx_power_mw(r) + tx_power_mw(r + 0.5) + 1e-12);
  }
}

TEST(MeanPowerDbm, AggregatesInMilliwatts) {
  const std::vector<double> full(4, 3.0);
  EXPECT_NEAR(mean_power_dbm(full), 9.54, 0.005);
  EXPECT_DOUBLE_EQ(mean_power_dbm(full), 10.0 * std::log10(9.0));
  const std::vector<double> half = {3.0, 0.0, 3.0, 0.0};
  EXPECT_NEAR(mean_power_dbm(half), 6.53, 0.005);
  const std::vector<double> off(5, 0.0);
  EXPECT_EQ(mean_power_dbm(off), -std::numeric_limits<double>::infinity());
}

TEST(Measure, PhiBoundsAndOneHopIdentity) {
  auto rng = derive_stream(29, StreamPurpose::kPlacement, 0);
  const LinkParams link;
  for (int trial = 0; trial < 200; ++trial) {
    const Network net = oracle::random_network(rng, 20, 6.0, 3.0);
    const auto topo = build_graph(net);
    const auto m = measure(topo, net, link);
    EXPECT_GE(m.phi, 0.0);
    EXPECT_LE(m.phi, 1.0);
    bool all_one_hop = true;
    for (const auto& f : flow_hop_counts(topo, net))
      if (f.reachable() && *f.hop_count != 1) all_one_hop = false;
    if (all_one_hop) {
      EXPECT_DOUBLE_EQ(m.phi, m.connectivity_ratio);
    }
    EXPECT_EQ(m.per_node_power_mw.size(), net.relay_ids.size());
  }
}

}  // namespace
}  // namespace adhocnet
