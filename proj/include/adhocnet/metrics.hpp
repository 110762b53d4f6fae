#pragma once

#include <cmath>
#include <cstddef>
#include <deque>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "adhocnet/net_model.hpp"

namespace adhocnet {

struct FlowResult {
  std::size_t source_id = 0;
  std::size_t terminal_id = 0;
  std::optional<std::size_t> hop_count;  // empty when unreachable

  bool reachable() const { return hop_count.has_value(); }
};

struct StepMetrics {
  double goodput_mbps = 0.0;
  double phi = 0.0;  // goodput normalized by flows * link throughput
  double connectivity_ratio = 0.0;
  double mean_power_dbm = -std::numeric_limits<double>::infinity();
  double mean_power_mw = 0.0;
  std::vector<double> per_node_power_mw;  // one entry per relay, relay_ids order
};

// Path-loss constants. Transmit power is eta * d^alpha mW.
struct LinkParams {
  double throughput_mbps = 910.0;
  double pathloss_eta = 1.0;
  double pathloss_alpha = 2.0;
};

// BFS predecessor tree from `source`. pred[v] == v marks the root, SIZE_MAX
// marks unvisited nodes.
inline std::vector<std::size_t> bfs_tree(const TopologySnapshot& topo, std::size_t source) {
  constexpr std::size_t kUnseen = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> pred(topo.out.size(), kUnseen);
  std::deque<std::size_t> queue{source};
  pred[source] = source;
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (std::size_t v : topo.out[u]) {
      if (pred[v] != kUnseen) continue;
      pred[v] = u;
      queue.push_back(v);
    }
  }
  return pred;
}

// Node sequence of one shortest path source -> terminal; empty if unreachable.
inline std::vector<std::size_t> shortest_path(const TopologySnapshot& topo, std::size_t source,
                                              std::size_t terminal) {
  const auto pred = bfs_tree(topo, source);
  if (pred[terminal] == std::numeric_limits<std::size_t>::max()) return {};
  std::vector<std::size_t> path{terminal};
  while (path.back() != source) path.push_back(pred[path.back()]);
  return {path.rbegin(), path.rend()};
}

inline std::vector<FlowResult> flow_hop_counts(const TopologySnapshot& topo, const Network& net) {
  std::vector<FlowResult> results;
  for (std::size_t h = 0; h < net.source_ids.size(); ++h) {
    const std::size_t src = net.source_ids[h];
    const auto pred = bfs_tree(topo, src);
    for (std::size_t t : net.terminal_map[h]) {
      FlowResult r{src, t, std::nullopt};
      if (pred[t] != std::numeric_limits<std::size_t>::max()) {
        std::size_t hops = 0;
        for (std::size_t v = t; v != src; v = pred[v]) ++hops;
        r.hop_count = hops;
      }
      results.push_back(r);
    }
  }
  return results;
}

// Store-and-forward delivery: each reachable flow contributes link / hops.
inline double system_goodput(std::span<const FlowResult> flows, double link_throughput_mbps) {
  double total = 0.0;
  for (const auto& f : flows)
    if (f.reachable()) total += link_throughput_mbps / static_cast<double>(*f.hop_count);
  return total;
}

inline double connectivity_ratio(std::span<const FlowResult> flows) {
  if (flows.empty()) return 0.0;
  std::size_t reached = 0;
  for (const auto& f : flows) reached += f.reachable() ? 1 : 0;
  return static_cast<double>(reached) / static_cast<double>(flows.size());
}

inline double tx_power_mw(double radius, double eta = 1.0, double alpha = 2.0) {
  return eta * std::pow(radius, alpha);
}

inline double mw_to_dbm(double mw) {
  if (mw <= 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(mw);
}

inline double mean_power_mw(std::span<const double> radii, const LinkParams& link = {}) {
  if (radii.empty()) return 0.0;
  double sum = 0.0;
  for (double r : radii) sum += tx_power_mw(r, link.pathloss_eta, link.pathloss_alpha);
  return sum / static_cast<double>(radii.size());
}

// dBm of the arithmetic-mean milliwatt power; -inf when nobody transmits.
inline double mean_power_dbm(std::span<const double> radii, const LinkParams& link = {}) {
  return mw_to_dbm(mean_power_mw(radii, link));
}

inline StepMetrics measure(const TopologySnapshot& topo, const Network& net,
                           const LinkParams& link) {
  const auto flows = flow_hop_counts(topo, net);
  const auto radii = net.relay_radii();
  StepMetrics m;
  m.goodput_mbps = system_goodput(flows, link.throughput_mbps);
  m.phi = flows.empty() ? 0.0
                        : m.goodput_mbps /
                              (static_cast<double>(flows.size()) * link.throughput_mbps);
  m.connectivity_ratio = connectivity_ratio(flows);
  for (double r : radii)
    m.per_node_power_mw.push_back(tx_power_mw(r, link.pathloss_eta, link.pathloss_alpha));
  m.mean_power_mw = mean_power_mw(radii, link);
  m.mean_power_dbm = mw_to_dbm(m.mean_power_mw);
  return m;
}

}  // namespace adhocnet
