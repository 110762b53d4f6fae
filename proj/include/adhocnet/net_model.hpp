#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "adhocnet/errors.hpp"
#include "adhocnet/rng.hpp"

namespace adhocnet {

struct RegionSpec {
  double width = 10.0;
  double height = 10.0;

  double area() const { return width * height; }
  bool contains(double x, double y) const {
    return x >= 0.0 && x <= width && y >= 0.0 && y <= height;
  }
};

enum class NodeKind { kSource, kRelay, kTerminal };

inline const char* to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::kSource: return "source";
    case NodeKind::kRelay: return "relay";
    case NodeKind::kTerminal: return "terminal";
  }
  return "?";
}

struct Position {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(const Position& a, const Position& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

struct Node {
  std::size_t id = 0;
  NodeKind kind = NodeKind::kRelay;
  Position position;
  double radius = 0.0;
};

inline bool can_send(NodeKind kind) { return kind != NodeKind::kTerminal; }
inline bool can_receive(NodeKind kind) { return kind != NodeKind::kSource; }

// One source-to-terminal delivery requirement.
struct Flow {
  std::size_t source_id = 0;
  std::size_t terminal_id = 0;
};

// Node population of one episode. Node ids are indices into `nodes`; sources
// come first, then terminals, then relays, so appending relays never renumbers
// the fixed nodes.
struct Network {
  RegionSpec region;
  double max_radius = 0.0;
  std::vector<Node> nodes;
  std::vector<std::size_t> source_ids;
  std::vector<std::size_t> relay_ids;
  std::vector<std::size_t> terminal_ids;
  // terminal_map[h] lists the terminal ids served by source_ids[h].
  std::vector<std::vector<std::size_t>> terminal_map;

  std::vector<Flow> flows() const {
    std::vector<Flow> out;
    for (std::size_t h = 0; h < source_ids.size(); ++h)
      for (std::size_t t : terminal_map[h]) out.push_back({source_ids[h], t});
    return out;
  }

  std::vector<double> relay_radii() const {
    std::vector<double> r;
    r.reserve(relay_ids.size());
    for (std::size_t id : relay_ids) r.push_back(nodes[id].radius);
    return r;
  }
};

// Where the fixed nodes go and how densely relays are sprinkled.
struct PopulationSpec {
  RegionSpec region{10.0, 10.0};
  double density = 0.8;
  double max_radius = 3.0;
  std::size_t num_sources = 2;
  std::size_t terminals_per_source = 1;
  double source_x_frac = 0.05;
  double terminal_x_frac = 0.95;
  // Explicit positions override the evenly spaced edge layout when non-empty.
  std::vector<Position> source_positions;
  std::vector<Position> terminal_positions;
};

namespace detail {

inline std::vector<Position> edge_column(const RegionSpec& region, double x_frac,
                                         std::size_t count) {
  std::vector<Position> out;
  for (std::size_t k = 0; k < count; ++k) {
    const double y = region.height * (static_cast<double>(k) + 1.0) /
                     (static_cast<double>(count) + 1.0);
    out.push_back({region.width * x_frac, y});
  }
  return out;
}

}  // namespace detail

// Draws relay count ~ Poisson(density * area) and uniform relay positions.
// Sources hold the maximum radius for the whole episode; everyone else starts
// at radius 0.
inline Network generate_episode(const PopulationSpec& spec, RandomStream& rng) {
  if (!(spec.region.width > 0.0) || !(spec.region.height > 0.0))
    throw ConfigError("region width and height must be positive");
  if (!(spec.density >= 0.0)) throw ConfigError("density must be non-negative");
  if (spec.num_sources < 1) throw ConfigError("at least one source is required");
  if (spec.terminals_per_source < 1)
    throw ConfigError("each source needs at least one terminal");

  const std::size_t num_terminals = spec.num_sources * spec.terminals_per_source;
  auto sources = spec.source_positions.empty()
                     ? detail::edge_column(spec.region, spec.source_x_frac, spec.num_sources)
                     : spec.source_positions;
  auto terminals = spec.terminal_positions.empty()
                       ? detail::edge_column(spec.region, spec.terminal_x_frac, num_terminals)
                       : spec.terminal_positions;
  if (sources.size() != spec.num_sources)
    throw ConfigError("source position count does not match num_sources");
  if (terminals.size() != num_terminals)
    throw ConfigError("terminal position count does not match num_sources * terminals_per_source");
  for (const auto& p : sources)
    if (!spec.region.contains(p.x, p.y)) throw ConfigError("source position outside the region", ConfigErrorKind::kOutOfRange);
  for (const auto& p : terminals)
    if (!spec.region.contains(p.x, p.y)) throw ConfigError("terminal position outside the region", ConfigErrorKind::kOutOfRange);

  Network net;
  net.region = spec.region;
  net.max_radius = spec.max_radius;
  for (const auto& p : sources) {
    net.source_ids.push_back(net.nodes.size());
    net.nodes.push_back({net.nodes.size(), NodeKind::kSource, p, spec.max_radius});
  }
  net.terminal_map.resize(spec.num_sources);
  for (std::size_t k = 0; k < terminals.size(); ++k) {
    const std::size_t id = net.nodes.size();
    net.terminal_ids.push_back(id);
    net.terminal_map[k / spec.terminals_per_source].push_back(id);
    net.nodes.push_back({id, NodeKind::kTerminal, terminals[k], 0.0});
  }

  const double mean = spec.density * spec.region.area();
  std::size_t relays = 0;
  if (mean > 0.0) relays = std::poisson_distribution<std::size_t>(mean)(rng);
  for (std::size_t k = 0; k < relays; ++k) {
    const double x = uniform(rng, 0.0, spec.region.width);
    const double y = uniform(rng, 0.0, spec.region.height);
    net.relay_ids.push_back(net.nodes.size());
    net.nodes.push_back({net.nodes.size(), NodeKind::kRelay, {x, y}, 0.0});
  }
  return net;
}

enum class MobilityKind { kStatic, kRandomWalk, kUniformRedraw };

struct MobilityModel {
  MobilityKind kind = MobilityKind::kRandomWalk;
  double sigma = 1.0;  // per-axis Gaussian step, random walk only
};

namespace detail {

// Folds a coordinate back into [0, extent] by mirror reflection.
inline double reflect(double v, double extent) {
  if (extent <= 0.0) return 0.0;
  const double period = 2.0 * extent;
  double m = std::fmod(v, period);
  if (m < 0.0) m += period;
  return m <= extent ? m : period - m;
}

}  // namespace detail

// Moves every relay; sources and terminals stay put.
inline void relocate(Network& net, const MobilityModel& mobility, RandomStream& rng) {
  if (mobility.kind == MobilityKind::kStatic) return;
  std::normal_distribution<double> step(0.0, 1.0);
  for (std::size_t id : net.relay_ids) {
    Position& p = net.nodes[id].position;
    if (mobility.kind == MobilityKind::kUniformRedraw) {
      p.x = uniform(rng, 0.0, net.region.width);
      p.y = uniform(rng, 0.0, net.region.height);
    } else if (mobility.sigma > 0.0) {
      p.x = detail::reflect(p.x + mobility.sigma * step(rng), net.region.width);
      p.y = detail::reflect(p.y + mobility.sigma * step(rng), net.region.height);
    }
  }
}

// Directed disk graph at one time step. out[i] holds receivers of i in
// ascending id order.
struct TopologySnapshot {
  std::size_t step = 0;
  std::vector<std::vector<std::size_t>> out;

  std::size_t edge_count() const {
    std::size_t n = 0;
    for (const auto& row : out) n += row.size();
    return n;
  }
  bool has_edge(std::size_t from, std::size_t to) const {
    return std::binary_search(out[from].begin(), out[from].end(), to);
  }
};

// Inclusive disk test; a zero radius reaches nobody.
inline bool in_range(const Node& sender, const Node& receiver) {
  return sender.radius > 0.0 &&
         distance(sender.position, receiver.position) <= sender.radius;
}

inline TopologySnapshot build_graph(const Network& net, std::size_t step = 0) {
  TopologySnapshot topo;
  topo.step = step;
  topo.out.resize(net.nodes.size());
  for (const Node& from : net.nodes) {
    if (!can_send(from.kind)) continue;
    for (const Node& to : net.nodes) {
      if (to.id == from.id || !can_receive(to.kind)) continue;
      if (in_range(from, to)) topo.out[from.id].push_back(to.id);
    }
  }
  return topo;
}

// Number of relays and terminals in range, counting the node itself.
inline std::size_t observe_state(std::size_t node_id, const Network& net) {
  if (node_id >= net.nodes.size() || net.nodes[node_id].kind != NodeKind::kRelay)
    throw std::invalid_argument("observe_state: node " + std::to_string(node_id) +
                                " is not a relay");
  const Node& self = net.nodes[node_id];
  std::size_t count = 1;
  for (const Node& other : net.nodes) {
    if (other.id == node_id || !can_receive(other.kind)) continue;
    if (in_range(self, other)) ++count;
  }
  return count;
}

inline double apply_action(double radius, double action, double max_radius) {
  return std::clamp(radius + action, 0.0, max_radius);
}

}  // namespace adhocnet
