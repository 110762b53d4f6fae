#pragma once

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "adhocnet/config_io.hpp"
#include "adhocnet/engine.hpp"
#include "adhocnet/errors.hpp"
#include "adhocnet/metrics.hpp"

namespace adhocnet {

inline constexpr const char* kToolVersion = "0.1.0";

// 6 significant digits; infinities as "inf" / "-inf".
inline std::string fmt6(double v) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

namespace detail {

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  return out;
}

inline void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("write failed for " + path);
}

inline double parse_field(const std::string& s) {
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  return std::stod(s);
}

}  // namespace detail

inline constexpr const char* kMetricsHeader =
    "episode,step,goodput_mbps,phi,connectivity_ratio,mean_power_dbm";

// One row per (episode, step).
inline void write_metrics_csv(std::ostream& os, const std::vector<EpisodeTrace>& traces) {
  os << kMetricsHeader << '\n';
  for (std::size_t e = 0; e < traces.size(); ++e) {
    for (const auto& rec : traces[e].steps) {
      const auto& m = rec.metrics;
      os << e << ',' << rec.step << ',' << fmt6(m.goodput_mbps) << ',' << fmt6(m.phi) << ','
         << fmt6(m.connectivity_ratio) << ',' << fmt6(m.mean_power_dbm) << '\n';
    }
  }
}

inline void write_metrics_csv(const std::vector<EpisodeTrace>& traces, const std::string& path) {
  auto out = detail::open_out(path);
  write_metrics_csv(out, traces);
  detail::finish(out, path);
}

struct MetricsRow {
  std::size_t episode = 0;
  std::size_t step = 0;
  double goodput_mbps = 0.0;
  double phi = 0.0;
  double connectivity_ratio = 0.0;
  double mean_power_dbm = 0.0;
};

inline std::vector<MetricsRow> read_metrics_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kMetricsHeader)
    throw IoError("metrics csv: missing or unexpected header");
  std::vector<MetricsRow> rows;
  while (std::getline(is, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 6) throw IoError("metrics csv: expected 6 columns in '" + line + "'");
    rows.push_back({std::stoul(f[0]), std::stoul(f[1]), detail::parse_field(f[2]),
                    detail::parse_field(f[3]), detail::parse_field(f[4]),
                    detail::parse_field(f[5])});
  }
  return rows;
}

// Per-step means across episodes, for plotting curves.
inline void write_curves_csv(const AggregateReport& rep, const std::string& path) {
  auto out = detail::open_out(path);
  out << "step,goodput_mbps,phi,connectivity_ratio,mean_power_dbm\n";
  for (std::size_t t = 0; t < rep.step_goodput_mbps.size(); ++t)
    out << t + 1 << ',' << fmt6(rep.step_goodput_mbps[t]) << ',' << fmt6(rep.step_phi[t]) << ','
        << fmt6(rep.step_connectivity[t]) << ',' << fmt6(rep.step_power_dbm[t]) << '\n';
  detail::finish(out, path);
}

inline void write_summary(std::ostream& os, const AggregateReport& rep) {
  os << "episodes = " << rep.episodes << '\n'
     << "window = " << rep.window_start << '-' << rep.window_end << '\n'
     << "connectivity_ratio = " << fmt6(rep.connectivity) << '\n'
     << "goodput_mbps = " << fmt6(rep.goodput_mbps) << '\n'
     << "power_dbm = " << fmt6(rep.power_dbm) << '\n'
     << "final_extreme_fraction = " << fmt6(rep.extreme_fraction) << '\n';
}

inline void write_summary(const AggregateReport& rep, const std::string& path) {
  auto out = detail::open_out(path);
  write_summary(out, rep);
  detail::finish(out, path);
}

// Rows are relays, columns are steps 1..T. Cell (i, t) is the radius relay i
// holds when step t begins, so the first column is the all-zero start.
inline void write_radius_heatmap_csv(std::ostream& os, const EpisodeTrace& trace) {
  for (std::size_t k = 0; k < trace.num_relays; ++k) {
    for (std::size_t t = 0; t < trace.steps.size(); ++t) {
      if (t > 0) os << ',';
      os << fmt6(t == 0 ? 0.0 : trace.steps[t - 1].radii[k]);
    }
    os << '\n';
  }
}

inline void write_radius_heatmap_csv(const EpisodeTrace& trace, const std::string& path) {
  auto out = detail::open_out(path);
  write_radius_heatmap_csv(out, trace);
  detail::finish(out, path);
}

// Plain-text network snapshot:
//
//   # adhocnet snapshot step=<t>
//   # nodes: id,kind,x,y,radius
//   <one line per node>
//   # edges: src,dst
//   <one line per directed edge>
//   # paths: path,flow,src,dst
//   <shortest-path edges of each reachable flow>
inline void write_snapshot(std::ostream& os, const EpisodeTrace& trace, std::size_t step) {
  if (trace.networks.empty())
    throw std::out_of_range("snapshot recording was not enabled for this trace");
  if (step < 1 || step > trace.networks.size())
    throw std::out_of_range("snapshot step " + std::to_string(step) + " outside 1.." +
                            std::to_string(trace.networks.size()));
  const Network& net = trace.networks[step - 1];
  const TopologySnapshot& topo = trace.topologies[step - 1];
  os << "# adhocnet snapshot step=" << step << '\n';
  os << "# nodes: id,kind,x,y,radius\n";
  for (const Node& n : net.nodes)
    os << n.id << ',' << to_string(n.kind) << ',' << fmt6(n.position.x) << ','
       << fmt6(n.position.y) << ',' << fmt6(n.radius) << '\n';
  os << "# edges: src,dst\n";
  for (std::size_t i = 0; i < topo.out.size(); ++i)
    for (std::size_t j : topo.out[i]) os << i << ',' << j << '\n';
  os << "# paths: path,flow,src,dst\n";
  const auto flows = net.flows();
  for (std::size_t f = 0; f < flows.size(); ++f) {
    const auto path = shortest_path(topo, flows[f].source_id, flows[f].terminal_id);
    for (std::size_t h = 1; h < path.size(); ++h)
      os << "path," << f << ',' << path[h - 1] << ',' << path[h] << '\n';
  }
}

inline void write_snapshot(const EpisodeTrace& trace, std::size_t step, const std::string& path) {
  auto out = detail::open_out(path);
  write_snapshot(out, trace, step);
  detail::finish(out, path);
}

// Resolved config preceded by comment lines for version, command and
// artifacts. Feeding the file back through --config reproduces the run.
inline void write_manifest(const ExperimentConfig& config, const std::string& command,
                           const std::vector<std::string>& artifacts, const std::string& path) {
  auto out = detail::open_out(path);
  out << "# adhocnet run manifest\n"
      << "# version " << kToolVersion << '\n'
      << "# command " << command << '\n';
  for (const auto& a : artifacts) out << "# artifact " << a << '\n';
  write_config(out, config);
  detail::finish(out, path);
}

}  // namespace adhocnet
