#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "adhocnet/config.hpp"
#include "adhocnet/errors.hpp"

namespace adhocnet {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Shortest text that parses back to the identical double.
inline std::string format_exact(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size())
    throw ConfigError("bad value for " + key + ": '" + text + "' is not a number");
  return v;
}

inline std::uint64_t parse_uint(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw ConfigError("bad value for " + key + ": '" + text +
                      "' is not a non-negative integer");
  return v;
}

inline bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("bad value for " + key + ": '" + text + "' is not a boolean");
}

struct KeySpec {
  std::string name;
  std::string help;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

template <typename T>
KeySpec real_key(std::string name, std::string help, T ExperimentConfig::*member) {
  return {name, std::move(help),
          [name, member](ExperimentConfig& c, const std::string& v) {
            c.*member = parse_double(name, v);
          },
          [member](const ExperimentConfig& c) { return format_exact(c.*member); }};
}

template <typename T>
KeySpec count_key(std::string name, std::string help, T ExperimentConfig::*member) {
  return {name, std::move(help),
          [name, member](ExperimentConfig& c, const std::string& v) {
            c.*member = static_cast<T>(parse_uint(name, v));
          },
          [member](const ExperimentConfig& c) { return std::to_string(c.*member); }};
}

template <typename Get>
KeySpec real_ref_key(std::string name, std::string help, Get ref) {
  return {name, std::move(help),
          [name, ref](ExperimentConfig& c, const std::string& v) { ref(c) = parse_double(name, v); },
          [ref](const ExperimentConfig& c) {
            ExperimentConfig copy = c;
            return format_exact(ref(copy));
          }};
}

template <typename Enum>
KeySpec enum_key(std::string name, std::string help, Enum ExperimentConfig::*member,
                 std::vector<std::pair<std::string, Enum>> choices) {
  return {name, std::move(help),
          [name, member, choices](ExperimentConfig& c, const std::string& v) {
            for (const auto& [label, e] : choices)
              if (label == v) {
                c.*member = e;
                return;
              }
            std::string all;
            for (const auto& ch : choices) all += (all.empty() ? "" : "|") + ch.first;
            throw ConfigError("bad value for " + name + ": '" + v + "' (expected " + all + ")");
          },
          [member](const ExperimentConfig& c) { return std::string(to_string(c.*member)); }};
}

}  // namespace detail

// Every configurable field, in manifest order. CLI flags are the same names
// with '_' replaced by '-'.
inline const std::vector<detail::KeySpec>& config_keys() {
  using namespace detail;
  using C = ExperimentConfig;
  static const std::vector<KeySpec> keys = {
      {"profile", "named preset applied before all other keys (default|paper-literal|custom)",
       [](C& c, const std::string& v) { c.profile = v; },
       [](const C& c) { return c.profile; }},
      real_ref_key("region_width", "region width [length units]",
                   [](C& c) -> double& { return c.region.width; }),
      real_ref_key("region_height", "region height [length units]",
                   [](C& c) -> double& { return c.region.height; }),
      real_key("density", "relay density [relays per unit^2]", &C::density),
      count_key("num_sources", "number of source nodes", &C::num_sources),
      count_key("terminals_per_source", "terminals served by each source",
                &C::terminals_per_source),
      real_key("source_x_frac", "source column position as a fraction of width",
               &C::source_x_frac),
      real_key("terminal_x_frac", "terminal column position as a fraction of width",
               &C::terminal_x_frac),
      real_key("max_radius", "maximum transmission radius [length units]", &C::max_radius),
      count_key("horizon", "time steps per episode", &C::horizon),
      count_key("episodes", "independent episodes", &C::episodes),
      real_key("gamma", "discount factor", &C::gamma),
      real_ref_key("u", "reward offset", [](C& c) -> double& { return c.reward.u; }),
      real_ref_key("omega", "throughput/power weight in [0, 1]",
                   [](C& c) -> double& { return c.reward.omega; }),
      real_ref_key("eta", "throughput scaler", [](C& c) -> double& { return c.reward.eta; }),
      real_ref_key("reward_divisor", "reward scaling divisor",
                   [](C& c) -> double& { return c.reward.divisor; }),
      real_key("state_divisor", "state scaling divisor", &C::state_divisor),
      real_ref_key("eps_start", "initial exploration rate",
                   [](C& c) -> double& { return c.epsilon.start; }),
      real_ref_key("eps_end", "final exploration rate",
                   [](C& c) -> double& { return c.epsilon.end; }),
      {"eps_decay_steps", "steps of linear exploration decay",
       [](C& c, const std::string& v) { c.epsilon.decay_steps = parse_uint("eps_decay_steps", v); },
       [](const C& c) { return std::to_string(c.epsilon.decay_steps); }},
      count_key("target_sync", "target network sync interval [updates]", &C::target_sync),
      real_key("learning_rate", "RMSProp learning rate", &C::learning_rate),
      real_key("rms_decay", "RMSProp squared-gradient decay", &C::rms_decay),
      real_key("rms_epsilon", "RMSProp stabilizer", &C::rms_epsilon),
      real_key("rms_initial", "RMSProp initial squared-gradient average", &C::rms_initial),
      count_key("hidden", "hidden layer width", &C::hidden),
      real_ref_key("link_throughput", "per-link throughput [Mbps]",
                   [](C& c) -> double& { return c.link.throughput_mbps; }),
      real_ref_key("pathloss_eta", "path-loss coefficient",
                   [](C& c) -> double& { return c.link.pathloss_eta; }),
      real_ref_key("pathloss_alpha", "path-loss exponent",
                   [](C& c) -> double& { return c.link.pathloss_alpha; }),
      enum_key("mobility", "relay mobility (static|random_walk|uniform_redraw)", &C::mobility,
               {{"static", MobilityKind::kStatic},
                {"random_walk", MobilityKind::kRandomWalk},
                {"uniform_redraw", MobilityKind::kUniformRedraw}}),
      real_key("mobility_sigma_frac", "random-walk step sigma as a fraction of width",
               &C::mobility_sigma_frac),
      enum_key("step_order", "act_move or move_act", &C::step_order,
               {{"act_move", StepOrder::kActThenMove}, {"move_act", StepOrder::kMoveThenAct}}),
      enum_key("policy", "learned|random|always_max", &C::policy,
               {{"learned", PolicyKind::kLearned},
                {"random", PolicyKind::kRandom},
                {"always_max", PolicyKind::kAlwaysMax}}),
      count_key("seed", "master seed", &C::seed),
      count_key("threads", "worker threads (results do not depend on this)", &C::threads),
      {"record_snapshots", "keep per-step network snapshots",
       [](C& c, const std::string& v) { c.record_snapshots = parse_bool("record_snapshots", v); },
       [](const C& c) { return std::string(c.record_snapshots ? "true" : "false"); }},
      count_key("window_start", "first step of the averaging window", &C::window_start),
      count_key("window_end", "last step of the averaging window", &C::window_end),
  };
  return keys;
}

inline const detail::KeySpec* find_key(const std::string& name) {
  for (const auto& k : config_keys())
    if (k.name == name) return &k;
  return nullptr;
}

// Presets for the spatial scale. "default" reads one length unit as 10 m;
// "paper-literal" keeps meters (and is far too sparse to connect); "custom"
// leaves region unset so it must be given explicitly.
inline void apply_profile(ExperimentConfig& c, const std::string& name) {
  if (name == "default") {
    c.region = {10.0, 10.0};
    c.density = 0.8;
    c.max_radius = 3.0;
  } else if (name == "paper-literal") {
    c.region = {100.0, 100.0};
    c.density = 8e-3;
    c.max_radius = 3.0;
  } else if (name == "custom") {
    c.region = {0.0, 0.0};
  } else {
    throw ConfigError("bad value for profile: '" + name +
                      "' (expected default|paper-literal|custom)");
  }
  c.profile = name;
}

// Parses flat `key = value` text. '#' starts a comment; blank lines are
// ignored. Unknown keys are rejected here so typos surface with a line number.
inline KeyValues parse_key_values(std::istream& is, const std::string& origin = "config") {
  KeyValues kv;
  std::string line;
  for (int lineno = 1; std::getline(is, line); ++lineno) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const std::string text = detail::trim(line);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    const std::string where = origin + ":" + std::to_string(lineno);
    if (eq == std::string::npos)
      throw ConfigError(where + ": expected 'key = value'");
    std::string key = detail::trim(std::string_view(text).substr(0, eq));
    std::string value = detail::trim(std::string_view(text).substr(eq + 1));
    if (!find_key(key))
      throw ConfigError(where + ": unknown key '" + key + "'", ConfigErrorKind::kUnknownKey);
    kv.emplace_back(std::move(key), std::move(value));
  }
  return kv;
}

inline KeyValues read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  return parse_key_values(in, path);
}

// defaults < profile < file keys < flag keys. The profile itself follows the
// same precedence. Validates the result.
inline ExperimentConfig resolve_config(const KeyValues& file_kv, const KeyValues& flag_kv) {
  ExperimentConfig c;
  std::string profile = "default";
  for (const auto* layer : {&file_kv, &flag_kv})
    for (const auto& [k, v] : *layer)
      if (k == "profile") profile = v;
  apply_profile(c, profile);

  bool width_set = false;
  bool height_set = false;
  for (const auto* layer : {&file_kv, &flag_kv}) {
    for (const auto& [k, v] : *layer) {
      if (k == "profile") continue;
      const auto* spec = find_key(k);
      if (!spec) throw ConfigError("unknown key '" + k + "'", ConfigErrorKind::kUnknownKey);
      if (v.empty()) throw ConfigError("missing value for " + k);
      spec->set(c, v);
      width_set = width_set || k == "region_width";
      height_set = height_set || k == "region_height";
    }
  }
  if (profile == "custom" && !(width_set && height_set))
    throw ConfigError("missing region: profile 'custom' requires region_width and region_height",
                      ConfigErrorKind::kMissingRegion);
  validate(c);
  return c;
}

// Every key with its resolved value, one `key = value` line each.
inline void write_config(std::ostream& os, const ExperimentConfig& c) {
  for (const auto& k : config_keys()) os << k.name << " = " << k.get(c) << '\n';
}

}  // namespace adhocnet
