// Command-line front end for the relay activation simulator.
//
//   adhocnet run             full experiment, metrics + curves + summary
//   adhocnet episode         one episode with radius heatmap and snapshots
//   adhocnet baseline        experiment under the random or always-max policy
//   adhocnet validate-config resolve and print the configuration
//
// Every config key is also a flag (`gamma` -> `--gamma`). Flags override
// `--config` file keys, which override profile defaults.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "adhocnet/adhocnet.hpp"

namespace fs = std::filesystem;
using namespace adhocnet;

namespace {

enum ExitCode { kOk = 0, kOther = 1, kConfig = 2, kIo = 3, kDiagnostic = 4 };

struct CommonOptions {
  std::string config_file;
  std::string out_dir;
  bool paper_literal = false;
  std::vector<std::optional<std::string>> values = std::vector<std::optional<std::string>>(
      config_keys().size());
};

std::string flag_name(const std::string& key) {
  std::string f = key;
  for (char& c : f)
    if (c == '_') c = '-';
  return "--" + f;
}

void add_common(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("-c,--config", opt.config_file, "key = value config file");
  cmd->add_option("-o,--out", opt.out_dir,
                  "output directory (default: $ADHOCNET_OUT_DIR or ./adhocnet-out)");
  cmd->add_flag("--paper-literal", opt.paper_literal,
                "shorthand for --profile paper-literal (meters, max radius 3.0)");
  const auto& keys = config_keys();
  for (std::size_t i = 0; i < keys.size(); ++i)
    cmd->add_option(flag_name(keys[i].name), opt.values[i], keys[i].help)->group("Config");
}

ExperimentConfig resolve(const CommonOptions& opt) {
  KeyValues file_kv;
  if (!opt.config_file.empty()) file_kv = read_config_file(opt.config_file);
  KeyValues flag_kv;
  if (opt.paper_literal) flag_kv.emplace_back("profile", "paper-literal");
  const auto& keys = config_keys();
  for (std::size_t i = 0; i < keys.size(); ++i)
    if (opt.values[i]) flag_kv.emplace_back(keys[i].name, *opt.values[i]);
  return resolve_config(file_kv, flag_kv);
}

fs::path output_dir(const CommonOptions& opt) {
  std::string dir = opt.out_dir;
  if (dir.empty()) {
    const char* env = std::getenv("ADHOCNET_OUT_DIR");
    dir = env && *env ? env : "adhocnet-out";
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
  return dir;
}

void print_summary(const AggregateReport& rep) { write_summary(std::cout, rep); }

int cmd_experiment(const CommonOptions& opt, const std::string& command,
                   std::optional<PolicyKind> forced_policy) {
  ExperimentConfig config = resolve(opt);
  if (forced_policy) config.policy = *forced_policy;
  const fs::path dir = output_dir(opt);
  const auto manifest = (dir / "manifest.cfg").string();
  const auto metrics = (dir / "metrics.csv").string();
  const auto curves = (dir / "curves.csv").string();
  const auto summary = (dir / "summary.txt").string();
  write_manifest(config, command, {metrics, curves, summary}, manifest);

  std::vector<EpisodeTrace> traces;
  const AggregateReport rep = run_experiment(config, &traces);
  write_metrics_csv(traces, metrics);
  write_curves_csv(rep, curves);
  write_summary(rep, summary);
  print_summary(rep);
  return kOk;
}

std::vector<std::size_t> parse_steps(const std::string& text) {
  std::vector<std::size_t> steps;
  std::stringstream ss(text);
  for (std::string tok; std::getline(ss, tok, ',');) {
    if (tok.empty()) continue;
    steps.push_back(detail::parse_uint("snapshot-steps", detail::trim(tok)));
  }
  return steps;
}

int cmd_episode(const CommonOptions& opt, std::size_t index, const std::string& snapshot_steps,
                const std::string& checkpoint_dir) {
  ExperimentConfig config = resolve(opt);
  config.record_snapshots = true;
  config.episodes = 1;
  const auto steps = parse_steps(snapshot_steps);
  for (std::size_t s : steps)
    if (s < 1 || s > config.horizon)
      throw ConfigError("snapshot step " + std::to_string(s) + " outside 1.." +
                            std::to_string(config.horizon),
                        ConfigErrorKind::kOutOfRange);

  const fs::path dir = output_dir(opt);
  std::vector<std::string> artifacts = {(dir / "metrics.csv").string(),
                                        (dir / "radius_heatmap.csv").string(),
                                        (dir / "summary.txt").string()};
  for (std::size_t s : steps)
    artifacts.push_back((dir / ("snapshot_step" + std::to_string(s) + ".txt")).string());
  write_manifest(config, "episode --episode-index " + std::to_string(index), artifacts,
                 (dir / "manifest.cfg").string());

  std::vector<EpisodeTrace> traces{run_episode(config, episode_seed(config.seed, index))};
  const AggregateReport rep = aggregate(config, traces);
  write_metrics_csv(traces, artifacts[0]);
  write_radius_heatmap_csv(traces[0], artifacts[1]);
  write_summary(rep, artifacts[2]);
  for (std::size_t k = 0; k < steps.size(); ++k)
    write_snapshot(traces[0], steps[k], artifacts[3 + k]);
  if (!checkpoint_dir.empty()) {
    std::error_code ec;
    fs::create_directories(checkpoint_dir, ec);
    if (ec) throw IoError("cannot create checkpoint directory " + checkpoint_dir);
    const auto& relays = traces[0].final_networks;
    for (std::size_t k = 0; k < relays.size(); ++k) {
      const auto path = (fs::path(checkpoint_dir) / ("relay" + std::to_string(k) + ".qnet")).string();
      std::ofstream out(path, std::ios::binary | std::ios::trunc);
      if (!out) throw IoError("cannot open " + path + " for writing");
      save_params(out, relays[k]);
    }
  }
  print_summary(rep);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relay activation simulator for multi-hop ad hoc networks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  CommonOptions run_opt;
  auto* run = app.add_subcommand("run", "run the full experiment");
  add_common(run, run_opt);

  CommonOptions ep_opt;
  std::size_t ep_index = 0;
  std::string snapshot_steps = "30,60,120,150";
  std::string checkpoint_dir;
  auto* episode = app.add_subcommand("episode", "run one episode with heatmap and snapshots");
  add_common(episode, ep_opt);
  episode->add_option("--episode-index", ep_index, "episode index used to derive the seed");
  episode->add_option("--snapshot-steps", snapshot_steps, "comma-separated steps to export");
  episode->add_option("--checkpoint-dir", checkpoint_dir,
                      "directory for final per-relay network parameters");

  CommonOptions base_opt;
  std::string baseline_kind = "random";
  auto* baseline = app.add_subcommand("baseline", "run a baseline policy experiment");
  add_common(baseline, base_opt);
  baseline->add_option("--kind", baseline_kind, "random or always_max")
      ->check(CLI::IsMember({"random", "always_max"}));

  CommonOptions val_opt;
  auto* validate_cmd = app.add_subcommand("validate-config", "resolve and print the config");
  add_common(validate_cmd, val_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*run) return cmd_experiment(run_opt, "run", std::nullopt);
    if (*episode) return cmd_episode(ep_opt, ep_index, snapshot_steps, checkpoint_dir);
    if (*baseline)
      return cmd_experiment(base_opt, "baseline --kind " + baseline_kind,
                            baseline_kind == "random" ? PolicyKind::kRandom
                                                      : PolicyKind::kAlwaysMax);
    if (*validate_cmd) {
      write_config(std::cout, resolve(val_opt));
      return kOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
    return kConfig;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kIo;
  } catch (const DiagnosticError& e) {
    std::cerr << "diagnostic failure: " << e.what() << '\n';
    return kDiagnostic;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kOther;
  }
  return kOther;
}
