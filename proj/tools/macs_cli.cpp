// Command-line front end for training, comparing and sweeping synchronization
// policies. Exit codes: 0 success, 1 configuration error, 2 runtime error.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "macs/errors.hpp"
#include "macs/experiment.hpp"
#include "macs/scenario.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string checkpoint;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config, "Scenario file (YAML); defaults to Scenario 1");
  cmd->add_option("--seed", flags.seed, "Master seed (training seed, or the single evaluation seed)");
  cmd->add_option("--out", flags.out, "Output directory (overrides experiment.output_dir)");
  cmd->add_option("--checkpoint", flags.checkpoint, "Network checkpoint for the learned policy");
}

macs::ScenarioConfig load(const CommonFlags& flags, bool seed_is_eval) {
  macs::ScenarioConfig cfg = flags.config.empty() ? macs::ScenarioConfig{} : macs::parse_config_file(flags.config);
  if (flags.seed) {
    if (seed_is_eval) {
      cfg.experiment.seeds = {*flags.seed};
    } else {
      cfg.experiment.train_seed = *flags.seed;
    }
  }
  if (!flags.out.empty()) cfg.experiment.output_dir = flags.out;
  if (!flags.checkpoint.empty()) cfg.experiment.checkpoint = flags.checkpoint;
  return cfg;
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw macs::ConfigError("bad sweep value '" + item + "'");
    }
  }
  if (values.empty()) throw macs::ConfigError("--values needs at least one number");
  return values;
}

void report(const std::vector<std::filesystem::path>& files) {
  for (const auto& f : files) std::cout << "wrote " << f.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Budgeted controller-synchronization simulator and MACS trainer"};
  app.require_subcommand(1);

  CommonFlags train_flags, online_flags, compare_flags, sweep_flags, topo_flags;
  auto* train = app.add_subcommand("train", "Pretrain on greedy history, then train online; writes checkpoint + CSV");
  add_common(train, train_flags);
  auto* online = app.add_subcommand("online-train", "Train from scratch with no pretraining");
  add_common(online, online_flags);
  auto* compare = app.add_subcommand("compare", "Evaluate policies on shared environment randomness");
  add_common(compare, compare_flags);
  auto* sweep = app.add_subcommand("sweep", "Repeat the comparison along one scenario axis");
  add_common(sweep, sweep_flags);
  std::string axis_name = "bis_std";
  std::string values_text;
  sweep->add_option("--axis", axis_name, "bis_std | budget_lambda")->check(CLI::IsMember({"bis_std", "budget_lambda"}));
  sweep->add_option("--values", values_text, "Comma-separated axis values, e.g. 5,8,11")->required();
  auto* topo = app.add_subcommand("gen-topology", "Dump the configured network's BIS registry");
  add_common(topo, topo_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*train) {
      const auto cfg = load(train_flags, false);
      report(macs::cmd_train(cfg, cfg.experiment.output_dir));
    } else if (*online) {
      const auto cfg = load(online_flags, false);
      report(macs::cmd_online_train(cfg, cfg.experiment.output_dir));
    } else if (*compare) {
      const auto cfg = load(compare_flags, true);
      report(macs::cmd_compare(cfg, cfg.experiment.output_dir));
    } else if (*sweep) {
      const auto cfg = load(sweep_flags, false);
      const auto axis = macs::parse_sweep_axis(axis_name);
      report(macs::cmd_scenario_sweep(cfg, *axis, parse_values(values_text), cfg.experiment.output_dir));
    } else if (*topo) {
      const auto cfg = load(topo_flags, false);
      report(macs::cmd_gen_topology(cfg, cfg.experiment.output_dir));
    }
  } catch (const macs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const macs::MalformedEdgeList& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const macs::InfeasibleDegreeSequence& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
