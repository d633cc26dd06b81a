#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "macs/agent.hpp"
#include "macs/baselines.hpp"
#include "macs/dynamics.hpp"
#include "macs/env.hpp"

namespace macs {

struct NetSection {
  int trunk_hidden1 = 512;
  int trunk_hidden2 = 256;
  int head_hidden = 128;
  /// Multiplier applied to staleness counts; 0 selects 1 / training horizon.
  double input_scale = 0.02;
  /// Upper clip on each scaled input; 0 disables clipping.
  double input_cap = 1.0;
  bool operator==(const NetSection&) const = default;
};

struct TrainingSection {
  std::int64_t horizon = 2000;
  double epsilon_anneal_fraction = 0.4;
  std::int64_t pretrain_transitions = 1000;
  std::int64_t pretrain_steps = 1000;
  PolicyKind history_policy = PolicyKind::kGreedyMinMax;
  bool operator==(const TrainingSection&) const = default;
};

struct ExperimentSection {
  std::vector<PolicyKind> policies{PolicyKind::kFullSync, PolicyKind::kNoSync, PolicyKind::kGreedyMinMax,
                                   PolicyKind::kAntiEntropy, PolicyKind::kLearned};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::uint64_t train_seed = 0;
  std::int64_t eval_horizon = 500;
  std::string output_dir = "out";
  std::string checkpoint;
  bool operator==(const ExperimentSection&) const = default;
};

/// Every knob of one experiment. Default-constructed values are Scenario 1:
/// 8 domains, 10 services installed twice, Poisson(3) budgets, uniform BIS values.
struct ScenarioConfig {
  NetworkConfig network = default_network();
  DynamicsConfig dynamics;
  AgentConfig agent;
  NetSection net;
  TrainingSection training;
  ExperimentSection experiment;

  static NetworkConfig default_network();
  bool operator==(const ScenarioConfig&) const = default;
};

/// Parses the YAML scenario format; missing keys keep their defaults.
/// Throws ParseError (with line numbers) or UnknownKey.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig parse_config_file(const std::filesystem::path& path);

std::string serialize_config(const ScenarioConfig& config);

/// Cross-field checks; throws ConfigError.
void validate(const ScenarioConfig& config);

/// Agent settings with the epsilon schedule resolved for a training horizon.
AgentConfig resolved_agent(const ScenarioConfig& config, std::int64_t horizon);

NetShape resolved_shape(const ScenarioConfig& config, std::size_t arms);
double resolved_input_scale(const ScenarioConfig& config);
double resolved_input_cap(const ScenarioConfig& config);

}  // namespace macs
