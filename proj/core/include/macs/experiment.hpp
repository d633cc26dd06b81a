#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "macs/agent.hpp"
#include "macs/nn.hpp"
#include "macs/scenario.hpp"

namespace macs {

/// Column layouts of the CSV outputs, in order.
inline constexpr const char* kTrainingCsvHeader = "slot,budget,reward,offset_reward,loss,epsilon";
inline constexpr const char* kCompareCsvHeader =
    "seed,policy,slot,budget,broadcasts,avg_latency,reward,accumulated_reward,latency_reduction,"
    "accumulated_reduction";
inline constexpr const char* kSummaryCsvHeader =
    "policy,mean_latency,mean_accumulated_reduction,mean_accumulated_reward";
inline constexpr const char* kSweepCsvHeader =
    "axis,value,policy,mean_latency,mean_accumulated_reduction,mean_accumulated_reward";

EpisodeConfig episode_config(const ScenarioConfig& config, std::int64_t horizon, std::uint64_t seed);

struct TrainResult {
  BranchingNet net;
  std::vector<TrainingRow> rows;
};

/// Optional greedy-history pretraining followed by one training episode of
/// `training.horizon` slots, all derived from `seed`.
TrainResult train_agent(const ScenarioConfig& config, std::uint64_t seed, bool pretrain = true);

struct PolicySlot {
  std::uint64_t seed = 0;
  PolicyKind policy = PolicyKind::kNoSync;
  std::int64_t slot = 0;
  int budget = 0;
  int broadcasts = 0;
  double avg_latency = 0.0;
  double reward = 0.0;
  double accumulated_reward = 0.0;     // sum of gamma^t * reward
  double latency_reduction = 0.0;      // no-sync latency minus this policy's latency
  double accumulated_reduction = 0.0;  // running sum of latency_reduction
};

struct PolicySummary {
  PolicyKind policy = PolicyKind::kNoSync;
  double mean_latency = 0.0;
  double mean_accumulated_reduction = 0.0;
  double mean_accumulated_reward = 0.0;
};

struct CompareResult {
  std::vector<PolicySlot> rows;
  std::vector<PolicySummary> summary;

  const PolicySummary& of(PolicyKind kind) const;
};

/// Rolls every policy over `experiment.eval_horizon` slots for each seed, all
/// policies of one seed sharing the environment's randomness.
CompareResult compare_policies(const ScenarioConfig& config, const std::vector<std::uint64_t>& seeds,
                               const BranchingNet* learned);

std::string training_csv(const std::vector<TrainingRow>& rows);
std::string compare_csv(const CompareResult& result);
std::string summary_csv(const CompareResult& result);

enum class SweepAxis { kBisStd, kBudgetLambda };
std::optional<SweepAxis> parse_sweep_axis(const std::string& name);
std::string to_string(SweepAxis axis);

/// Copy of the config with one axis set to `value`. The BIS std axis switches
/// the value distribution to Gaussian, keeping an existing Gaussian mean.
ScenarioConfig with_axis(const ScenarioConfig& config, SweepAxis axis, double value);

struct SweepPoint {
  double value = 0.0;
  CompareResult result;
};

/// Repeats the comparison per axis value. The learned policy uses `learned`
/// when given, otherwise a network trained on that axis value.
std::vector<SweepPoint> scenario_sweep(const ScenarioConfig& config, SweepAxis axis, const std::vector<double>& values,
                                       const BranchingNet* learned);

std::string sweep_csv(SweepAxis axis, const std::vector<SweepPoint>& points);

/// Structure dump of the configured network: one row per BIS.
std::string topology_csv(const ScenarioConfig& config);

// File-writing front ends used by the CLI. Each returns the files written.
std::vector<std::filesystem::path> cmd_train(const ScenarioConfig& config, const std::filesystem::path& out_dir);
std::vector<std::filesystem::path> cmd_online_train(const ScenarioConfig& config,
                                                    const std::filesystem::path& out_dir);
std::vector<std::filesystem::path> cmd_compare(const ScenarioConfig& config, const std::filesystem::path& out_dir);
std::vector<std::filesystem::path> cmd_scenario_sweep(const ScenarioConfig& config, SweepAxis axis,
                                                      const std::vector<double>& values,
                                                      const std::filesystem::path& out_dir);
std::vector<std::filesystem::path> cmd_gen_topology(const ScenarioConfig& config,
                                                    const std::filesystem::path& out_dir);

}  // namespace macs
