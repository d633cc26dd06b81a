#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "macs/env.hpp"
#include "macs/nn.hpp"
#include "macs/rng.hpp"
#include "macs/views.hpp"

namespace macs {

struct EpsilonSchedule {
  double start = 1.0;
  double end = 0.05;
  std::int64_t anneal_steps = 800;
  bool operator==(const EpsilonSchedule&) const = default;

  /// Linear from start to end over anneal_steps, then flat.
  double at(std::int64_t step) const;
};

struct AgentConfig {
  EpsilonSchedule epsilon;
  int minibatch = 32;
  std::size_t replay_capacity = 10'000;
  std::int64_t target_sync_gap = 20;
  double offset_unit = 0.1;
  double learning_rate = 1e-4;
  double gamma = 0.99;
  /// Gradient updates per environment slot once the replay holds a minibatch.
  int updates_per_slot = 1;
  bool operator==(const AgentConfig&) const = default;
};

void validate(const AgentConfig& config);

struct Transition {
  StalenessVector state;
  ActionVector action;
  double reward = 0.0;  // already offset by -rho * iota
  StalenessVector next_state;
  bool terminal = false;
};

/// Fixed-capacity FIFO of transitions.
class ReplayMemory {
 public:
  explicit ReplayMemory(std::size_t capacity);

  void push(Transition t);
  std::size_t size() const { return buffer_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return buffer_.empty(); }
  /// k-th oldest stored transition.
  const Transition& at(std::size_t k) const;
  void clear();

 private:
  std::size_t capacity_;
  std::vector<Transition> buffer_;
  std::size_t oldest_ = 0;
};

/// Stores (s, a, R - rho*iota, s') where rho counts the positive sub-actions.
void store_transition(ReplayMemory& replay, const StalenessVector& state, const ActionVector& action,
                      double reward, const StalenessVector& next_state, double offset_unit,
                      bool terminal = false);

/// Epsilon-greedy selection under a budget. Explores with probability epsilon
/// (a random subset whose size is uniform in 0..budget); otherwise each arm
/// takes its higher-Q sub-action and, when too many arms want to broadcast,
/// only the `budget` arms with the largest Q for broadcasting keep it.
ActionVector select_action(const ForwardOutput& output, int budget, double epsilon, Rng& rng);

/// Exploration branch of select_action.
ActionVector random_budget_action(std::size_t n, int budget, Rng& rng);

/// Greedy part of select_action on raw per-arm Q values (arms x 2).
ActionVector greedy_action(const Eigen::MatrixXd& q_values, int budget);

/// Double-Q targets: sub-action chosen by the online net, valued by the delayed net.
Eigen::VectorXd compute_target(const Transition& transition, const BranchingNet& online,
                               const BranchingNet& delayed, double gamma);

/// Copies online into delayed when step is a multiple of gap. Returns whether it copied.
bool sync_target(const BranchingNet& online, BranchingNet& delayed, std::int64_t step, std::int64_t gap);

struct TrainingRow {
  std::int64_t slot = 0;
  int budget = 0;
  double reward = 0.0;
  double offset_reward = 0.0;
  std::optional<double> loss;
  double epsilon = 0.0;
};

/// The MACS learner: online and delayed branching nets plus replay memory.
class MacsAgent {
 public:
  MacsAgent(const AgentConfig& config, BranchingNet online);

  const AgentConfig& config() const { return config_; }
  BranchingNet& online() { return online_; }
  const BranchingNet& online() const { return online_; }
  const BranchingNet& delayed() const { return delayed_; }
  ReplayMemory& replay() { return replay_; }
  const ReplayMemory& replay() const { return replay_; }
  std::int64_t train_steps() const { return train_steps_; }
  std::int64_t target_syncs() const { return target_syncs_; }

  ActionVector act(const StalenessVector& state, int budget, double epsilon, Rng& rng) const;

  /// Loss of one minibatch given by replay indices, plus one Adam step.
  double train_on_batch(std::span<const std::size_t> indices);
  /// Mean loss over the given replay indices without updating anything.
  double batch_loss(std::span<const std::size_t> indices) const;

  /// Uniform minibatch with replacement, one update, then target sync.
  double train_step(Rng& rng);

  /// `steps` train_steps with no environment interaction.
  void pretrain(std::int64_t steps, Rng& rng);

 private:
  void build_batch(std::span<const std::size_t> indices, Eigen::MatrixXd& inputs, Eigen::MatrixXi& chosen,
                   Eigen::MatrixXd& targets) const;

  AgentConfig config_;
  BranchingNet online_;
  BranchingNet delayed_;
  ReplayMemory replay_;
  std::int64_t train_steps_ = 0;
  std::int64_t target_syncs_ = 0;
};

/// Runs one episode of the training loop from the environment's current state:
/// pick an action, step, store the offset transition, train, sync the target.
std::vector<TrainingRow> run_training(SyncEnvironment& env, MacsAgent& agent, Rng& rng);

using ActionFn = std::function<ActionVector(const StalenessVector&, int budget)>;

/// Rolls `env` forward with a fixed policy and stores `count` transitions,
/// resetting the environment whenever its episode ends.
void collect_history(SyncEnvironment& env, const ActionFn& policy, std::size_t count, double offset_unit,
                     ReplayMemory& replay);

}  // namespace macs
