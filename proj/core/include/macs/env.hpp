#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "macs/dynamics.hpp"
#include "macs/pathing.hpp"
#include "macs/rng.hpp"
#include "macs/topology.hpp"
#include "macs/views.hpp"

namespace macs {

/// Network structure. Built from its own seed so that every run seed (and
/// every trained checkpoint) sees the same graph, placement and BIS indexing.
struct NetworkConfig {
  TopologySpec topology = EdgeListSpec{};
  PlacementSpec services;
  std::uint64_t seed = 0;
  bool operator==(const NetworkConfig&) const = default;
};

struct EpisodeConfig {
  NetworkConfig network;
  DynamicsConfig dynamics;
  std::int64_t horizon = 500;
  double gamma = 0.99;
  std::uint64_t seed = 0;
};

/// Fixed structure of one simulated network.
struct Network {
  DomainGraph graph;
  ServicePlacement placement;
  BisRegistry registry;
};

Network build_network(const NetworkConfig& config);

struct SlotOutcome {
  double reward = 0.0;
  double avg_latency_after = 0.0;
  double avg_latency_baseline = 0.0;
  int budget = 0;
  StalenessVector next_state;
  bool terminal = false;
};

/// Average true latency of the given requests when each origin controller
/// routes from its own view.
double average_true_latency(const Network& network, const std::vector<ControllerView>& views,
                            std::span<const ServiceRequest> requests, const TrueNetworkState& truth);

/// One synchronization time slot per step: broadcast, re-path, record
/// latencies against the counterfactual of not acting, then evolve the network.
///
/// All environment randomness (initial values, budgets, requests, value
/// changes) comes from one stream whose consumption never depends on the
/// actions taken.
class SyncEnvironment {
 public:
  explicit SyncEnvironment(EpisodeConfig config);

  /// Rebuilds dynamics state for `config.seed` (or the override) and returns s_0.
  const StalenessVector& reset();
  const StalenessVector& reset(std::uint64_t seed);

  /// Budget for the current slot; stable across calls within the slot.
  int current_budget() const;

  /// Budget-checked step.
  SlotOutcome step(const ActionVector& action);
  /// Step for budget-exempt policies (full sync).
  SlotOutcome step_unbounded(const ActionVector& action);

  const Network& network() const { return network_; }
  const EpisodeConfig& config() const { return config_; }
  std::size_t bis_count() const { return network_.registry.size(); }
  std::int64_t slot() const { return truth_.slot; }
  bool finished() const { return truth_.slot >= config_.horizon; }
  const StalenessVector& state() const { return staleness_; }
  const TrueNetworkState& truth() const { return truth_; }
  const std::vector<ControllerView>& views() const { return views_; }
  std::span<const double> change_probabilities() const { return change_prob_; }

 private:
  SlotOutcome advance(const ActionVector& action, std::optional<int> budget);

  EpisodeConfig config_;
  Network network_;
  std::vector<double> change_prob_;
  RequestSampler requests_;
  Rng rng_;
  TrueNetworkState truth_;
  std::vector<ControllerView> views_;
  StalenessVector staleness_;
  int budget_ = 0;
};

/// Sum over t = 1..T of gamma^t * r_t.
double discounted_return(std::span<const double> rewards, double gamma);

}  // namespace macs
