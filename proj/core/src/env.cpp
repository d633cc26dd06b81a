#include "macs/env.hpp"

#include <stdexcept>
#include <string>

#include "macs/errors.hpp"

namespace macs {

Network build_network(const NetworkConfig& config) {
  Rng rng = derive_rng(config.seed, Stream::kTopology);
  Network net;
  net.graph = build_topology(config.topology, rng);
  net.placement = place_services(net.graph, config.services, rng);
  net.registry = enumerate_bises(net.graph, net.placement);
  return net;
}

double average_true_latency(const Network& network, const std::vector<ControllerView>& views,
                            std::span<const ServiceRequest> requests, const TrueNetworkState& truth) {
  if (requests.empty()) return 0.0;
  std::vector<std::optional<RouteTree>> trees(views.size());
  double total = 0.0;
  for (const ServiceRequest& req : requests) {
    const ControllerView& view = views.at(req.origin_domain);
    auto& tree = trees[req.origin_domain];
    if (!tree) tree.emplace(network.graph, network.registry, view.believed_values, req.origin_domain);
    ServicePath path = construct_service_path(*tree, network.registry, network.placement, view.believed_values, req);
    total += evaluate_true_latency(path, network.registry, truth);
  }
  return total / static_cast<double>(requests.size());
}

SyncEnvironment::SyncEnvironment(EpisodeConfig config)
    : config_(std::move(config)),
      network_(build_network(config_.network)),
      change_prob_(macs::change_probabilities(config_.dynamics, network_.registry.size())),
      requests_(network_.graph.domain_count, network_.placement.service_count, config_.dynamics) {
  validate(config_.dynamics);
  if (config_.horizon < 1) throw std::invalid_argument("horizon must be at least 1");
  if (!(config_.gamma > 0.0 && config_.gamma < 1.0)) throw std::invalid_argument("gamma must be in (0,1)");
  reset();
}

const StalenessVector& SyncEnvironment::reset() { return reset(config_.seed); }

const StalenessVector& SyncEnvironment::reset(std::uint64_t seed) {
  config_.seed = seed;
  rng_ = derive_rng(seed, Stream::kEnvironment);
  const std::size_t n = network_.registry.size();
  truth_ = initial_state(n, config_.dynamics, rng_);
  views_ = synchronized_views(network_.graph.domain_count, truth_);
  staleness_ = StalenessVector{std::vector<std::int64_t>(n, 0)};
  budget_ = sample_budget(config_.dynamics.budget_mean, rng_);
  return staleness_;
}

int SyncEnvironment::current_budget() const {
  if (finished()) throw EpisodeFinished("episode finished at slot " + std::to_string(truth_.slot));
  return budget_;
}

SlotOutcome SyncEnvironment::step(const ActionVector& action) { return advance(action, current_budget()); }

SlotOutcome SyncEnvironment::step_unbounded(const ActionVector& action) {
  current_budget();
  return advance(action, std::nullopt);
}

SlotOutcome SyncEnvironment::advance(const ActionVector& action, std::optional<int> budget) {
  const std::size_t n = network_.registry.size();
  if (action.size() != n) throw std::invalid_argument("action length does not match BIS count");
  if (budget && action.count() > *budget) {
    throw BudgetExceeded("action broadcasts " + std::to_string(action.count()) + " BISes with budget " +
                         std::to_string(*budget));
  }

  const std::vector<ServiceRequest> requests = requests_.sample(rng_);
  for (ControllerView& view : views_) view = refresh_own_domain(std::move(view), network_.registry, truth_);
  const std::vector<ControllerView> before = views_;

  // Ticking first and then resetting the broadcast entries yields
  // next[i] = 0 for broadcast BISes and previous + 1 otherwise.
  staleness_ = tick_staleness(std::move(staleness_));
  apply_broadcast(views_, staleness_, action, truth_, network_.registry, budget);

  SlotOutcome out;
  out.budget = budget_;
  out.avg_latency_after = average_true_latency(network_, views_, requests, truth_);
  out.avg_latency_baseline = average_true_latency(network_, before, requests, truth_);
  out.reward = out.avg_latency_baseline - out.avg_latency_after;

  truth_ = advance_bis_values(truth_, change_prob_, config_.dynamics, rng_);
  truth_.slot += 1;
  budget_ = sample_budget(config_.dynamics.budget_mean, rng_);
  out.next_state = staleness_;
  out.terminal = finished();
  return out;
}

double discounted_return(std::span<const double> rewards, double gamma) {
  double total = 0.0;
  double weight = gamma;
  for (double r : rewards) {
    total += weight * r;
    weight *= gamma;
  }
  return total;
}

}  // namespace macs
