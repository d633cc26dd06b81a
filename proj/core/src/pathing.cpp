#include "macs/pathing.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <utility>

#include "macs/errors.hpp"

namespace macs {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

RouteTree::RouteTree(const DomainGraph& graph, const BisRegistry& registry, std::span<const double> values,
                     DomainId source)
    : source_(source), dist_(graph.domain_count, kInf), pred_(graph.domain_count, -1) {
  using Label = std::pair<double, DomainId>;
  std::priority_queue<Label, std::vector<Label>, std::greater<>> open;
  std::vector<char> settled(graph.domain_count, 0);
  dist_[source] = 0.0;
  open.emplace(0.0, source);
  while (!open.empty()) {
    auto [d, u] = open.top();
    open.pop();
    if (settled[u]) continue;
    settled[u] = 1;
    for (DomainId v : graph.neighbours(u)) {
      const double w = values[registry.gateway_index(u, v)];
      if (d + w < dist_[v]) {
        dist_[v] = d + w;
        pred_[v] = u;
        open.emplace(dist_[v], v);
      }
    }
  }
}

bool RouteTree::reachable(DomainId dst) const { return dist_.at(dst) < kInf; }

double RouteTree::delay(DomainId dst) const {
  if (!reachable(dst)) throw Unreachable("domain " + std::to_string(dst) + " is unreachable");
  return dist_[dst];
}

std::vector<DomainId> RouteTree::route(DomainId dst) const {
  if (!reachable(dst)) throw Unreachable("domain " + std::to_string(dst) + " is unreachable");
  std::vector<DomainId> path;
  for (DomainId v = dst; v != -1; v = pred_[v]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

GatewayRoute min_gateway_delay(const DomainGraph& graph, const BisRegistry& registry, const ControllerView& view,
                               DomainId src, DomainId dst) {
  RouteTree tree(graph, registry, view.believed_values, src);
  return GatewayRoute{tree.delay(dst), tree.route(dst)};
}

double path_cost(const BisRegistry& registry, std::span<const double> values,
                 std::span<const DomainId> domains, const Install& install) {
  double cost = 0.0;
  for (std::size_t k = 0; k + 1 < domains.size(); ++k) {
    cost += values[registry.gateway_index(domains[k], domains[k + 1])];
  }
  return cost + values[registry.server_index(install.service, install.domain)];
}

ServicePath construct_service_path(const RouteTree& routes, const BisRegistry& registry,
                                   const ServicePlacement& placement, std::span<const double> values,
                                   const ServiceRequest& request) {
  const auto candidates = placement.installs_of(request.service_id);
  const Install* best = nullptr;
  double best_cost = kInf;
  for (const Install& inst : candidates) {
    if (!routes.reachable(inst.domain)) continue;
    const double cost = routes.delay(inst.domain) + values[registry.server_index(inst.service, inst.domain)];
    if (cost < best_cost) {
      best_cost = cost;
      best = &inst;
    }
  }
  if (best == nullptr) {
    throw ServiceUnavailable("no reachable install of service " + std::to_string(request.service_id));
  }
  ServicePath path;
  path.request = request;
  path.domain_sequence = routes.route(best->domain);
  path.chosen_install = *best;
  path.estimated_latency = path_cost(registry, values, path.domain_sequence, *best);
  return path;
}

ServicePath construct_service_path(const DomainGraph& graph, const BisRegistry& registry,
                                   const ServicePlacement& placement, const ControllerView& view,
                                   const ServiceRequest& request) {
  RouteTree tree(graph, registry, view.believed_values, request.origin_domain);
  return construct_service_path(tree, registry, placement, view.believed_values, request);
}

double evaluate_true_latency(const ServicePath& path, const BisRegistry& registry,
                             const TrueNetworkState& truth) {
  return path_cost(registry, truth.values, path.domain_sequence, path.chosen_install);
}

}  // namespace macs
