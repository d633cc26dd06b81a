#pragma once

#include <span>
#include <vector>

#include "macs/dynamics.hpp"
#include "macs/topology.hpp"
#include "macs/views.hpp"

namespace macs {

struct GatewayRoute {
  double delay = 0.0;
  std::vector<DomainId> domains;  // src first, dst last
};

/// Single-source shortest paths over the domain graph where edge (u,v) costs
/// the gateway delay l_{u,v} read from `values`.
class RouteTree {
 public:
  RouteTree(const DomainGraph& graph, const BisRegistry& registry, std::span<const double> values,
            DomainId source);

  DomainId source() const { return source_; }
  bool reachable(DomainId dst) const;
  double delay(DomainId dst) const;
  std::vector<DomainId> route(DomainId dst) const;

 private:
  DomainId source_;
  std::vector<double> dist_;
  std::vector<DomainId> pred_;
};

GatewayRoute min_gateway_delay(const DomainGraph& graph, const BisRegistry& registry, const ControllerView& view,
                               DomainId src, DomainId dst);

struct ServicePath {
  ServiceRequest request;
  std::vector<DomainId> domain_sequence;
  Install chosen_install;
  double estimated_latency = 0.0;
};

/// Gateway delays along `domains` plus the server delay of `install`, read
/// from `values`.
double path_cost(const BisRegistry& registry, std::span<const double> values,
                 std::span<const DomainId> domains, const Install& install);

/// Anycast choice: the install minimizing route delay plus server delay under
/// the given values; ties go to the lower domain index.
ServicePath construct_service_path(const RouteTree& routes, const BisRegistry& registry,
                                   const ServicePlacement& placement, std::span<const double> values,
                                   const ServiceRequest& request);

ServicePath construct_service_path(const DomainGraph& graph, const BisRegistry& registry,
                                   const ServicePlacement& placement, const ControllerView& view,
                                   const ServiceRequest& request);

/// Re-costs the fixed path with true values; the path is not re-optimized.
double evaluate_true_latency(const ServicePath& path, const BisRegistry& registry,
                             const TrueNetworkState& truth);

}  // namespace macs
