#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "macs/rng.hpp"

namespace macs {

using DomainId = int;
using ServiceId = int;

struct Edge {
  DomainId src = 0;
  DomainId dst = 0;
  auto operator<=>(const Edge&) const = default;
};

/// Domain-wise directed topology. Every inter-domain link appears as a pair of
/// directed edges, one per gateway router, and `edges` is kept sorted.
struct DomainGraph {
  int domain_count = 1;
  std::vector<Edge> edges;

  /// Out-neighbours of `domain` in ascending order.
  std::vector<DomainId> neighbours(DomainId domain) const;
  bool has_edge(DomainId src, DomainId dst) const;
  int out_degree(DomainId domain) const;
};

struct EdgeListSpec {
  int domain_count = 1;
  std::vector<Edge> edges;
  bool operator==(const EdgeListSpec&) const = default;
};

/// Undirected degree per domain; the domain count is the sequence length.
struct DegreeSequenceSpec {
  std::vector<int> degrees;
  bool operator==(const DegreeSequenceSpec&) const = default;
};

using TopologySpec = std::variant<EdgeListSpec, DegreeSequenceSpec>;

inline constexpr int kDegreeSequenceAttemptCap = 10'000;

/// Builds a validated graph. Edge-list mode only validates and sorts; the
/// degree-sequence mode realizes the sequence by pairwise stub matching with
/// rejection of self-loops, multi-edges and disconnected draws.
DomainGraph build_topology(const TopologySpec& spec, Rng& rng);

/// Throws MalformedEdgeList when the graph breaks an invariant.
void validate_graph(const DomainGraph& graph);

bool is_strongly_connected(const DomainGraph& graph);

struct Install {
  ServiceId service = 0;
  DomainId domain = 0;
  auto operator<=>(const Install&) const = default;
};

struct ServicePlacement {
  int service_count = 0;
  std::vector<Install> installs;  // sorted by (service, domain)

  /// Installs of one service, ascending by domain.
  std::vector<Install> installs_of(ServiceId service) const;
};

struct PlacementSpec {
  int service_count = 10;
  int copies = 2;
  std::vector<DomainId> favored_domains;
  double favored_prob = 0.7;
  bool operator==(const PlacementSpec&) const = default;
};

ServicePlacement place_services(const DomainGraph& graph, const PlacementSpec& spec, Rng& rng);

struct GatewayDelay {
  DomainId src = 0;
  DomainId dst = 0;
  auto operator<=>(const GatewayDelay&) const = default;
};

struct ServerDelay {
  ServiceId service = 0;
  DomainId domain = 0;
  auto operator<=>(const ServerDelay&) const = default;
};

using BisEntry = std::variant<GatewayDelay, ServerDelay>;

/// Canonical 0-based indexing of every synchronizable quantity: gateway delays
/// first in edge order, then server delays in install order.
class BisRegistry {
 public:
  BisRegistry() = default;
  BisRegistry(const DomainGraph& graph, const ServicePlacement& placement);

  std::size_t size() const { return entries_.size(); }
  std::size_t gateway_count() const { return gateway_count_; }
  const std::vector<BisEntry>& entries() const { return entries_; }
  const BisEntry& entry(std::size_t index) const { return entries_.at(index); }

  std::size_t index_of(const BisEntry& entry) const;
  std::size_t gateway_index(DomainId src, DomainId dst) const;
  std::size_t server_index(ServiceId service, DomainId domain) const;

  /// Domain whose controller observes this BIS directly.
  DomainId origin(std::size_t index) const { return origin_.at(index); }

 private:
  std::vector<BisEntry> entries_;
  std::vector<DomainId> origin_;
  std::size_t gateway_count_ = 0;
  std::map<GatewayDelay, std::size_t> gateway_lookup_;
  std::map<ServerDelay, std::size_t> server_lookup_;
};

BisRegistry enumerate_bises(const DomainGraph& graph, const ServicePlacement& placement);

}  // namespace macs
