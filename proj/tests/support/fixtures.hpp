#pragma once

#include <set>
#include <utility>
#include <vector>

#include "macs/env.hpp"
#include "macs/topology.hpp"

namespace macs::fixture {

inline DomainGraph graph_from_pairs(int m, std::initializer_list<std::pair<int, int>> undirected) {
  EdgeListSpec spec;
  spec.domain_count = m;
  for (auto [a, b] : undirected) {
    spec.edges.push_back(Edge{a, b});
    spec.edges.push_back(Edge{b, a});
  }
  Rng rng(0);
  return build_topology(spec, rng);
}

/// Two domains joined by a gateway pair; service 0 in both domains, service 1
/// only in domain 0. Five BISes.
struct TwoDomainNetwork {
  DomainGraph graph = graph_from_pairs(2, {{0, 1}});
  ServicePlacement placement{2, {{0, 0}, {0, 1}, {1, 0}}};
  BisRegistry registry{graph, placement};
};

/// Three domains in a line (0-1-2); the requested service 0 is installed in
/// domains 1 and 2. Controller 0's stale view prefers domain 2 while the
/// truth favours domain 1.
struct StaleViewNetwork {
  DomainGraph graph = graph_from_pairs(3, {{0, 1}, {1, 2}});
  ServicePlacement placement{1, {{0, 1}, {0, 2}}};
  BisRegistry registry{graph, placement};

  std::vector<double> values(double gw01, double gw12, double server1, double server2) const {
    std::vector<double> v(registry.size(), 1.0);
    v[registry.gateway_index(0, 1)] = gw01;
    v[registry.gateway_index(1, 2)] = gw12;
    v[registry.server_index(0, 1)] = server1;
    v[registry.server_index(0, 2)] = server2;
    return v;
  }
  std::vector<double> view() const { return values(2, 1, 4, 2); }
  std::vector<double> truth() const { return values(2, 3, 2, 3); }
};

/// Random small strongly connected network for property tests.
inline Network random_network(Rng& rng, int max_domains = 6) {
  std::uniform_int_distribution<int> size(2, max_domains);
  const int m = size(rng);
  EdgeListSpec spec;
  spec.domain_count = m;
  std::set<std::pair<int, int>> undirected;
  for (int v = 1; v < m; ++v) {
    std::uniform_int_distribution<int> parent(0, v - 1);
    undirected.emplace(parent(rng), v);
  }
  std::uniform_int_distribution<int> extra(0, m);
  for (int k = extra(rng); k > 0; --k) {
    std::uniform_int_distribution<int> node(0, m - 1);
    int a = node(rng), b = node(rng);
    if (a != b) undirected.emplace(std::min(a, b), std::max(a, b));
  }
  for (auto [a, b] : undirected) {
    spec.edges.push_back(Edge{a, b});
    spec.edges.push_back(Edge{b, a});
  }
  Network net;
  net.graph = build_topology(spec, rng);
  std::uniform_int_distribution<int> copies(1, std::min(m, 3));
  net.placement = place_services(net.graph, PlacementSpec{3, copies(rng), {}, 0.0}, rng);
  net.registry = enumerate_bises(net.graph, net.placement);
  return net;
}

inline std::vector<double> random_values(std::size_t n, Rng& rng) {
  std::uniform_int_distribution<int> v(1, 30);
  std::vector<double> out(n);
  for (double& x : out) x = v(rng);
  return out;
}

}  // namespace macs::fixture
