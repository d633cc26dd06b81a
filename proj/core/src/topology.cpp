#include "macs/topology.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>

#include "macs/errors.hpp"

namespace macs {

std::vector<DomainId> DomainGraph::neighbours(DomainId domain) const {
  std::vector<DomainId> out;
  auto first = std::lower_bound(edges.begin(), edges.end(), Edge{domain, 0});
  for (auto it = first; it != edges.end() && it->src == domain; ++it) out.push_back(it->dst);
  return out;
}

bool DomainGraph::has_edge(DomainId src, DomainId dst) const {
  return std::binary_search(edges.begin(), edges.end(), Edge{src, dst});
}

int DomainGraph::out_degree(DomainId domain) const {
  return static_cast<int>(neighbours(domain).size());
}

bool is_strongly_connected(const DomainGraph& graph) {
  if (graph.domain_count <= 1) return true;
  // With every edge paired by its reverse, reachability from 0 in one
  // direction is enough.
  std::vector<char> seen(graph.domain_count, 0);
  std::queue<DomainId> frontier;
  frontier.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!frontier.empty()) {
    DomainId u = frontier.front();
    frontier.pop();
    for (DomainId v : graph.neighbours(u)) {
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        frontier.push(v);
      }
    }
  }
  return reached == graph.domain_count;
}

void validate_graph(const DomainGraph& graph) {
  if (graph.domain_count < 1) throw MalformedEdgeList("domain count must be positive");
  for (std::size_t k = 0; k < graph.edges.size(); ++k) {
    const Edge& e = graph.edges[k];
    if (e.src < 0 || e.src >= graph.domain_count || e.dst < 0 || e.dst >= graph.domain_count) {
      throw MalformedEdgeList("edge (" + std::to_string(e.src) + "," + std::to_string(e.dst) +
                              ") references an unknown domain");
    }
    if (e.src == e.dst) {
      throw MalformedEdgeList("self-loop at domain " + std::to_string(e.src));
    }
    if (k > 0 && !(graph.edges[k - 1] < e)) {
      throw MalformedEdgeList("edges must be sorted and unique");
    }
  }
  for (const Edge& e : graph.edges) {
    if (!graph.has_edge(e.dst, e.src)) {
      throw MalformedEdgeList("edge (" + std::to_string(e.src) + "," + std::to_string(e.dst) +
                              ") has no reverse edge");
    }
  }
  if (!is_strongly_connected(graph)) throw MalformedEdgeList("domain graph is disconnected");
}

namespace {

DomainGraph from_edge_list(const EdgeListSpec& spec) {
  DomainGraph graph;
  graph.domain_count = spec.domain_count;
  graph.edges = spec.edges;
  std::sort(graph.edges.begin(), graph.edges.end());
  if (std::adjacent_find(graph.edges.begin(), graph.edges.end()) != graph.edges.end()) {
    throw MalformedEdgeList("duplicate edge in edge list");
  }
  validate_graph(graph);
  return graph;
}

DomainGraph from_degree_sequence(const DegreeSequenceSpec& spec, Rng& rng) {
  const int m = static_cast<int>(spec.degrees.size());
  if (m < 1) throw InfeasibleDegreeSequence("degree sequence is empty");
  long total = 0;
  for (int d : spec.degrees) {
    if (d < 0 || d >= m) throw InfeasibleDegreeSequence("degree out of range for a simple graph");
    total += d;
  }
  if (total % 2 != 0) throw InfeasibleDegreeSequence("degree sum is odd");
  if (total < 2L * (m - 1)) throw InfeasibleDegreeSequence("too few stubs to connect every domain");

  std::vector<DomainId> stubs;
  stubs.reserve(static_cast<std::size_t>(total));
  for (DomainId v = 0; v < m; ++v) stubs.insert(stubs.end(), spec.degrees[v], v);

  for (int attempt = 0; attempt < kDegreeSequenceAttemptCap; ++attempt) {
    std::shuffle(stubs.begin(), stubs.end(), rng);
    std::set<Edge> undirected;
    bool ok = true;
    for (std::size_t k = 0; k + 1 < stubs.size(); k += 2) {
      DomainId a = std::min(stubs[k], stubs[k + 1]);
      DomainId b = std::max(stubs[k], stubs[k + 1]);
      if (a == b || !undirected.insert(Edge{a, b}).second) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    DomainGraph graph;
    graph.domain_count = m;
    for (const Edge& e : undirected) {
      graph.edges.push_back(e);
      graph.edges.push_back(Edge{e.dst, e.src});
    }
    std::sort(graph.edges.begin(), graph.edges.end());
    if (is_strongly_connected(graph)) return graph;
  }
  throw InfeasibleDegreeSequence("no simple connected realization found within " +
                                 std::to_string(kDegreeSequenceAttemptCap) + " attempts");
}

}  // namespace

DomainGraph build_topology(const TopologySpec& spec, Rng& rng) {
  if (const auto* list = std::get_if<EdgeListSpec>(&spec)) return from_edge_list(*list);
  return from_degree_sequence(std::get<DegreeSequenceSpec>(spec), rng);
}

std::vector<Install> ServicePlacement::installs_of(ServiceId service) const {
  std::vector<Install> out;
  auto first = std::lower_bound(installs.begin(), installs.end(), Install{service, 0});
  for (auto it = first; it != installs.end() && it->service == service; ++it) out.push_back(*it);
  return out;
}

ServicePlacement place_services(const DomainGraph& graph, const PlacementSpec& spec, Rng& rng) {
  const int m = graph.domain_count;
  if (spec.service_count < 1) throw std::invalid_argument("service_count must be positive");
  if (spec.copies < 1 || spec.copies > m) throw std::invalid_argument("copies must be in [1, domain_count]");
  if (spec.favored_prob < 0.0 || spec.favored_prob > 1.0) {
    throw std::invalid_argument("favored_prob must be a probability");
  }
  std::vector<char> favored(m, 0);
  for (DomainId d : spec.favored_domains) {
    if (d < 0 || d >= m) throw std::invalid_argument("favored domain out of range");
    favored[d] = 1;
  }

  ServicePlacement placement;
  placement.service_count = spec.service_count;
  for (ServiceId s = 0; s < spec.service_count; ++s) {
    std::vector<char> taken(m, 0);
    for (int c = 0; c < spec.copies; ++c) {
      std::vector<DomainId> inside, outside;
      for (DomainId d = 0; d < m; ++d) {
        if (taken[d]) continue;
        (favored[d] ? inside : outside).push_back(d);
      }
      const bool pick_favored = uniform01(rng) < spec.favored_prob;
      const std::vector<DomainId>& group =
          inside.empty() ? outside : outside.empty() ? inside : pick_favored ? inside : outside;
      std::uniform_int_distribution<std::size_t> pick(0, group.size() - 1);
      DomainId d = group[pick(rng)];
      taken[d] = 1;
      placement.installs.push_back(Install{s, d});
    }
  }
  std::sort(placement.installs.begin(), placement.installs.end());
  return placement;
}

BisRegistry::BisRegistry(const DomainGraph& graph, const ServicePlacement& placement) {
  for (const Edge& e : graph.edges) {
    gateway_lookup_.emplace(GatewayDelay{e.src, e.dst}, entries_.size());
    entries_.emplace_back(GatewayDelay{e.src, e.dst});
    origin_.push_back(e.src);
  }
  gateway_count_ = entries_.size();
  for (const Install& inst : placement.installs) {
    server_lookup_.emplace(ServerDelay{inst.service, inst.domain}, entries_.size());
    entries_.emplace_back(ServerDelay{inst.service, inst.domain});
    origin_.push_back(inst.domain);
  }
}

std::size_t BisRegistry::index_of(const BisEntry& entry) const {
  if (const auto* g = std::get_if<GatewayDelay>(&entry)) return gateway_index(g->src, g->dst);
  const auto& s = std::get<ServerDelay>(entry);
  return server_index(s.service, s.domain);
}

std::size_t BisRegistry::gateway_index(DomainId src, DomainId dst) const {
  auto it = gateway_lookup_.find(GatewayDelay{src, dst});
  if (it == gateway_lookup_.end()) throw std::out_of_range("no gateway BIS for that edge");
  return it->second;
}

std::size_t BisRegistry::server_index(ServiceId service, DomainId domain) const {
  auto it = server_lookup_.find(ServerDelay{service, domain});
  if (it == server_lookup_.end()) throw std::out_of_range("no server BIS for that install");
  return it->second;
}

BisRegistry enumerate_bises(const DomainGraph& graph, const ServicePlacement& placement) {
  return BisRegistry(graph, placement);
}

}  // namespace macs
