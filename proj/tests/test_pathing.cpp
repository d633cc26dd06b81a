#include <gtest/gtest.h>

#include "macs/errors.hpp"
#include "macs/pathing.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

namespace macs {
namespace {

ServiceRequest random_request(const Network& net, Rng& rng) {
  std::uniform_int_distribution<int> origin(0, net.graph.domain_count - 1);
  std::uniform_int_distribution<int> service(0, net.placement.service_count - 1);
  return ServiceRequest{origin(rng), service(rng)};
}

TEST(MinGatewayDelay, SameDomainIsFree) {
  fixture::StaleViewNetwork net;
  const auto r = min_gateway_delay(net.graph, net.registry, ControllerView{0, net.view()}, 1, 1);
  EXPECT_EQ(r.delay, 0.0);
  EXPECT_EQ(r.domains, (std::vector<DomainId>{1}));
}

TEST(MinGatewayDelay, StaleViewThroughMiddleDomain) {
  fixture::StaleViewNetwork net;
  const auto r = min_gateway_delay(net.graph, net.registry, ControllerView{0, net.view()}, 0, 2);
  EXPECT_EQ(r.delay, 3.0);
  EXPECT_EQ(r.domains, (std::vector<DomainId>{0, 1, 2}));
}

TEST(MinGatewayDelay, MatchesExhaustiveEnumeration) {
  Rng rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const Network net = fixture::random_network(rng, 8);
    const auto values = fixture::random_values(net.registry.size(), rng);
    const ControllerView view{0, values};
    for (DomainId s = 0; s < net.graph.domain_count; ++s) {
      for (DomainId d = 0; d < net.graph.domain_count; ++d) {
        const auto r = min_gateway_delay(net.graph, net.registry, view, s, d);
        EXPECT_DOUBLE_EQ(r.delay, oracle::min_route_cost(net.graph, net.registry, values, s, d));
        EXPECT_EQ(r.domains.front(), s);
        EXPECT_EQ(r.domains.back(), d);
        EXPECT_DOUBLE_EQ(oracle::route_cost(net.registry, values, r.domains), r.delay);
      }
    }
  }
}

TEST(MinGatewayDelay, DisconnectedGraphIsUnreachable) {
  DomainGraph g;
  g.domain_count = 2;
  const BisRegistry reg = enumerate_bises(g, ServicePlacement{0, {}});
  EXPECT_THROW(min_gateway_delay(g, reg, ControllerView{0, {}}, 0, 1), Unreachable);
}

TEST(ConstructServicePath, StaleViewPicksFartherDomain) {
  fixture::StaleViewNetwork net;
  const auto p = construct_service_path(net.graph, net.registry, net.placement, ControllerView{0, net.view()},
                                        ServiceRequest{0, 0});
  EXPECT_EQ(p.chosen_install, (Install{0, 2}));
  EXPECT_EQ(p.domain_sequence, (std::vector<DomainId>{0, 1, 2}));
  EXPECT_EQ(p.estimated_latency, 5.0);
}

TEST(ConstructServicePath, SingleInstallAlwaysChosen) {
  fixture::TwoDomainNetwork net;
  const ControllerView view{1, {100, 100, 100, 1, 1}};
  const auto p = construct_service_path(net.graph, net.registry, net.placement, view, ServiceRequest{1, 1});
  EXPECT_EQ(p.chosen_install, (Install{1, 0}));
  EXPECT_EQ(p.domain_sequence, (std::vector<DomainId>{1, 0}));
  EXPECT_EQ(p.estimated_latency, 101.0);
}

TEST(ConstructServicePath, TiesGoToLowerDomain) {
  fixture::TwoDomainNetwork net;
  const ControllerView view{0, {1, 1, 2, 1, 1}};
  const auto p = construct_service_path(net.graph, net.registry, net.placement, view, ServiceRequest{0, 0});
  EXPECT_EQ(p.chosen_install, (Install{0, 0}));
}

TEST(ConstructServicePath, MissingServiceIsUnavailable) {
  fixture::TwoDomainNetwork net;
  EXPECT_THROW(construct_service_path(net.graph, net.registry, net.placement, ControllerView{0, {1, 1, 1, 1, 1}},
                                      ServiceRequest{0, 5}),
               ServiceUnavailable);
}

TEST(ConstructServicePath, MatchesBruteForceMinimum) {
  Rng rng(22);
  for (int trial = 0; trial < 1000; ++trial) {
    const Network net = fixture::random_network(rng, 7);
    const auto values = fixture::random_values(net.registry.size(), rng);
    const ServiceRequest req = random_request(net, rng);
    const auto p = construct_service_path(net.graph, net.registry, net.placement, ControllerView{0, values}, req);
    EXPECT_DOUBLE_EQ(p.estimated_latency, oracle::min_request_latency(net.graph, net.placement, net.registry, values,
                                                                      req.origin_domain, req.service_id));
    EXPECT_EQ(p.domain_sequence.front(), req.origin_domain);
    EXPECT_EQ(p.domain_sequence.back(), p.chosen_install.domain);
    for (std::size_t k = 0; k + 1 < p.domain_sequence.size(); ++k) {
      EXPECT_TRUE(net.graph.has_edge(p.domain_sequence[k], p.domain_sequence[k + 1]));
    }
    const double recomputed = oracle::route_cost(net.registry, values, p.domain_sequence) +
                              oracle::server_cost(net.registry, values, req.service_id, p.chosen_install.domain);
    EXPECT_EQ(recomputed, p.estimated_latency);
  }
}

TEST(EvaluateTrueLatency, ExactUnderTruthEqualView) {
  fixture::StaleViewNetwork net;
  const TrueNetworkState truth{net.truth(), 0};
  const auto p = construct_service_path(net.graph, net.registry, net.placement, ControllerView{0, truth.values},
                                        ServiceRequest{0, 0});
  EXPECT_EQ(evaluate_true_latency(p, net.registry, truth), p.estimated_latency);
  EXPECT_EQ(p.estimated_latency, 4.0);
  EXPECT_EQ(p.chosen_install, (Install{0, 1}));
}

TEST(EvaluateTrueLatency, StaleChoiceRecostedWithTruth) {
  fixture::StaleViewNetwork net;
  const TrueNetworkState truth{net.truth(), 0};
  const auto p = construct_service_path(net.graph, net.registry, net.placement, ControllerView{0, net.view()},
                                        ServiceRequest{0, 0});
  EXPECT_EQ(evaluate_true_latency(p, net.registry, truth), 8.0);
}

TEST(EvaluateTrueLatency, NeverBeatsTrueOptimum) {
  Rng rng(23);
  for (int trial = 0; trial < 10000; ++trial) {
    const Network net = fixture::random_network(rng, 6);
    const TrueNetworkState truth{fixture::random_values(net.registry.size(), rng), 0};
    const auto view = fixture::random_values(net.registry.size(), rng);
    const ServiceRequest req = random_request(net, rng);
    const auto stale = construct_service_path(net.graph, net.registry, net.placement, ControllerView{0, view}, req);
    const auto exact =
        construct_service_path(net.graph, net.registry, net.placement, ControllerView{0, truth.values}, req);
    EXPECT_GE(evaluate_true_latency(stale, net.registry, truth), evaluate_true_latency(exact, net.registry, truth));
  }
}

TEST(EvaluateTrueLatency, TruthOptimalMatchesGlobalMinimum) {
  Rng rng(24);
  for (int trial = 0; trial < 300; ++trial) {
    const Network net = fixture::random_network(rng, 8);
    const TrueNetworkState truth{fixture::random_values(net.registry.size(), rng), 0};
    const ServiceRequest req = random_request(net, rng);
    const auto p =
        construct_service_path(net.graph, net.registry, net.placement, ControllerView{0, truth.values}, req);
    EXPECT_DOUBLE_EQ(evaluate_true_latency(p, net.registry, truth),
                     oracle::min_request_latency(net.graph, net.placement, net.registry, truth.values,
                                                 req.origin_domain, req.service_id));
  }
}

}  // namespace
}  // namespace macs
