#include <gtest/gtest.h>

#include "macs/errors.hpp"
#include "macs/views.hpp"
#include "support/fixtures.hpp"

namespace macs {
namespace {

TrueNetworkState truth_of(std::vector<double> v) { return TrueNetworkState{std::move(v), 0}; }

std::vector<ControllerView> stale_views(int domains, std::size_t n, double value) {
  std::vector<ControllerView> views;
  for (DomainId d = 0; d < domains; ++d) views.push_back(ControllerView{d, std::vector<double>(n, value)});
  return views;
}

TEST(ApplyBroadcast, AllOnesSynchronizesEverything) {
  fixture::TwoDomainNetwork net;
  const auto truth = truth_of({3, 4, 5, 6, 7});
  auto views = stale_views(2, 5, 1.0);
  StalenessVector s{{5, 3, 3, 4, 3}};
  apply_broadcast(views, s, ActionVector::ones(5), truth, net.registry, 5);
  EXPECT_EQ(s.counts, (std::vector<std::int64_t>(5, 0)));
  for (const auto& v : views) EXPECT_EQ(v.believed_values, truth.values);
}

TEST(ApplyBroadcast, PairExampleResetsExactlyTwoEntries) {
  fixture::TwoDomainNetwork net;
  const auto truth = truth_of({3, 4, 5, 6, 7});
  auto views = stale_views(2, 5, 1.0);
  StalenessVector s{{5, 3, 3, 4, 3}};
  const ActionVector a{{0, 1, 0, 1, 0}};
  ASSERT_EQ(net.registry.index_of(GatewayDelay{1, 0}), 1u);
  ASSERT_EQ(net.registry.index_of(ServerDelay{0, 1}), 3u);
  apply_broadcast(views, s, a, truth, net.registry, 2);
  EXPECT_EQ(s.counts, (std::vector<std::int64_t>{5, 0, 3, 0, 3}));
  for (const auto& v : views) {
    EXPECT_EQ(v.believed_values[1], 4.0);
    EXPECT_EQ(v.believed_values[3], 6.0);
  }
}

TEST(ApplyBroadcast, ZeroActionOnlyRefreshesOwnDomains) {
  fixture::TwoDomainNetwork net;
  const auto truth = truth_of({3, 4, 5, 6, 7});
  auto views = stale_views(2, 5, 1.0);
  const auto before = views;
  StalenessVector s{{2, 2, 2, 2, 2}};
  apply_broadcast(views, s, ActionVector::zeros(5), truth, net.registry, 0);
  EXPECT_EQ(s.counts, (std::vector<std::int64_t>(5, 2)));
  for (std::size_t d = 0; d < views.size(); ++d) {
    for (std::size_t i = 0; i < 5; ++i) {
      const bool own = net.registry.origin(i) == views[d].owner;
      EXPECT_EQ(views[d].believed_values[i], own ? truth.values[i] : before[d].believed_values[i]);
    }
  }
}

TEST(ApplyBroadcast, OverBudgetLeavesStateUntouched) {
  fixture::TwoDomainNetwork net;
  const auto truth = truth_of({3, 4, 5, 6, 7});
  auto views = stale_views(2, 5, 1.0);
  const auto before = views;
  StalenessVector s{{1, 1, 1, 1, 1}};
  EXPECT_THROW(apply_broadcast(views, s, ActionVector{{1, 1, 1, 0, 0}}, truth, net.registry, 2), BudgetExceeded);
  EXPECT_EQ(s.counts, (std::vector<std::int64_t>(5, 1)));
  for (std::size_t d = 0; d < views.size(); ++d) EXPECT_EQ(views[d].believed_values, before[d].believed_values);
}

TEST(ApplyBroadcast, ExemptCallerIgnoresBudget) {
  fixture::TwoDomainNetwork net;
  auto views = stale_views(2, 5, 1.0);
  StalenessVector s{{1, 1, 1, 1, 1}};
  EXPECT_NO_THROW(apply_broadcast(views, s, ActionVector::ones(5), truth_of({3, 4, 5, 6, 7}), net.registry));
}

TEST(ApplyBroadcast, BroadcastEntriesAgreeAcrossControllers) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Network net = fixture::random_network(rng);
    const std::size_t n = net.registry.size();
    const auto truth = truth_of(fixture::random_values(n, rng));
    std::vector<ControllerView> views;
    for (DomainId d = 0; d < net.graph.domain_count; ++d) views.push_back({d, fixture::random_values(n, rng)});
    StalenessVector s{std::vector<std::int64_t>(n, 7)};
    ActionVector a = ActionVector::zeros(n);
    for (auto& b : a.bits) b = static_cast<std::uint8_t>(rng() & 1U);
    apply_broadcast(views, s, a, truth, net.registry);
    for (std::size_t i = 0; i < n; ++i) {
      if (!a.bits[i]) continue;
      EXPECT_EQ(s.counts[i], 0);
      for (const auto& v : views) EXPECT_EQ(v.believed_values[i], truth.values[i]);
    }
  }
}

TEST(TickStaleness, Examples) {
  EXPECT_EQ(tick_staleness(StalenessVector{{0, 0}}).counts, (std::vector<std::int64_t>{1, 1}));
  EXPECT_EQ(tick_staleness(StalenessVector{{5, 3, 3, 4, 3}}).counts, (std::vector<std::int64_t>{6, 4, 4, 5, 4}));
}

TEST(TickStaleness, TickResetTickSequence) {
  fixture::TwoDomainNetwork net;
  auto views = stale_views(2, 5, 1.0);
  StalenessVector s = tick_staleness(StalenessVector{std::vector<std::int64_t>(5, 0)});
  ActionVector a = ActionVector::zeros(5);
  a.bits[2] = 1;
  apply_broadcast(views, s, a, truth_of({1, 1, 1, 1, 1}), net.registry);
  s = tick_staleness(s);
  EXPECT_EQ(s.counts, (std::vector<std::int64_t>{2, 2, 1, 2, 2}));
}

TEST(RefreshOwnDomain, OwnerWithoutBisesIsUnchanged) {
  const DomainGraph g = fixture::graph_from_pairs(1, {});
  const BisRegistry reg = enumerate_bises(g, ServicePlacement{0, {}});
  const ControllerView view{0, {}};
  EXPECT_EQ(refresh_own_domain(view, reg, truth_of({})).believed_values, view.believed_values);
}

TEST(RefreshOwnDomain, OwnGatewayIsAccurateWhileOthersStayStale) {
  fixture::StaleViewNetwork net;
  const ControllerView view{0, net.view()};
  const auto truth = truth_of(net.truth());
  const ControllerView out = refresh_own_domain(view, net.registry, truth);
  EXPECT_EQ(out.believed_values[net.registry.gateway_index(0, 1)], 2.0);
  EXPECT_EQ(out.believed_values[net.registry.gateway_index(1, 2)], 1.0);
  EXPECT_EQ(out.believed_values[net.registry.server_index(0, 1)], 4.0);
}

TEST(RefreshOwnDomain, DiffSupportedOnForeignIndicesOnly) {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Network net = fixture::random_network(rng);
    const std::size_t n = net.registry.size();
    const auto truth = truth_of(fixture::random_values(n, rng));
    for (DomainId d = 0; d < net.graph.domain_count; ++d) {
      const ControllerView out = refresh_own_domain({d, fixture::random_values(n, rng)}, net.registry, truth);
      for (std::size_t i = 0; i < n; ++i) {
        if (out.believed_values[i] != truth.values[i]) EXPECT_NE(net.registry.origin(i), d);
        if (net.registry.origin(i) == d) EXPECT_EQ(out.believed_values[i], truth.values[i]);
      }
    }
  }
}

}  // namespace
}  // namespace macs
