#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "macs/dynamics.hpp"
#include "macs/topology.hpp"

namespace macs {

/// One domain controller's copy of every BIS value.
struct ControllerView {
  DomainId owner = 0;
  std::vector<double> believed_values;
};

/// Slots elapsed since each BIS was last broadcast; the MDP state.
struct StalenessVector {
  std::vector<std::int64_t> counts;
  bool operator==(const StalenessVector&) const = default;
};

struct ActionVector {
  std::vector<std::uint8_t> bits;

  static ActionVector zeros(std::size_t n) { return ActionVector{std::vector<std::uint8_t>(n, 0)}; }
  static ActionVector ones(std::size_t n) { return ActionVector{std::vector<std::uint8_t>(n, 1)}; }
  std::size_t size() const { return bits.size(); }
  int count() const;
  bool operator==(const ActionVector&) const = default;
};

/// Every controller starts with the true values.
std::vector<ControllerView> synchronized_views(int domain_count, const TrueNetworkState& truth);

ControllerView refresh_own_domain(ControllerView view, const BisRegistry& registry,
                                  const TrueNetworkState& truth);

/// Broadcasts the selected BISes to every controller and resets their
/// staleness. `budget` is omitted for budget-exempt callers; otherwise more
/// set bits than the budget raises BudgetExceeded before anything changes.
void apply_broadcast(std::vector<ControllerView>& views, StalenessVector& staleness,
                     const ActionVector& action, const TrueNetworkState& truth, const BisRegistry& registry,
                     std::optional<int> budget = std::nullopt);

StalenessVector tick_staleness(StalenessVector staleness);

}  // namespace macs
