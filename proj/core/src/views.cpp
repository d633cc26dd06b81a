#include "macs/views.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

#include "macs/errors.hpp"

namespace macs {

int ActionVector::count() const { return std::accumulate(bits.begin(), bits.end(), 0); }

std::vector<ControllerView> synchronized_views(int domain_count, const TrueNetworkState& truth) {
  std::vector<ControllerView> views;
  views.reserve(static_cast<std::size_t>(domain_count));
  for (DomainId d = 0; d < domain_count; ++d) views.push_back(ControllerView{d, truth.values});
  return views;
}

ControllerView refresh_own_domain(ControllerView view, const BisRegistry& registry,
                                  const TrueNetworkState& truth) {
  for (std::size_t i = 0; i < registry.size(); ++i) {
    if (registry.origin(i) == view.owner) view.believed_values[i] = truth.values[i];
  }
  return view;
}

void apply_broadcast(std::vector<ControllerView>& views, StalenessVector& staleness,
                     const ActionVector& action, const TrueNetworkState& truth, const BisRegistry& registry,
                     std::optional<int> budget) {
  const std::size_t n = registry.size();
  if (action.size() != n || staleness.counts.size() != n || truth.values.size() != n) {
    throw std::invalid_argument("broadcast vectors do not match the BIS registry");
  }
  if (budget && action.count() > *budget) {
    throw BudgetExceeded("action broadcasts " + std::to_string(action.count()) + " BISes with budget " +
                         std::to_string(*budget));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!action.bits[i]) continue;
    staleness.counts[i] = 0;
    for (ControllerView& view : views) view.believed_values[i] = truth.values[i];
  }
  for (ControllerView& view : views) view = refresh_own_domain(std::move(view), registry, truth);
}

StalenessVector tick_staleness(StalenessVector staleness) {
  for (auto& c : staleness.counts) ++c;
  return staleness;
}

}  // namespace macs
