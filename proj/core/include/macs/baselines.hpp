#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "macs/nn.hpp"
#include "macs/rng.hpp"
#include "macs/views.hpp"

namespace macs {

enum class PolicyKind { kFullSync, kNoSync, kGreedyMinMax, kAntiEntropy, kLearned };

std::string_view to_string(PolicyKind kind);
/// Accepts the canonical names (full_sync, no_sync, greedy, anti_entropy, learned).
std::optional<PolicyKind> parse_policy_kind(std::string_view name);

ActionVector full_sync_action(std::size_t n);
ActionVector no_sync_action(std::size_t n);

/// Broadcast the `budget` stalest BISes; ties go to the lower index.
ActionVector greedy_minmax_action(const StalenessVector& staleness, int budget);

/// Uniformly random subset of size min(budget, n).
ActionVector anti_entropy_action(std::size_t n, int budget, Rng& rng);

class SyncPolicy {
 public:
  virtual ~SyncPolicy() = default;
  virtual PolicyKind kind() const = 0;
  /// Full and no sync are not bound by the slot budget.
  bool budget_exempt() const { return kind() == PolicyKind::kFullSync || kind() == PolicyKind::kNoSync; }
  virtual ActionVector act(const StalenessVector& state, int budget, Rng& rng) = 0;
};

/// `net` is required for PolicyKind::kLearned and ignored otherwise.
std::unique_ptr<SyncPolicy> make_policy(PolicyKind kind, const BranchingNet* net = nullptr);

}  // namespace macs
