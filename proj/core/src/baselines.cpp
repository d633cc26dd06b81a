#include "macs/baselines.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "macs/agent.hpp"
#include "macs/errors.hpp"

namespace macs {

namespace {

constexpr std::array<std::pair<PolicyKind, std::string_view>, 5> kNames{{
    {PolicyKind::kFullSync, "full_sync"},
    {PolicyKind::kNoSync, "no_sync"},
    {PolicyKind::kGreedyMinMax, "greedy"},
    {PolicyKind::kAntiEntropy, "anti_entropy"},
    {PolicyKind::kLearned, "learned"},
}};

}  // namespace

std::string_view to_string(PolicyKind kind) {
  for (const auto& [k, name] : kNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<PolicyKind> parse_policy_kind(std::string_view name) {
  for (const auto& [k, n] : kNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

ActionVector full_sync_action(std::size_t n) { return ActionVector::ones(n); }

ActionVector no_sync_action(std::size_t n) { return ActionVector::zeros(n); }

ActionVector greedy_minmax_action(const StalenessVector& staleness, int budget) {
  if (budget < 0) throw std::invalid_argument("budget must be nonnegative");
  const std::size_t n = staleness.counts.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return staleness.counts[a] > staleness.counts[b]; });
  ActionVector action = ActionVector::zeros(n);
  const std::size_t keep = std::min(n, static_cast<std::size_t>(budget));
  for (std::size_t k = 0; k < keep; ++k) action.bits[order[k]] = 1;
  return action;
}

ActionVector anti_entropy_action(std::size_t n, int budget, Rng& rng) {
  if (budget < 0) throw std::invalid_argument("budget must be nonnegative");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  ActionVector action = ActionVector::zeros(n);
  const std::size_t keep = std::min(n, static_cast<std::size_t>(budget));
  for (std::size_t k = 0; k < keep; ++k) action.bits[order[k]] = 1;
  return action;
}

namespace {

class FullSync final : public SyncPolicy {
 public:
  PolicyKind kind() const override { return PolicyKind::kFullSync; }
  ActionVector act(const StalenessVector& s, int, Rng&) override { return full_sync_action(s.counts.size()); }
};

class NoSync final : public SyncPolicy {
 public:
  PolicyKind kind() const override { return PolicyKind::kNoSync; }
  ActionVector act(const StalenessVector& s, int, Rng&) override { return no_sync_action(s.counts.size()); }
};

class GreedyMinMax final : public SyncPolicy {
 public:
  PolicyKind kind() const override { return PolicyKind::kGreedyMinMax; }
  ActionVector act(const StalenessVector& s, int budget, Rng&) override { return greedy_minmax_action(s, budget); }
};

class AntiEntropy final : public SyncPolicy {
 public:
  PolicyKind kind() const override { return PolicyKind::kAntiEntropy; }
  ActionVector act(const StalenessVector& s, int budget, Rng& rng) override {
    return anti_entropy_action(s.counts.size(), budget, rng);
  }
};

class Learned final : public SyncPolicy {
 public:
  explicit Learned(const BranchingNet& net) : net_(net) {}
  PolicyKind kind() const override { return PolicyKind::kLearned; }
  ActionVector act(const StalenessVector& s, int budget, Rng&) override {
    return greedy_action(net_.forward(net_.encode(s)).q_values, budget);
  }

 private:
  const BranchingNet& net_;
};

}  // namespace

std::unique_ptr<SyncPolicy> make_policy(PolicyKind kind, const BranchingNet* net) {
  switch (kind) {
    case PolicyKind::kFullSync:
      return std::make_unique<FullSync>();
    case PolicyKind::kNoSync:
      return std::make_unique<NoSync>();
    case PolicyKind::kGreedyMinMax:
      return std::make_unique<GreedyMinMax>();
    case PolicyKind::kAntiEntropy:
      return std::make_unique<AntiEntropy>();
    case PolicyKind::kLearned:
      if (net == nullptr) throw MissingCheckpoint("the learned policy needs a trained network");
      return std::make_unique<Learned>(*net);
  }
  throw std::invalid_argument("unknown policy kind");
}

}  // namespace macs
