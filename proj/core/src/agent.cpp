#include "macs/agent.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "macs/errors.hpp"

namespace macs {

double EpsilonSchedule::at(std::int64_t step) const {
  if (anneal_steps <= 0 || step >= anneal_steps) return end;
  const double frac = static_cast<double>(step) / static_cast<double>(anneal_steps);
  return start + (end - start) * frac;
}

void validate(const AgentConfig& c) {
  auto is_prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!is_prob(c.epsilon.start) || !is_prob(c.epsilon.end)) throw std::invalid_argument("epsilon must be in [0,1]");
  if (c.minibatch < 1) throw std::invalid_argument("minibatch must be positive");
  if (c.replay_capacity < 1) throw std::invalid_argument("replay capacity must be positive");
  if (c.target_sync_gap < 1) throw std::invalid_argument("target sync gap must be at least 1");
  if (c.offset_unit < 0.0) throw std::invalid_argument("offset unit must be nonnegative");
  if (!(c.learning_rate > 0.0)) throw std::invalid_argument("learning rate must be positive");
  if (!(c.gamma >= 0.0 && c.gamma < 1.0)) throw std::invalid_argument("gamma must be in [0,1)");
  if (c.updates_per_slot < 0) throw std::invalid_argument("updates_per_slot must be nonnegative");
}

ReplayMemory::ReplayMemory(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("replay capacity must be positive");
  buffer_.reserve(std::min<std::size_t>(capacity, 1 << 16));
}

void ReplayMemory::push(Transition t) {
  if (buffer_.size() < capacity_) {
    buffer_.push_back(std::move(t));
    return;
  }
  buffer_[oldest_] = std::move(t);
  oldest_ = (oldest_ + 1) % capacity_;
}

const Transition& ReplayMemory::at(std::size_t k) const {
  if (k >= buffer_.size()) throw std::out_of_range("replay index out of range");
  return buffer_[(oldest_ + k) % buffer_.size()];
}

void ReplayMemory::clear() {
  buffer_.clear();
  oldest_ = 0;
}

void store_transition(ReplayMemory& replay, const StalenessVector& state, const ActionVector& action,
                      double reward, const StalenessVector& next_state, double offset_unit, bool terminal) {
  const int positives = action.count();
  replay.push(Transition{state, action, reward - positives * offset_unit, next_state, terminal});
}

ActionVector greedy_action(const Eigen::MatrixXd& q, int budget) {
  const std::size_t n = static_cast<std::size_t>(q.rows());
  std::vector<std::size_t> wanting;
  for (std::size_t i = 0; i < n; ++i) {
    if (q(i, 1) > q(i, 0)) wanting.push_back(i);
  }
  std::stable_sort(wanting.begin(), wanting.end(), [&](std::size_t a, std::size_t b) { return q(a, 1) > q(b, 1); });
  ActionVector action = ActionVector::zeros(n);
  const std::size_t keep = std::min(wanting.size(), static_cast<std::size_t>(std::max(budget, 0)));
  for (std::size_t k = 0; k < keep; ++k) action.bits[wanting[k]] = 1;
  return action;
}

ActionVector random_budget_action(std::size_t n, int budget, Rng& rng) {
  if (budget < 0) throw std::invalid_argument("budget must be nonnegative");
  std::uniform_int_distribution<int> size_dist(0, budget);
  const std::size_t size = std::min<std::size_t>(static_cast<std::size_t>(size_dist(rng)), n);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  ActionVector action = ActionVector::zeros(n);
  for (std::size_t k = 0; k < size; ++k) action.bits[order[k]] = 1;
  return action;
}

ActionVector select_action(const ForwardOutput& output, int budget, double epsilon, Rng& rng) {
  if (budget < 0) throw std::invalid_argument("budget must be nonnegative");
  if (uniform01(rng) < epsilon) {
    return random_budget_action(static_cast<std::size_t>(output.q_values.rows()), budget, rng);
  }
  return greedy_action(output.q_values, budget);
}

namespace {

Eigen::MatrixXd encode_batch(const BranchingNet& net, std::span<const StalenessVector* const> states) {
  Eigen::MatrixXd x(net.arms(), static_cast<Eigen::Index>(states.size()));
  for (std::size_t b = 0; b < states.size(); ++b) x.col(static_cast<Eigen::Index>(b)) = net.encode(*states[b]);
  return x;
}

/// Targets for a batch of next states, one column per transition.
Eigen::MatrixXd double_q_targets(const BranchingNet& online, const BranchingNet& delayed,
                                 const Eigen::MatrixXd& next_inputs, std::span<const Transition* const> batch,
                                 double gamma) {
  const int arms = online.arms();
  const BatchOutput on = online.forward_batch(next_inputs);
  const BatchOutput off = delayed.forward_batch(next_inputs);
  Eigen::MatrixXd y(arms, static_cast<Eigen::Index>(batch.size()));
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const auto col = static_cast<Eigen::Index>(b);
    for (int i = 0; i < arms; ++i) {
      if (batch[b]->terminal) {
        y(i, col) = batch[b]->reward;
        continue;
      }
      const int best = on.q_values(2 * i + 1, col) > on.q_values(2 * i, col) ? 1 : 0;
      y(i, col) = batch[b]->reward + gamma * off.q_values(2 * i + best, col);
    }
  }
  return y;
}

}  // namespace

Eigen::VectorXd compute_target(const Transition& transition, const BranchingNet& online,
                               const BranchingNet& delayed, double gamma) {
  if (!(online.shape() == delayed.shape())) throw ShapeMismatch("online and delayed nets differ in shape");
  const Transition* batch[] = {&transition};
  const Eigen::MatrixXd next = online.encode(transition.next_state);
  return double_q_targets(online, delayed, next, batch, gamma).col(0);
}

bool sync_target(const BranchingNet& online, BranchingNet& delayed, std::int64_t step, std::int64_t gap) {
  if (gap < 1) throw std::invalid_argument("target sync gap must be at least 1");
  if (step % gap != 0) return false;
  online.copy_into(delayed);
  return true;
}

MacsAgent::MacsAgent(const AgentConfig& config, BranchingNet online)
    : config_(config), online_(std::move(online)), delayed_(online_), replay_(config.replay_capacity) {
  validate(config_);
}

ActionVector MacsAgent::act(const StalenessVector& state, int budget, double epsilon, Rng& rng) const {
  // Same draw order as select_action; the forward pass is skipped when exploring.
  if (uniform01(rng) < epsilon) return random_budget_action(state.counts.size(), budget, rng);
  return greedy_action(online_.forward(online_.encode(state)).q_values, budget);
}

void MacsAgent::build_batch(std::span<const std::size_t> indices, Eigen::MatrixXd& inputs, Eigen::MatrixXi& chosen,
                            Eigen::MatrixXd& targets) const {
  std::vector<const Transition*> batch;
  std::vector<const StalenessVector*> states, next_states;
  batch.reserve(indices.size());
  for (std::size_t k : indices) {
    const Transition& t = replay_.at(k);
    batch.push_back(&t);
    states.push_back(&t.state);
    next_states.push_back(&t.next_state);
  }
  inputs = encode_batch(online_, states);
  const Eigen::MatrixXd next_inputs = encode_batch(online_, next_states);
  targets = double_q_targets(online_, delayed_, next_inputs, batch, config_.gamma);
  chosen.resize(online_.arms(), static_cast<Eigen::Index>(batch.size()));
  for (std::size_t b = 0; b < batch.size(); ++b) {
    for (int i = 0; i < online_.arms(); ++i) chosen(i, static_cast<Eigen::Index>(b)) = batch[b]->action.bits[i];
  }
}

double MacsAgent::batch_loss(std::span<const std::size_t> indices) const {
  Eigen::MatrixXd inputs, targets;
  Eigen::MatrixXi chosen;
  build_batch(indices, inputs, chosen, targets);
  return online_.loss(inputs, chosen, targets);
}

double MacsAgent::train_on_batch(std::span<const std::size_t> indices) {
  Eigen::MatrixXd inputs, targets;
  Eigen::MatrixXi chosen;
  build_batch(indices, inputs, chosen, targets);
  NetTensors grads;
  const double loss = online_.backward(inputs, chosen, targets, grads);
  online_.adam_step(grads, config_.learning_rate);
  return loss;
}

double MacsAgent::train_step(Rng& rng) {
  const auto batch_size = static_cast<std::size_t>(config_.minibatch);
  if (replay_.size() < batch_size) {
    throw InsufficientReplay("replay holds " + std::to_string(replay_.size()) + " transitions, minibatch needs " +
                             std::to_string(batch_size));
  }
  std::uniform_int_distribution<std::size_t> pick(0, replay_.size() - 1);
  std::vector<std::size_t> indices(batch_size);
  for (auto& k : indices) k = pick(rng);
  const double loss = train_on_batch(indices);
  train_steps_ += 1;
  if (sync_target(online_, delayed_, train_steps_, config_.target_sync_gap)) target_syncs_ += 1;
  return loss;
}

void MacsAgent::pretrain(std::int64_t steps, Rng& rng) {
  if (steps <= 0) return;
  if (replay_.empty()) throw InsufficientReplay("pretraining needs a non-empty replay memory");
  for (std::int64_t k = 0; k < steps; ++k) train_step(rng);
}

std::vector<TrainingRow> run_training(SyncEnvironment& env, MacsAgent& agent, Rng& rng) {
  if (static_cast<int>(env.bis_count()) != agent.online().arms()) {
    throw ShapeMismatch("environment BIS count does not match network arm count");
  }
  const AgentConfig& cfg = agent.config();
  std::vector<TrainingRow> rows;
  while (!env.finished()) {
    TrainingRow row;
    row.slot = env.slot();
    row.epsilon = cfg.epsilon.at(env.slot());
    row.budget = env.current_budget();
    const StalenessVector state = env.state();
    const ActionVector action = agent.act(state, row.budget, row.epsilon, rng);
    const SlotOutcome outcome = env.step(action);
    row.reward = outcome.reward;
    row.offset_reward = outcome.reward - action.count() * cfg.offset_unit;
    store_transition(agent.replay(), state, action, outcome.reward, outcome.next_state, cfg.offset_unit,
                     outcome.terminal);
    if (agent.replay().size() >= static_cast<std::size_t>(cfg.minibatch)) {
      double total = 0.0;
      for (int u = 0; u < cfg.updates_per_slot; ++u) total += agent.train_step(rng);
      if (cfg.updates_per_slot > 0) row.loss = total / cfg.updates_per_slot;
    }
    rows.push_back(row);
  }
  return rows;
}

void collect_history(SyncEnvironment& env, const ActionFn& policy, std::size_t count, double offset_unit,
                     ReplayMemory& replay) {
  for (std::size_t k = 0; k < count; ++k) {
    if (env.finished()) env.reset();
    const StalenessVector state = env.state();
    const ActionVector action = policy(state, env.current_budget());
    const SlotOutcome outcome = env.step(action);
    store_transition(replay, state, action, outcome.reward, outcome.next_state, offset_unit, outcome.terminal);
  }
}

}  // namespace macs
