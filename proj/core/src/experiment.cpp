#include "macs/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "macs/baselines.hpp"
#include "macs/checkpoint.hpp"
#include "macs/errors.hpp"

namespace macs {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

bool lists(const ScenarioConfig& cfg, PolicyKind kind) {
  for (PolicyKind k : cfg.experiment.policies) {
    if (k == kind) return true;
  }
  return false;
}

struct Rollout {
  std::vector<PolicySlot> slots;
};

Rollout roll_policy(const ScenarioConfig& cfg, std::uint64_t seed, PolicyKind kind, const BranchingNet* learned) {
  SyncEnvironment env(episode_config(cfg, cfg.experiment.eval_horizon, seed));
  auto policy = make_policy(kind, learned);
  Rng rng = derive_rng(seed, Stream::kPolicy);
  Rollout out;
  double discount = cfg.agent.gamma;
  double accumulated = 0.0;
  while (!env.finished()) {
    PolicySlot row;
    row.seed = seed;
    row.policy = kind;
    row.slot = env.slot();
    row.budget = env.current_budget();
    const ActionVector action = policy->act(env.state(), row.budget, rng);
    const SlotOutcome outcome = policy->budget_exempt() ? env.step_unbounded(action) : env.step(action);
    row.broadcasts = action.count();
    row.avg_latency = outcome.avg_latency_after;
    row.reward = outcome.reward;
    accumulated += discount * outcome.reward;
    discount *= cfg.agent.gamma;
    row.accumulated_reward = accumulated;
    out.slots.push_back(row);
  }
  return out;
}

}  // namespace

EpisodeConfig episode_config(const ScenarioConfig& cfg, std::int64_t horizon, std::uint64_t seed) {
  EpisodeConfig ep;
  ep.network = cfg.network;
  ep.dynamics = cfg.dynamics;
  ep.horizon = horizon;
  ep.gamma = cfg.agent.gamma;
  ep.seed = seed;
  return ep;
}

TrainResult train_agent(const ScenarioConfig& cfg, std::uint64_t seed, bool pretrain) {
  const std::int64_t horizon = cfg.training.horizon;
  SyncEnvironment env(episode_config(cfg, horizon, seed));
  BranchingNet net(resolved_shape(cfg, env.bis_count()), resolved_input_scale(cfg), seed,
                   resolved_input_cap(cfg));
  MacsAgent agent(resolved_agent(cfg, horizon), std::move(net));
  Rng rng = derive_rng(seed, Stream::kPolicy);

  if (pretrain && cfg.training.pretrain_transitions > 0) {
    Rng history_rng = derive_rng(seed, Stream::kHistory);
    SyncEnvironment history(episode_config(cfg, horizon, history_rng()));
    auto policy = make_policy(cfg.training.history_policy, nullptr);
    collect_history(
        history, [&](const StalenessVector& s, int budget) { return policy->act(s, budget, history_rng); },
        static_cast<std::size_t>(cfg.training.pretrain_transitions), agent.config().offset_unit, agent.replay());
    if (agent.replay().size() >= static_cast<std::size_t>(agent.config().minibatch)) {
      agent.pretrain(cfg.training.pretrain_steps, rng);
    }
  }

  TrainResult result;
  result.rows = run_training(env, agent, rng);
  result.net = agent.online();
  return result;
}

const PolicySummary& CompareResult::of(PolicyKind kind) const {
  for (const auto& s : summary) {
    if (s.policy == kind) return s;
  }
  throw std::out_of_range("policy " + std::string(to_string(kind)) + " was not compared");
}

CompareResult compare_policies(const ScenarioConfig& cfg, const std::vector<std::uint64_t>& seeds,
                               const BranchingNet* learned) {
  if (lists(cfg, PolicyKind::kLearned) && learned == nullptr) {
    throw MissingCheckpoint("the learned policy needs a checkpoint");
  }
  CompareResult result;
  std::map<PolicyKind, std::vector<double>> latency, reduction, reward;
  for (std::uint64_t seed : seeds) {
    const Rollout reference = roll_policy(cfg, seed, PolicyKind::kNoSync, nullptr);
    for (PolicyKind kind : cfg.experiment.policies) {
      Rollout run = kind == PolicyKind::kNoSync ? reference : roll_policy(cfg, seed, kind, learned);
      double accumulated = 0.0, latency_sum = 0.0;
      for (std::size_t t = 0; t < run.slots.size(); ++t) {
        PolicySlot& row = run.slots[t];
        row.latency_reduction = reference.slots[t].avg_latency - row.avg_latency;
        accumulated += row.latency_reduction;
        row.accumulated_reduction = accumulated;
        latency_sum += row.avg_latency;
      }
      latency[kind].push_back(latency_sum / static_cast<double>(run.slots.size()));
      reduction[kind].push_back(run.slots.back().accumulated_reduction);
      reward[kind].push_back(run.slots.back().accumulated_reward);
      result.rows.insert(result.rows.end(), run.slots.begin(), run.slots.end());
    }
  }
  auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  for (PolicyKind kind : cfg.experiment.policies) {
    result.summary.push_back(PolicySummary{kind, mean(latency[kind]), mean(reduction[kind]), mean(reward[kind])});
  }
  return result;
}

std::string training_csv(const std::vector<TrainingRow>& rows) {
  std::ostringstream out;
  out << kTrainingCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.slot << ',' << r.budget << ',' << num(r.reward) << ',' << num(r.offset_reward) << ','
        << (r.loss ? num(*r.loss) : std::string()) << ',' << num(r.epsilon) << '\n';
  }
  return out.str();
}

std::string compare_csv(const CompareResult& result) {
  std::ostringstream out;
  out << kCompareCsvHeader << '\n';
  for (const auto& r : result.rows) {
    out << r.seed << ',' << to_string(r.policy) << ',' << r.slot << ',' << r.budget << ',' << r.broadcasts << ','
        << num(r.avg_latency) << ',' << num(r.reward) << ',' << num(r.accumulated_reward) << ','
        << num(r.latency_reduction) << ',' << num(r.accumulated_reduction) << '\n';
  }
  return out.str();
}

std::string summary_csv(const CompareResult& result) {
  std::ostringstream out;
  out << kSummaryCsvHeader << '\n';
  for (const auto& s : result.summary) {
    out << to_string(s.policy) << ',' << num(s.mean_latency) << ',' << num(s.mean_accumulated_reduction) << ','
        << num(s.mean_accumulated_reward) << '\n';
  }
  return out.str();
}

std::optional<SweepAxis> parse_sweep_axis(const std::string& name) {
  if (name == "bis_std") return SweepAxis::kBisStd;
  if (name == "budget_lambda") return SweepAxis::kBudgetLambda;
  return std::nullopt;
}

std::string to_string(SweepAxis axis) { return axis == SweepAxis::kBisStd ? "bis_std" : "budget_lambda"; }

ScenarioConfig with_axis(const ScenarioConfig& cfg, SweepAxis axis, double value) {
  ScenarioConfig out = cfg;
  if (axis == SweepAxis::kBudgetLambda) {
    out.dynamics.budget_mean = value;
  } else {
    GaussianValues g;
    if (const auto* existing = std::get_if<GaussianValues>(&cfg.dynamics.value_distribution)) g = *existing;
    g.std = value;
    out.dynamics.value_distribution = g;
  }
  validate(out);
  return out;
}

std::vector<SweepPoint> scenario_sweep(const ScenarioConfig& cfg, SweepAxis axis, const std::vector<double>& values,
                                       const BranchingNet* learned) {
  std::vector<SweepPoint> points;
  for (double value : values) {
    const ScenarioConfig point_cfg = with_axis(cfg, axis, value);
    std::optional<BranchingNet> trained;
    const BranchingNet* net = learned;
    if (net == nullptr && lists(point_cfg, PolicyKind::kLearned)) {
      trained = train_agent(point_cfg, point_cfg.experiment.train_seed).net;
      net = &*trained;
    }
    points.push_back(SweepPoint{value, compare_policies(point_cfg, point_cfg.experiment.seeds, net)});
  }
  return points;
}

std::string sweep_csv(SweepAxis axis, const std::vector<SweepPoint>& points) {
  std::ostringstream out;
  out << kSweepCsvHeader << '\n';
  for (const auto& p : points) {
    for (const auto& s : p.result.summary) {
      out << to_string(axis) << ',' << num(p.value) << ',' << to_string(s.policy) << ',' << num(s.mean_latency)
          << ',' << num(s.mean_accumulated_reduction) << ',' << num(s.mean_accumulated_reward) << '\n';
    }
  }
  return out.str();
}

std::string topology_csv(const ScenarioConfig& cfg) {
  const Network net = build_network(cfg.network);
  const auto p = change_probabilities(cfg.dynamics, net.registry.size());
  std::ostringstream out;
  out << "index,kind,a,b,origin,change_prob\n";
  for (std::size_t i = 0; i < net.registry.size(); ++i) {
    const BisEntry& e = net.registry.entry(i);
    if (const auto* g = std::get_if<GatewayDelay>(&e)) {
      out << i << ",gateway," << g->src << ',' << g->dst;
    } else {
      const auto& s = std::get<ServerDelay>(e);
      out << i << ",server," << s.service << ',' << s.domain;
    }
    out << ',' << net.registry.origin(i) << ',' << num(p[i]) << '\n';
  }
  return out.str();
}

namespace {

std::filesystem::path prepare(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  return dir;
}

std::vector<std::filesystem::path> write_training(const ScenarioConfig& cfg, const std::filesystem::path& out_dir,
                                                  bool pretrain, const std::string& stem) {
  const auto dir = prepare(out_dir);
  const TrainResult result = train_agent(cfg, cfg.experiment.train_seed, pretrain);
  const auto ckpt = dir / (stem + "checkpoint.bin");
  const auto csv = dir / (stem + "training.csv");
  save_checkpoint(result.net, ckpt);
  write_file(csv, training_csv(result.rows));
  return {ckpt, csv};
}

std::optional<BranchingNet> load_learned(const ScenarioConfig& cfg) {
  if (cfg.experiment.checkpoint.empty()) return std::nullopt;
  return load_checkpoint(cfg.experiment.checkpoint);
}

}  // namespace

std::vector<std::filesystem::path> cmd_train(const ScenarioConfig& cfg, const std::filesystem::path& out_dir) {
  return write_training(cfg, out_dir, true, "");
}

std::vector<std::filesystem::path> cmd_online_train(const ScenarioConfig& cfg, const std::filesystem::path& out_dir) {
  ScenarioConfig online = cfg;
  online.training.pretrain_steps = 0;
  online.training.pretrain_transitions = 0;
  return write_training(online, out_dir, false, "online_");
}

std::vector<std::filesystem::path> cmd_compare(const ScenarioConfig& cfg, const std::filesystem::path& out_dir) {
  const auto dir = prepare(out_dir);
  std::optional<BranchingNet> learned;
  if (lists(cfg, PolicyKind::kLearned)) {
    learned = load_learned(cfg);
    if (!learned) throw MissingCheckpoint("policy 'learned' requires --checkpoint");
  }
  const CompareResult result = compare_policies(cfg, cfg.experiment.seeds, learned ? &*learned : nullptr);
  const auto rows = dir / "compare.csv";
  const auto summary = dir / "compare_summary.csv";
  write_file(rows, compare_csv(result));
  write_file(summary, summary_csv(result));
  return {rows, summary};
}

std::vector<std::filesystem::path> cmd_scenario_sweep(const ScenarioConfig& cfg, SweepAxis axis,
                                                      const std::vector<double>& values,
                                                      const std::filesystem::path& out_dir) {
  const auto dir = prepare(out_dir);
  const std::optional<BranchingNet> learned = load_learned(cfg);
  const auto points = scenario_sweep(cfg, axis, values, learned ? &*learned : nullptr);
  const auto path = dir / ("sweep_" + to_string(axis) + ".csv");
  write_file(path, sweep_csv(axis, points));
  return {path};
}

std::vector<std::filesystem::path> cmd_gen_topology(const ScenarioConfig& cfg, const std::filesystem::path& out_dir) {
  const auto dir = prepare(out_dir);
  const auto path = dir / "topology.csv";
  write_file(path, topology_csv(cfg));
  return {path};
}

}  // namespace macs
