#include <benchmark/benchmark.h>

#include "macs/agent.hpp"
#include "macs/baselines.hpp"
#include "macs/experiment.hpp"

namespace macs {
namespace {

NetShape paper_shape() { return resolved_shape(ScenarioConfig{}, 34); }

void BM_Forward(benchmark::State& state) {
  const BranchingNet net(paper_shape(), 0.02, 1, 1.0);
  const Eigen::VectorXd x = Eigen::VectorXd::Constant(34, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(net.forward(x));
}
BENCHMARK(BM_Forward);

void BM_TrainStep(benchmark::State& state) {
  AgentConfig cfg;
  cfg.minibatch = static_cast<int>(state.range(0));
  MacsAgent agent(cfg, BranchingNet(paper_shape(), 0.02, 1, 1.0));
  SyncEnvironment env(episode_config(ScenarioConfig{}, 2000, 1));
  collect_history(
      env, [](const StalenessVector& s, int budget) { return greedy_minmax_action(s, budget); }, 256,
      cfg.offset_unit, agent.replay());
  Rng rng(2);
  for (auto _ : state) benchmark::DoNotOptimize(agent.train_step(rng));
}
BENCHMARK(BM_TrainStep)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_EnvStep(benchmark::State& state) {
  const ScenarioConfig cfg;
  SyncEnvironment env(episode_config(cfg, 1 << 30, 1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(env.step(greedy_minmax_action(env.state(), env.current_budget())));
  }
}
BENCHMARK(BM_EnvStep)->Unit(benchmark::kMicrosecond);

void BM_Greedy(benchmark::State& state) {
  Rng rng(3);
  StalenessVector s;
  for (int i = 0; i < 34; ++i) s.counts.push_back(static_cast<std::int64_t>(rng() % 30));
  for (auto _ : state) benchmark::DoNotOptimize(greedy_minmax_action(s, 3));
}
BENCHMARK(BM_Greedy);

}  // namespace
}  // namespace macs

BENCHMARK_MAIN();
