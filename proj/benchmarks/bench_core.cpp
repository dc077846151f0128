#include <benchmark/benchmark.h>

#include "softran/allocators.hpp"
#include "softran/engine.hpp"
#include "softran/experiments.hpp"
#include "softran/learn/mlp.hpp"
#include "softran/learn/sac.hpp"

using namespace softran;

namespace {

void BM_MlpForwardBackward(benchmark::State& state) {
  const auto width = static_cast<std::size_t>(state.range(0));
  Rng rng(1, Stream::Evaluation);
  learn::Mlp net({width, 64, 64, width}, learn::Activation::Tanh, rng);
  Eigen::MatrixXd x = Eigen::MatrixXd::Random(static_cast<Eigen::Index>(width), 64);
  learn::ForwardCache cache;
  for (auto _ : state) {
    const Eigen::MatrixXd y = net.forward(x, &cache);
    benchmark::DoNotOptimize(net.backward(cache, y));
  }
}
BENCHMARK(BM_MlpForwardBackward)->Arg(16)->Arg(128)->Arg(512);

void BM_SacUpdate(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  learn::SacAgent agent(dim, dim, learn::SacConfig{}, 1);
  learn::ReplayBuffer buffer(256);
  Rng rng(2, Stream::Evaluation);
  for (int i = 0; i < 256; ++i) {
    learn::Transition t;
    t.state = Eigen::VectorXd::Random(static_cast<Eigen::Index>(dim));
    t.action = Eigen::VectorXd::Random(static_cast<Eigen::Index>(dim));
    t.next_state = t.state;
    t.reward = rng.normal();
    buffer.push(std::move(t));
  }
  const learn::Batch batch = buffer.sample(64, rng);
  for (auto _ : state) benchmark::DoNotOptimize(agent.update(batch));
}
BENCHMARK(BM_SacUpdate)->Arg(32)->Arg(128)->Arg(384)->Unit(benchmark::kMillisecond);

void BM_RateComputation(benchmark::State& state) {
  const ScenarioConfig c;
  const Topology t = generate_topology(c.topology_params(), 1);
  const UserSet users = spawn_users(t, c.path_loss(), static_cast<std::size_t>(state.range(0)), 1);
  const ChannelTensor h = sample_channels(t, c.path_loss(), users, 1, 0);
  const Allocation cnt = equal_power_allocation(Mode::Centralized, t, users);
  const Allocation dst = equal_power_allocation(Mode::Distributed, t, users);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rate_total_centralized(h, cnt, c.noise_power()));
    benchmark::DoNotOptimize(rate_total_distributed(h, dst, t, users, c.noise_power()));
  }
}
BENCHMARK(BM_RateComputation)->Arg(8)->Arg(64);

void BM_EqualPowerEpisode(benchmark::State& state) {
  ScenarioConfig c = desk_scale(ScenarioConfig{});
  c.scheme = Scheme::EqualPower;
  c.users = 16;
  c.slots = 100;
  c.train_slots = 0;
  for (auto _ : state) benchmark::DoNotOptimize(run_episode(c, 1).aggregates);
}
BENCHMARK(BM_EqualPowerEpisode)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
