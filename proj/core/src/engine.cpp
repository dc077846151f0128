#include "softran/engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "softran/allocators.hpp"
#include "softran/netmodel.hpp"
#include "softran/phy_metrics.hpp"

namespace softran {

Aggregates aggregate(const std::vector<SlotRecord>& records) {
  Aggregates a;
  const bool any_eval = std::any_of(records.begin(), records.end(),
                                    [](const SlotRecord& r) { return !r.training; });
  for (const auto& r : records) {
    if (any_eval && r.training) continue;
    ++a.slots;
    a.mean_rate += r.executed_rate();
    a.rate_cnt += r.r_cnt;
    a.rate_dst += r.r_dst;
    a.tau_cnt += r.tau_cnt;
    a.max_tau_dst += r.max_tau_dst();
    a.tau_executed += r.executed_tau();
    a.gamma_cnt += r.gamma_cnt;
    a.max_gamma_dst += r.max_gamma_dst();
    a.gamma_executed += r.executed_gamma();
    a.toc += r.executed_toc();
    a.toc_cnt += r.toc_cnt;
    a.toc_dst += r.toc_dst;
    a.fraction_centralized += r.executed == Mode::Centralized ? 1.0 : 0.0;
  }
  if (a.slots == 0) return a;
  const double n = static_cast<double>(a.slots);
  for (double* v : {&a.mean_rate, &a.rate_cnt, &a.rate_dst, &a.tau_cnt, &a.max_tau_dst,
                    &a.tau_executed, &a.gamma_cnt, &a.max_gamma_dst, &a.gamma_executed, &a.toc,
                    &a.toc_cnt, &a.toc_dst, &a.fraction_centralized}) {
    *v /= n;
  }
  return a;
}

namespace {

bool learned(Scheme scheme) { return scheme != Scheme::EqualPower; }

// Allocation learners of both modes. Agents are rebuilt whenever the user
// partition they were sized for changes.
class Learners {
 public:
  Learners(const ScenarioConfig& config, std::uint64_t seed, std::size_t rrs_count)
      : settings_(config.learner_settings()), seed_(seed), local_(rrs_count),
        local_counts_(rrs_count, 0), local_generation_(rrs_count, 0) {}

  AllocLearner* central(const std::vector<AllocScope>& scopes, std::size_t obs_dim,
                        const std::vector<std::size_t>& counts) {
    if (!central_ || counts != central_counts_) {
      central_ = std::make_unique<AllocLearner>(
          obs_dim, scopes, settings_, stream_key(seed_, Stream::CentralAgent, {central_generation_++}));
      central_counts_ = counts;
    }
    return central_.get();
  }

  AllocLearner* local(const AllocScope& scope, std::size_t obs_dim) {
    const std::size_t b = scope.rrs;
    if (scope.empty()) {
      local_[b].reset();
      local_counts_[b] = 0;
      return nullptr;
    }
    if (!local_[b] || local_counts_[b] != scope.users.size()) {
      local_[b] = std::make_unique<AllocLearner>(
          obs_dim, std::vector<AllocScope>{scope}, settings_,
          stream_key(seed_, Stream::LocalAgent, {b, local_generation_[b]++}));
      local_counts_[b] = scope.users.size();
    }
    return local_[b].get();
  }

 private:
  LearnerSettings settings_;
  std::uint64_t seed_;
  std::unique_ptr<AllocLearner> central_;
  std::vector<std::size_t> central_counts_;
  std::uint64_t central_generation_ = 0;
  std::vector<std::unique_ptr<AllocLearner>> local_;
  std::vector<std::size_t> local_counts_;
  std::vector<std::uint64_t> local_generation_;
};

double sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

}  // namespace

RunResult run_episode(const ScenarioConfig& config, std::uint64_t seed) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();

  const Topology topology = generate_topology(config.topology_params(), seed);
  const PathLossModel path_loss = config.path_loss();
  const double noise = config.noise_power();
  const double bandwidth = config.subcarrier_bandwidth_hz;
  const std::size_t B = topology.rrs_count();
  const std::size_t K = topology.subcarrier_count;
  const BitBudget bits = config.bit_budget();
  const TocWeights weights = config.toc_weights();
  const std::vector<std::uint64_t> hidden(config.hidden_layers.begin(), config.hidden_layers.end());

  UserSet users = spawn_users(topology, path_loss, config.users, seed);
  Learners learners(config, seed, B);
  SdnController sdn(config.sdn_config(), B, K, stream_key(seed, Stream::SdnAgent));

  RunResult result;
  result.seed = seed;
  result.records.reserve(config.slots);

  for (std::size_t t = 0; t < config.slots; ++t) {
    const bool training = t < config.train_slots;
    if (t > 0) users = step_traffic(users, topology, path_loss, config.traffic(), seed, t);
    const std::size_t U = users.size();
    const std::vector<std::size_t> counts = users.counts();
    const ChannelTensor h = sample_channels(topology, path_loss, users, seed, t);

    Mode mode = Mode::Centralized;
    switch (config.scheme) {
      case Scheme::Smart: mode = sdn.decide(!training).mode(); break;
      case Scheme::FixedCentralized: mode = Mode::Centralized; break;
      case Scheme::FixedDistributed: mode = Mode::Distributed; break;
      case Scheme::EqualPower: mode = Mode::Centralized; break;
    }
    const ModeDecision decision(mode);
    if (!decision.exclusive()) ++result.exclusivity_violations;

    const std::vector<AllocScope> scopes = make_scopes(topology, users);

    // Allocation in both modes on the same channel draw.
    Allocation alloc_cnt, alloc_dst;
    AllocLearner* central = nullptr;
    Eigen::VectorXd obs_cnt, raw_cnt;
    std::vector<AllocLearner*> local(B, nullptr);
    std::vector<Eigen::VectorXd> obs_dst(B);
    std::vector<Eigen::VectorXd> raw_dst;
    if (!learned(config.scheme) || U == 0) {
      alloc_cnt = equal_power_allocation(Mode::Centralized, topology, users);
      alloc_dst = equal_power_allocation(Mode::Distributed, topology, users);
    } else {
      obs_cnt = centralized_observation(h, topology, noise);
      central = learners.central(scopes, static_cast<std::size_t>(obs_cnt.size()), counts);
      AllocDecision cnt = allocate_centralized(*central, obs_cnt, scopes, topology, U, !training);
      alloc_cnt = std::move(cnt.allocation);
      raw_cnt = std::move(cnt.raw);
      for (std::size_t b = 0; b < B; ++b) {
        if (!scopes[b].empty()) obs_dst[b] = distributed_observation(h, topology, users, noise, b);
        local[b] = learners.local(scopes[b], static_cast<std::size_t>(obs_dst[b].size()));
      }
      AllocDecision dst = allocate_distributed(local, obs_dst, scopes, topology, U, !training);
      alloc_dst = std::move(dst.allocation);
      raw_dst = std::move(dst.local_raw);
    }

    // Metrics.
    const std::vector<double> grid_cnt = rate_grid_centralized(h, alloc_cnt, noise);
    const std::vector<double> grid_dst = rate_grid_distributed(h, alloc_dst, topology, users, noise);

    SlotRecord record;
    record.slot = t;
    record.training = training;
    record.executed = decision.mode();
    record.user_counts = counts;
    record.r_cnt = sum(grid_cnt) * bandwidth;
    record.r_dst = sum(grid_dst) * bandwidth;
    std::vector<std::uint64_t> tau_per_rrs(B);
    record.tau_dst.resize(B);
    record.gamma_dst.resize(B);
    for (std::size_t b = 0; b < B; ++b) {
      tau_per_rrs[b] = overhead_distributed(bits, counts[b], K);
      record.tau_dst[b] = static_cast<double>(tau_per_rrs[b]);
      record.gamma_dst[b] = static_cast<double>(complexity_distributed(
          distributed_shape(config.train_slots, config.batch_size, hidden, counts[b], K)));
    }
    record.tau_cnt = static_cast<double>(overhead_centralized(tau_per_rrs));
    record.gamma_cnt = static_cast<double>(complexity_centralized(
        centralized_shape(config.train_slots, config.batch_size, hidden, U, K, B)));
    fill_toc(record, weights);

    // Learning: allocators are bandits rewarded with mean spectral
    // efficiency per active subcarrier.
    if (training && central != nullptr) {
      std::vector<double> branch;
      for (std::size_t b = 0; b < B; ++b) {
        if (scopes[b].empty()) continue;
        for (std::size_t k = 0; k < K; ++k) branch.push_back(grid_cnt[b * K + k]);
      }
      const Eigen::VectorXd branch_cnt =
          Eigen::Map<const Eigen::VectorXd>(branch.data(), static_cast<Eigen::Index>(branch.size()));
      central->learn(obs_cnt, raw_cnt, branch_cnt.mean(), branch_cnt);
      for (std::size_t b = 0; b < B; ++b) {
        if (local[b] == nullptr) continue;
        const Eigen::VectorXd branch_b = Eigen::Map<const Eigen::VectorXd>(
            grid_dst.data() + b * K, static_cast<Eigen::Index>(K));
        local[b]->learn(obs_dst[b], raw_dst[b], branch_b.mean(), branch_b);
      }
    }
    if (config.scheme == Scheme::Smart) sdn.record_slot(record, training);
    result.records.push_back(std::move(record));
  }

  result.aggregates = aggregate(result.records);
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::vector<SweepCell> run_sweep(const ScenarioConfig& base, const SweepSpec& spec,
                                 std::size_t workers,
                                 const std::function<void(const SweepCell&)>& progress) {
  if (spec.user_counts.empty() || spec.schemes.empty() || spec.learners.empty() ||
      spec.seeds.empty()) {
    throw std::invalid_argument("run_sweep: every axis needs at least one value");
  }
  validate(base);
  std::vector<SweepCell> cells;
  for (Scheme scheme : spec.schemes) {
    for (LearnerKind learner : spec.learners) {
      for (std::size_t users : spec.user_counts) {
        for (std::uint64_t seed : spec.seeds) {
          SweepCell cell;
          cell.index = cells.size();
          cell.scheme = scheme;
          cell.learner = learner;
          cell.user_count = users;
          cell.seed = seed;
          cells.push_back(cell);
        }
      }
    }
  }

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, cells.size());
  std::atomic<std::size_t> next{0};
  std::mutex progress_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      SweepCell& cell = cells[i];
      try {
        ScenarioConfig config = base;
        config.scheme = cell.scheme;
        config.learner = cell.learner;
        config.users = cell.user_count;
        config.seed = cell.seed;
        const RunResult run = run_episode(config, cell.seed);
        cell.aggregates = run.aggregates;
        cell.exclusivity_violations = run.exclusivity_violations;
      } catch (const std::exception& e) {
        cell.error = e.what();
      }
      if (progress) {
        std::lock_guard<std::mutex> lock(progress_mutex);
        progress(cell);
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return cells;
}

}  // namespace softran
