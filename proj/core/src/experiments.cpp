#include "softran/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "softran/allocators.hpp"
#include "softran/learn/mlp.hpp"
#include "softran/netmodel.hpp"
#include "softran/rng.hpp"

namespace softran {

const char* to_string(Preset preset) {
  switch (preset) {
    case Preset::Overhead: return "overhead";
    case Preset::Rate: return "rate";
    case Preset::Toc: return "toc";
  }
  return "?";
}

Preset preset_from_string(const std::string& name) {
  if (name == "overhead") return Preset::Overhead;
  if (name == "rate") return Preset::Rate;
  if (name == "toc") return Preset::Toc;
  throw std::invalid_argument("unknown preset '" + name + "' (expected overhead, rate or toc)");
}

ScenarioConfig desk_scale(ScenarioConfig config) {
  config.rrs_count = 2;
  config.subcarrier_count = 8;
  return config;
}

std::vector<std::size_t> desk_user_counts() {
  std::vector<std::size_t> out;
  for (std::size_t n = 2; n <= 24; n += 2) out.push_back(n);
  return out;
}

std::vector<std::size_t> full_user_counts() {
  std::vector<std::size_t> out;
  for (std::size_t n = 8; n <= 64; n += 8) out.push_back(n);
  return out;
}

std::vector<std::uint64_t> seed_list(std::uint64_t first, std::size_t count) {
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(first + i);
  return out;
}

FigurePlan plan_figure(Preset preset, const ScenarioConfig& base, const FigureOptions& options) {
  FigurePlan plan;
  plan.preset = preset;
  plan.config = options.full_scale ? base : desk_scale(base);
  validate(plan.config);
  plan.spec.user_counts = options.full_scale ? full_user_counts() : desk_user_counts();
  plan.spec.seeds = seed_list(base.seed, options.seeds);
  switch (preset) {
    case Preset::Overhead:
      plan.spec.schemes = {Scheme::FixedCentralized, Scheme::FixedDistributed, Scheme::Smart};
      plan.spec.learners = {LearnerKind::Sac};
      break;
    case Preset::Rate:
      plan.spec.schemes = {Scheme::Smart, Scheme::FixedCentralized, Scheme::FixedDistributed};
      plan.spec.learners = {LearnerKind::Sac, LearnerKind::Dqn};
      break;
    case Preset::Toc:
      plan.spec.schemes = {Scheme::Smart};
      plan.spec.learners = {LearnerKind::Sac, LearnerKind::Ddpg};
      break;
  }
  if (!options.schemes.empty()) plan.spec.schemes = options.schemes;
  if (!options.learners.empty()) plan.spec.learners = options.learners;
  if (options.seeds == 0) throw std::invalid_argument("at least one seed is required");
  return plan;
}

FigureOutput run_figure(const FigurePlan& plan, const FigureOptions& options,
                        const std::function<void(const SweepCell&)>& progress) {
  FigureOutput out;
  out.cells = run_sweep(plan.config, plan.spec, options.workers, progress);
  for (const auto& c : out.cells) out.failed_cells += c.ok() ? 0 : 1;
  out.rows = result_rows(out.cells);
  const std::string name = to_string(plan.preset);
  out.table_path = options.out_dir / (name + ".csv");
  out.plot_path = options.out_dir / (name + "_plot.csv");
  write_text(out.table_path, result_csv(out.rows));
  write_text(out.plot_path, summary_csv(summarize(name, out.rows)));
  return out;
}

namespace {

std::string check_overhead_identity() {
  Rng rng(0x5eed, Stream::Evaluation, {1});
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t B = 1 + rng.below(8);
    const std::size_t K = 1 + rng.below(64);
    const BitBudget bits{1 + rng.below(32), 1 + rng.below(32), 1 + rng.below(32)};
    std::vector<std::uint64_t> per_rrs(B);
    std::uint64_t expected = 0;
    for (auto& tau : per_rrs) {
      tau = overhead_distributed(bits, rng.below(40), K);
      expected += tau;
    }
    if (overhead_centralized(per_rrs) != expected) {
      return "centralized overhead differs from the per-RRS sum at trial " + std::to_string(trial);
    }
  }
  return {};
}

std::string check_toc_round_trip(const ValidationHooks& hooks) {
  Rng rng(0x5eed, Stream::Evaluation, {2});
  for (int trial = 0; trial < 200; ++trial) {
    const TocWeights w{rng.uniform(0.0, 1e-6), rng.uniform(0.0, 10.0)};
    const double r = rng.uniform(1e3, 1e7);
    const double tau = rng.uniform(0.0, 1e5);
    const double gamma = rng.uniform(0.0, 1e10);
    const double expected = r - w.beta * tau - w.alpha * gamma;
    const double got = hooks.toc_centralized(r, tau, gamma, w);
    if (std::abs(got - expected) > 1e-9 * std::max(1.0, std::abs(expected))) {
      return "TOC of rate " + format_number(r) + " gave " + format_number(got) + ", expected " +
             format_number(expected);
    }
  }
  return {};
}

std::string check_gradients() {
  Rng rng(0x5eed, Stream::Evaluation, {3});
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::size_t> sizes{1 + rng.below(5)};
    const std::size_t depth = 1 + rng.below(3);
    for (std::size_t l = 0; l < depth; ++l) sizes.push_back(1 + rng.below(8));
    sizes.push_back(1 + rng.below(4));
    learn::Mlp net(sizes, learn::Activation::Tanh, rng);
    Eigen::MatrixXd x(static_cast<Eigen::Index>(sizes.front()), 3);
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = rng.normal();
    learn::ForwardCache cache;
    const Eigen::MatrixXd y = net.forward(x, &cache);
    // Loss = sum(y^2) / 2, so dL/dy = y.
    const auto grad = net.backward(cache, y);
    const double h = 1e-6;
    for (Eigen::Index p = 0; p < net.params().size(); ++p) {
      const double saved = net.params()(p);
      net.mutable_params()(p) = saved + h;
      const double up = 0.5 * net.forward(x).squaredNorm();
      net.mutable_params()(p) = saved - h;
      const double down = 0.5 * net.forward(x).squaredNorm();
      net.mutable_params()(p) = saved;
      const double numeric = (up - down) / (2.0 * h);
      const double analytic = grad.params(p);
      const double err = std::abs(numeric - analytic) / std::max(1e-6, std::abs(numeric) + std::abs(analytic));
      if (err > 1e-4) {
        return "parameter " + std::to_string(p) + " of net " + std::to_string(trial) +
               ": backprop " + format_number(analytic) + " vs finite difference " +
               format_number(numeric);
      }
    }
  }
  return {};
}

std::string check_decode_feasibility() {
  Rng rng(0x5eed, Stream::Evaluation, {4});
  for (int trial = 0; trial < 200; ++trial) {
    TopologyParams params;
    params.rrs_count = 1 + rng.below(4);
    params.subcarrier_count = 1 + rng.below(16);
    const Topology topology = generate_topology(params, 100 + static_cast<std::uint64_t>(trial));
    const PathLossModel model = calibrated_path_loss(3.0, 10.0, params.cell_radius, params.p_max_watts, 1e-13);
    const UserSet users = spawn_users(topology, model, rng.below(12), static_cast<std::uint64_t>(trial));
    const auto scopes = make_scopes(topology, users);
    std::size_t n = 0;
    for (const auto& s : scopes) n += s.action_size();
    std::vector<double> raw(n);
    for (double& v : raw) v = rng.uniform(-1.0, 1.0);
    const Allocation alloc = decode_joint(raw, scopes, Mode::Centralized, topology.rrs_count(),
                                          users.size(), topology.subcarrier_count);
    const std::string problem = check_allocation(alloc, topology, 1e-9);
    if (!problem.empty()) return "trial " + std::to_string(trial) + ": " + problem;
  }
  return {};
}

std::string check_determinism() {
  ScenarioConfig config = desk_scale(ScenarioConfig{});
  config.slots = 40;
  config.train_slots = 30;
  config.batch_size = 8;
  config.hidden_layers = {16};
  config.users = 5;
  SweepSpec spec{{3, 5}, {Scheme::Smart}, {LearnerKind::Sac}, {1, 2}};
  const std::string a = result_csv(result_rows(run_sweep(config, spec, 1)));
  const std::string b = result_csv(result_rows(run_sweep(config, spec, 2)));
  if (a != b) return "two sweeps with identical seeds produced different CSV";
  return {};
}

}  // namespace

std::vector<CheckResult> run_validation(const ValidationHooks& hooks) {
  const std::vector<std::pair<std::string, std::function<std::string()>>> checks = {
      {"overhead identity", check_overhead_identity},
      {"toc round trip", [&hooks] { return check_toc_round_trip(hooks); }},
      {"gradient check", check_gradients},
      {"decode feasibility", check_decode_feasibility},
      {"determinism", check_determinism},
  };
  std::vector<CheckResult> results;
  for (const auto& [name, fn] : checks) {
    CheckResult r;
    r.name = name;
    const auto start = std::chrono::steady_clock::now();
    try {
      r.detail = fn();
      r.passed = r.detail.empty();
    } catch (const std::exception& e) {
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    results.push_back(std::move(r));
  }
  return results;
}

void print_validation(const std::vector<CheckResult>& checks, std::ostream& out) {
  for (const auto& c : checks) {
    char ms[32];
    std::snprintf(ms, sizeof ms, "%.1f ms", c.seconds * 1e3);
    out << (c.passed ? "PASS " : "FAIL ") << c.name << " (" << ms << ")\n";
    if (!c.passed) out << "     " << c.detail << '\n';
  }
}

}  // namespace softran
