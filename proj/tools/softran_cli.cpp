#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "softran/config.hpp"
#include "softran/engine.hpp"
#include "softran/experiments.hpp"
#include "softran/result_table.hpp"

namespace {

enum Exit { kOk = 0, kConfigError = 1, kRuntimeError = 2, kValidationFailed = 3 };

struct Common {
  std::string config_path;
  std::optional<std::size_t> slots;
  std::optional<std::string> scheme;
  std::optional<std::string> learner;
  std::size_t seeds = 5;
  std::size_t workers = 0;
  std::string out = "results";
  bool full_scale = false;
};

softran::ScenarioConfig load(const Common& c) {
  softran::ScenarioConfig config =
      c.config_path.empty() ? softran::ScenarioConfig{} : softran::parse_config(c.config_path);
  softran::apply_env_overrides(config);
  if (c.slots) {
    // Keep the training share of the run when only the length changes.
    const double share = config.slots ? static_cast<double>(config.train_slots) / config.slots : 0.75;
    config.slots = *c.slots;
    config.train_slots = static_cast<std::size_t>(share * static_cast<double>(*c.slots));
  }
  try {
    if (c.scheme) config.scheme = softran::scheme_from_string(*c.scheme);
    if (c.learner) config.learner = softran::learner_from_string(*c.learner);
  } catch (const std::invalid_argument& e) {
    throw softran::ConfigError(e.what());
  }
  softran::validate(config);
  return config;
}

int cmd_run(const Common& c) {
  softran::ScenarioConfig config = load(c);
  if (!c.full_scale) config = softran::desk_scale(config);
  const auto run = softran::run_episode(config, config.seed);
  const std::filesystem::path out = c.out;
  softran::write_text(out / "run.json", softran::to_json(run, true).dump(1) + "\n");
  softran::write_text(out / "decisions.csv", softran::decision_trace_csv(run));
  const auto& a = run.aggregates;
  std::printf("scheme %s  learner %s  users %zu  seed %llu\n", softran::to_string(config.scheme),
              softran::to_string(config.learner), config.users,
              static_cast<unsigned long long>(config.seed));
  std::printf("eval slots %zu  rate %.6g bit/s  toc %.6g  centralized share %.3f  (%.2f s)\n",
              a.slots, a.mean_rate, a.toc, a.fraction_centralized, run.wall_seconds);
  std::printf("wrote %s and %s\n", (out / "run.json").c_str(), (out / "decisions.csv").c_str());
  return run.exclusivity_violations == 0 ? kOk : kRuntimeError;
}

int cmd_figure(const Common& c, const std::string& preset_name) {
  const softran::Preset preset = [&] {
    try {
      return softran::preset_from_string(preset_name);
    } catch (const std::invalid_argument& e) {
      throw softran::ConfigError(e.what());
    }
  }();
  Common without_overrides = c;
  without_overrides.scheme.reset();
  without_overrides.learner.reset();
  const softran::ScenarioConfig base = load(without_overrides);
  softran::FigureOptions options;
  options.seeds = c.seeds;
  options.workers = c.workers;
  options.full_scale = c.full_scale;
  options.out_dir = c.out;
  try {
    if (c.scheme) options.schemes = {softran::scheme_from_string(*c.scheme)};
    if (c.learner) options.learners = {softran::learner_from_string(*c.learner)};
  } catch (const std::invalid_argument& e) {
    throw softran::ConfigError(e.what());
  }
  const auto plan = softran::plan_figure(preset, base, options);
  const auto output = softran::run_figure(plan, options, [](const softran::SweepCell& cell) {
    std::fprintf(stderr, "  %-21s %-4s users %2zu seed %llu %s\n", softran::to_string(cell.scheme),
                 softran::to_string(cell.learner), cell.user_count,
                 static_cast<unsigned long long>(cell.seed),
                 cell.ok() ? "" : ("FAILED: " + cell.error).c_str());
  });
  std::printf("wrote %s (%zu rows) and %s\n", output.table_path.c_str(), output.rows.size(),
              output.plot_path.c_str());
  if (output.failed_cells) {
    std::fprintf(stderr, "%zu cells failed\n", output.failed_cells);
    return kRuntimeError;
  }
  return kOk;
}

int cmd_validate() {
  const auto checks = softran::run_validation();
  softran::print_validation(checks, std::cout);
  for (const auto& c : checks) {
    if (!c.passed) return kValidationFailed;
  }
  return kOk;
}

int cmd_config(const Common& c) {
  std::cout << softran::serialize_config(load(c));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Smart centralized/distributed resource allocation simulator"};
  app.require_subcommand(1);
  Common common;
  std::string preset = "overhead";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config_path, "Key-value scenario file")->check(CLI::ExistingFile);
    sub->add_option("--slots", common.slots, "Slots per run");
    sub->add_option("--scheme", common.scheme,
                    "smart, fixed-centralized, fixed-distributed or equal-power-baseline");
    sub->add_option("--learner", common.learner, "sac, dqn or ddpg");
    sub->add_option("--out", common.out, "Output directory");
    sub->add_flag("--full-scale", common.full_scale, "Keep the configured network size");
  };

  auto* run = app.add_subcommand("run", "Run one episode and write its slot records");
  add_common(run);
  auto* figure = app.add_subcommand("figure", "Run a figure sweep and write CSV tables");
  add_common(figure);
  figure->add_option("--preset", preset, "overhead, rate or toc");
  figure->add_option("--seeds", common.seeds, "Seeds per cell")->check(CLI::PositiveNumber);
  figure->add_option("--workers", common.workers, "Worker threads (0 = all cores)");
  auto* validate = app.add_subcommand("validate", "Run the fast invariant checks");
  auto* config = app.add_subcommand("config", "Print the resolved configuration");
  config->add_option("--config", common.config_path, "Key-value scenario file")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfigError;
  }

  try {
    if (*run) return cmd_run(common);
    if (*figure) return cmd_figure(common, preset);
    if (*validate) return cmd_validate();
    if (*config) return cmd_config(common);
  } catch (const softran::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kRuntimeError;
  }
  return kOk;
}
