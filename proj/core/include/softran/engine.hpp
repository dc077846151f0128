#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "softran/config.hpp"
#include "softran/sdn_controller.hpp"

namespace softran {

// Means over the evaluation slots of a run (all slots when nothing was held
// out for evaluation). Rates in bit/s, overhead in bits, complexity in
// operations.
struct Aggregates {
  std::size_t slots = 0;
  double mean_rate = 0.0;  // executed mode
  double rate_cnt = 0.0;
  double rate_dst = 0.0;
  double tau_cnt = 0.0;
  double max_tau_dst = 0.0;
  double tau_executed = 0.0;
  double gamma_cnt = 0.0;
  double max_gamma_dst = 0.0;
  double gamma_executed = 0.0;
  double toc = 0.0;  // executed mode
  double toc_cnt = 0.0;
  double toc_dst = 0.0;
  double fraction_centralized = 0.0;

  bool operator==(const Aggregates&) const = default;
};

Aggregates aggregate(const std::vector<SlotRecord>& records);

struct RunResult {
  std::vector<SlotRecord> records;
  Aggregates aggregates;
  std::uint64_t seed = 0;
  double wall_seconds = 0.0;
  std::size_t exclusivity_violations = 0;
};

// Runs one episode of config.slots slots. The first config.train_slots slots
// train every learner; the rest evaluate deterministic policies with learning
// frozen. Per slot: traffic, channels, mode decision, allocation in both
// modes, metrics, learning, record.
RunResult run_episode(const ScenarioConfig& config, std::uint64_t seed);

struct SweepCell {
  std::size_t index = 0;
  Scheme scheme = Scheme::Smart;
  LearnerKind learner = LearnerKind::Sac;
  std::size_t user_count = 0;
  std::uint64_t seed = 0;
  Aggregates aggregates;
  std::size_t exclusivity_violations = 0;
  std::string error;  // empty on success

  bool ok() const { return error.empty(); }
};

struct SweepSpec {
  std::vector<std::size_t> user_counts;
  std::vector<Scheme> schemes;
  std::vector<LearnerKind> learners;
  std::vector<std::uint64_t> seeds;
};

// Cross product over schemes x learners x user counts x seeds, ordered in
// that nesting. Cells run on `workers` threads (0 = hardware concurrency); a
// failing cell records its error and the sweep continues. `progress` is
// called from worker threads after each cell.
std::vector<SweepCell> run_sweep(const ScenarioConfig& base, const SweepSpec& spec,
                                 std::size_t workers = 0,
                                 const std::function<void(const SweepCell&)>& progress = {});

}  // namespace softran
