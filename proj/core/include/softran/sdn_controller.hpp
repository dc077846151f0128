#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "softran/learn/replay_buffer.hpp"
#include "softran/learn/sac.hpp"
#include "softran/phy_metrics.hpp"
#include "softran/rng.hpp"

namespace softran {

// Exactly one of the two flags is set.
class ModeDecision {
 public:
  explicit ModeDecision(Mode mode)
      : x_cnt_(mode == Mode::Centralized ? 1 : 0), x_dst_(mode == Mode::Distributed ? 1 : 0) {}

  int x_cnt() const { return x_cnt_; }
  int x_dst() const { return x_dst_; }
  Mode mode() const { return x_cnt_ == 1 ? Mode::Centralized : Mode::Distributed; }
  bool exclusive() const { return x_cnt_ + x_dst_ == 1; }

 private:
  int x_cnt_;
  int x_dst_;
};

struct SlotRecord {
  std::uint64_t slot = 0;
  bool training = false;
  double r_cnt = 0.0;  // bit/s
  double r_dst = 0.0;  // bit/s
  double tau_cnt = 0.0;
  std::vector<double> tau_dst;  // per RRS, bits
  double gamma_cnt = 0.0;
  std::vector<double> gamma_dst;  // per RRS, operations
  double toc_cnt = 0.0;
  double toc_dst = 0.0;
  Mode executed = Mode::Centralized;
  std::vector<std::size_t> user_counts;

  double max_tau_dst() const;
  double max_gamma_dst() const;
  double executed_rate() const { return executed == Mode::Centralized ? r_cnt : r_dst; }
  double executed_toc() const { return executed == Mode::Centralized ? toc_cnt : toc_dst; }
  double executed_tau() const { return executed == Mode::Centralized ? tau_cnt : max_tau_dst(); }
  double executed_gamma() const {
    return executed == Mode::Centralized ? gamma_cnt : max_gamma_dst();
  }
};

// Fills the TOC fields from the raw rate, overhead and complexity fields.
void fill_toc(SlotRecord& record, const TocWeights& weights);

// TOC of the executed mode. Throws if the record lacks the per-RRS fields.
double sdn_reward(const SlotRecord& record);

// FIFO of the D most recent slot records, oldest first.
class SdnMemory {
 public:
  explicit SdnMemory(std::size_t capacity);

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const SlotRecord& at(std::size_t i) const { return records_.at(i); }
  const SlotRecord& newest() const { return records_.back(); }

  void push(SlotRecord record);

 private:
  std::size_t capacity_;
  std::deque<SlotRecord> records_;
};

inline constexpr std::size_t kSdnFeaturesPerSlot = 6;

// Running mean and variance of the six per-slot metrics and the reward.
// Statistics stop moving once `warmup` samples have been seen.
class FeatureNormalizer {
 public:
  FeatureNormalizer(std::size_t warmup, double count_scale);

  void observe(const SlotRecord& record);
  bool frozen() const { return seen_ >= warmup_; }

  std::array<double, kSdnFeaturesPerSlot> features(const SlotRecord& record) const;
  double reward(double raw) const;
  double count(std::size_t users) const { return static_cast<double>(users) / count_scale_; }

 private:
  struct Welford {
    double mean = 0.0;
    double m2 = 0.0;
    void add(double x, std::size_t n);
    double standardize(double x, std::size_t n) const;
  };

  std::size_t warmup_;
  double count_scale_;
  std::size_t seen_ = 0;
  std::array<Welford, kSdnFeaturesPerSlot> metrics_{};
  Welford reward_{};
};

// [newest slot .. oldest slot] x (r_cnt, r_dst, tau_cnt, max tau_dst,
// gamma_cnt, max gamma_dst), zero for missing slots, then the newest per-RRS
// user counts. Length 6 * D + B.
Eigen::VectorXd build_sdn_state(const SdnMemory& memory, const FeatureNormalizer& normalizer,
                                std::size_t rrs_count);

// a >= 0 selects the centralized scheme.
ModeDecision decide_mode(const learn::SacAgent& agent, const Eigen::VectorXd& state, Rng& rng,
                         bool deterministic);
ModeDecision mode_from_action(double action);

struct SdnConfig {
  std::size_t memory_slots = 10;
  learn::SacConfig sac;
  std::size_t batch_size = 64;
  std::size_t buffer_capacity = 100000;
  std::size_t warmup = 64;
  double reward_clip = 10.0;
};

// Mode selection agent: state from the slot memory, one SAC decision per
// slot, rewarded with the TOC of the executed mode.
class SdnController {
 public:
  SdnController(SdnConfig config, std::size_t rrs_count, std::size_t subcarriers,
                std::uint64_t key);

  std::size_t state_dim() const { return kSdnFeaturesPerSlot * config_.memory_slots + rrs_count_; }
  Eigen::VectorXd state() const;

  ModeDecision decide(bool deterministic);

  // Pushes the record into the memory. When `learn` is set and a decision is
  // pending, appends (state, action, reward, next state) to the replay buffer
  // and takes one gradient step once the buffer holds a full batch.
  void record_slot(const SlotRecord& record, bool learn);

  const SdnMemory& memory() const { return memory_; }
  const learn::ReplayBuffer& buffer() const { return buffer_; }
  learn::SacAgent& agent() { return agent_; }
  const FeatureNormalizer& normalizer() const { return normalizer_; }
  std::size_t updates() const { return updates_; }

 private:
  SdnConfig config_;
  std::size_t rrs_count_;
  SdnMemory memory_;
  FeatureNormalizer normalizer_;
  learn::SacAgent agent_;
  learn::ReplayBuffer buffer_;
  Rng act_rng_;
  Rng sample_rng_;
  std::optional<Eigen::VectorXd> pending_state_;
  Eigen::VectorXd pending_action_;
  std::size_t updates_ = 0;
};

}  // namespace softran
