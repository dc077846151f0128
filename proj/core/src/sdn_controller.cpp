#include "softran/sdn_controller.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace softran {

double SlotRecord::max_tau_dst() const {
  return tau_dst.empty() ? 0.0 : *std::max_element(tau_dst.begin(), tau_dst.end());
}

double SlotRecord::max_gamma_dst() const {
  return gamma_dst.empty() ? 0.0 : *std::max_element(gamma_dst.begin(), gamma_dst.end());
}

void fill_toc(SlotRecord& record, const TocWeights& weights) {
  record.toc_cnt = toc_centralized(record.r_cnt, record.tau_cnt, record.gamma_cnt, weights);
  record.toc_dst = toc_distributed(record.r_dst, record.tau_dst, record.gamma_dst, weights);
}

double sdn_reward(const SlotRecord& record) {
  if (record.tau_dst.empty() || record.gamma_dst.empty() ||
      record.tau_dst.size() != record.gamma_dst.size()) {
    throw std::invalid_argument("sdn_reward: slot record is incomplete");
  }
  return record.executed_toc();
}

SdnMemory::SdnMemory(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("SDN memory needs D >= 1");
}

void SdnMemory::push(SlotRecord record) {
  records_.push_back(std::move(record));
  while (records_.size() > capacity_) records_.pop_front();
}

void FeatureNormalizer::Welford::add(double x, std::size_t n) {
  const double delta = x - mean;
  mean += delta / static_cast<double>(n);
  m2 += delta * (x - mean);
}

double FeatureNormalizer::Welford::standardize(double x, std::size_t n) const {
  if (n == 0) return 0.0;
  const double var = n > 1 ? m2 / static_cast<double>(n - 1) : 0.0;
  const double sd = std::sqrt(var);
  const double floor = 1e-9 * std::max(1.0, std::abs(mean));
  if (sd <= floor) return 0.0;
  return (x - mean) / sd;
}

FeatureNormalizer::FeatureNormalizer(std::size_t warmup, double count_scale)
    : warmup_(std::max<std::size_t>(warmup, 1)), count_scale_(count_scale) {
  if (!(count_scale > 0.0)) throw std::invalid_argument("count scale must be positive");
}

void FeatureNormalizer::observe(const SlotRecord& record) {
  if (frozen()) return;
  ++seen_;
  const std::array<double, kSdnFeaturesPerSlot> raw{record.r_cnt,     record.r_dst,
                                                    record.tau_cnt,   record.max_tau_dst(),
                                                    record.gamma_cnt, record.max_gamma_dst()};
  for (std::size_t i = 0; i < raw.size(); ++i) metrics_[i].add(raw[i], seen_);
  reward_.add(record.executed_toc(), seen_);
}

std::array<double, kSdnFeaturesPerSlot> FeatureNormalizer::features(
    const SlotRecord& record) const {
  const std::array<double, kSdnFeaturesPerSlot> raw{record.r_cnt,     record.r_dst,
                                                    record.tau_cnt,   record.max_tau_dst(),
                                                    record.gamma_cnt, record.max_gamma_dst()};
  std::array<double, kSdnFeaturesPerSlot> out{};
  for (std::size_t i = 0; i < raw.size(); ++i) out[i] = metrics_[i].standardize(raw[i], seen_);
  return out;
}

double FeatureNormalizer::reward(double raw) const {
  if (seen_ < 2) return 0.0;
  const double var = reward_.m2 / static_cast<double>(seen_ - 1);
  const double sd = std::sqrt(var);
  const double scale = sd > 1e-9 * std::max(1.0, std::abs(reward_.mean)) ? sd : 1.0;
  return (raw - reward_.mean) / scale;
}

Eigen::VectorXd build_sdn_state(const SdnMemory& memory, const FeatureNormalizer& normalizer,
                                std::size_t rrs_count) {
  const std::size_t D = memory.capacity();
  Eigen::VectorXd state = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(kSdnFeaturesPerSlot * D + rrs_count));
  for (std::size_t age = 0; age < memory.size(); ++age) {
    const SlotRecord& record = memory.at(memory.size() - 1 - age);
    const auto f = normalizer.features(record);
    for (std::size_t i = 0; i < f.size(); ++i) {
      state(static_cast<Eigen::Index>(age * kSdnFeaturesPerSlot + i)) = f[i];
    }
  }
  if (!memory.empty()) {
    const auto& counts = memory.newest().user_counts;
    for (std::size_t b = 0; b < rrs_count && b < counts.size(); ++b) {
      state(static_cast<Eigen::Index>(kSdnFeaturesPerSlot * D + b)) = normalizer.count(counts[b]);
    }
  }
  return state;
}

ModeDecision mode_from_action(double action) {
  return ModeDecision(action >= 0.0 ? Mode::Centralized : Mode::Distributed);
}

ModeDecision decide_mode(const learn::SacAgent& agent, const Eigen::VectorXd& state, Rng& rng,
                         bool deterministic) {
  return mode_from_action(agent.select_action(state, rng, deterministic)(0));
}

SdnController::SdnController(SdnConfig config, std::size_t rrs_count, std::size_t subcarriers,
                             std::uint64_t key)
    : config_(std::move(config)),
      rrs_count_(rrs_count),
      memory_(config_.memory_slots),
      normalizer_(config_.warmup, static_cast<double>(std::max<std::size_t>(subcarriers, 1))),
      agent_(kSdnFeaturesPerSlot * config_.memory_slots + rrs_count, 1, config_.sac, key),
      buffer_(config_.buffer_capacity),
      act_rng_(key, Stream::Evaluation, {1}),
      sample_rng_(key, Stream::Evaluation, {2}) {}

Eigen::VectorXd SdnController::state() const {
  return build_sdn_state(memory_, normalizer_, rrs_count_);
}

ModeDecision SdnController::decide(bool deterministic) {
  Eigen::VectorXd s = state();
  pending_action_ = agent_.select_action(s, act_rng_, deterministic);
  pending_state_ = std::move(s);
  return mode_from_action(pending_action_(0));
}

void SdnController::record_slot(const SlotRecord& record, bool learn) {
  const double raw_reward = sdn_reward(record);
  normalizer_.observe(record);
  memory_.push(record);
  if (!learn || !pending_state_) {
    pending_state_.reset();
    return;
  }
  learn::Transition t;
  t.state = std::move(*pending_state_);
  pending_state_.reset();
  t.action = pending_action_;
  t.reward = std::clamp(normalizer_.reward(raw_reward), -config_.reward_clip, config_.reward_clip);
  t.next_state = state();
  t.done = false;
  buffer_.push(std::move(t));
  if (buffer_.size() >= config_.batch_size) {
    agent_.update(buffer_.sample(config_.batch_size, sample_rng_));
    ++updates_;
  }
}

}  // namespace softran
