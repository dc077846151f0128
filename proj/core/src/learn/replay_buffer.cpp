#include "softran/learn/replay_buffer.hpp"

#include <stdexcept>

namespace softran::learn {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("replay buffer capacity must be positive");
}

void ReplayBuffer::push(Transition t) {
  ++pushed_;
  if (ring_.size() < capacity_) {
    ring_.push_back(std::move(t));
    return;
  }
  ring_[head_] = std::move(t);
  head_ = (head_ + 1) % capacity_;
}

const Transition& ReplayBuffer::at(std::size_t i) const {
  if (i >= ring_.size()) throw std::out_of_range("ReplayBuffer::at");
  return ring_[(head_ + i) % ring_.size()];
}

Batch ReplayBuffer::sample(std::size_t batch_size, Rng& rng) const {
  if (ring_.empty() || batch_size == 0) throw std::invalid_argument("cannot sample empty batch");
  std::vector<const Transition*> items;
  items.reserve(batch_size);
  for (std::size_t i = 0; i < batch_size; ++i) items.push_back(&ring_[rng.below(ring_.size())]);
  return make_batch(items);
}

Batch make_batch(const std::vector<const Transition*>& items) {
  if (items.empty()) throw std::invalid_argument("make_batch: no transitions");
  const auto n = static_cast<Eigen::Index>(items.size());
  const auto& first = *items.front();
  Batch batch;
  batch.states.resize(first.state.size(), n);
  batch.actions.resize(first.action.size(), n);
  batch.rewards.resize(n);
  batch.next_states.resize(first.next_state.size(), n);
  batch.dones.resize(n);
  const bool branched = first.branch_rewards.size() > 0;
  if (branched) batch.branch_rewards.resize(first.branch_rewards.size(), n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Transition& t = *items[static_cast<std::size_t>(j)];
    batch.states.col(j) = t.state;
    batch.actions.col(j) = t.action;
    batch.rewards(j) = t.reward;
    batch.next_states.col(j) = t.next_state;
    batch.dones(j) = t.done ? 1.0 : 0.0;
    if (branched) batch.branch_rewards.col(j) = t.branch_rewards;
  }
  return batch;
}

}  // namespace softran::learn
