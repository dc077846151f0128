#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "softran/rng.hpp"

namespace softran::learn {

struct Transition {
  Eigen::VectorXd state;
  Eigen::VectorXd action;
  double reward = 0.0;
  Eigen::VectorXd next_state;
  bool done = false;
  // Optional per-branch rewards for factorised discrete learners.
  Eigen::VectorXd branch_rewards;
};

// Column-stacked minibatch.
struct Batch {
  Eigen::MatrixXd states;
  Eigen::MatrixXd actions;
  Eigen::VectorXd rewards;
  Eigen::MatrixXd next_states;
  Eigen::VectorXd dones;           // 1.0 for terminal transitions
  Eigen::MatrixXd branch_rewards;  // empty unless every sample carries them

  Eigen::Index size() const { return rewards.size(); }
};

class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(Transition t);
  std::size_t size() const { return ring_.size(); }
  std::size_t capacity() const { return capacity_; }
  std::size_t total_pushed() const { return pushed_; }

  // i = 0 is the oldest stored transition.
  const Transition& at(std::size_t i) const;

  // Uniform sampling with replacement.
  Batch sample(std::size_t batch_size, Rng& rng) const;

 private:
  std::size_t capacity_;
  std::size_t head_ = 0;  // next slot to overwrite once full
  std::size_t pushed_ = 0;
  std::vector<Transition> ring_;
};

Batch make_batch(const std::vector<const Transition*>& items);

}  // namespace softran::learn
