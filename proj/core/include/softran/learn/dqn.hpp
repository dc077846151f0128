#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "softran/learn/adam.hpp"
#include "softran/learn/mlp.hpp"
#include "softran/learn/replay_buffer.hpp"
#include "softran/rng.hpp"

namespace softran::learn {

struct DqnConfig {
  std::vector<std::size_t> hidden{64, 64};
  Activation activation = Activation::Relu;
  double learning_rate = 1e-3;
  double discount = 0.99;
  double target_rate = 0.005;
  double epsilon = 0.1;
};

// Deep Q-network over one or more independent discrete branches. A single
// branch is the textbook DQN; several branches give a factorised action
// (one choice per branch) sharing one torso. Each branch is trained on its own
// TD(0) target; the action column in a transition stores one index per branch.
class DqnAgent {
 public:
  DqnAgent(std::size_t state_dim, std::vector<std::size_t> branch_sizes, DqnConfig config,
           std::uint64_t seed);

  std::size_t state_dim() const { return state_dim_; }
  const std::vector<std::size_t>& branch_sizes() const { return branches_; }
  std::size_t branch_count() const { return branches_.size(); }
  const DqnConfig& config() const { return config_; }

  Eigen::VectorXd q_values(const Eigen::VectorXd& state) const;
  // Greedy per branch; ties go to the lowest index.
  std::vector<std::size_t> greedy(const Eigen::VectorXd& state) const;
  // Epsilon-greedy per branch.
  std::vector<std::size_t> select_action(const Eigen::VectorXd& state, Rng& rng,
                                         double epsilon) const;

  // Mean squared TD error over branches and samples, before the step.
  double update(const Batch& batch);

  Mlp& network() { return online_; }
  const Mlp& network() const { return online_; }
  const Mlp& target_network() const { return target_; }

 private:
  std::size_t state_dim_;
  std::vector<std::size_t> branches_;
  std::vector<std::size_t> offsets_;
  DqnConfig config_;
  Mlp online_;
  Mlp target_;
  Adam opt_;
};

}  // namespace softran::learn
