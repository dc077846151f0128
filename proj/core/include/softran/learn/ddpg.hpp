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

struct DdpgConfig {
  std::vector<std::size_t> hidden{64, 64};
  Activation activation = Activation::Tanh;
  double actor_lr = 1e-3;
  double critic_lr = 1e-3;
  double discount = 0.99;
  double target_rate = 0.005;
  double exploration_noise = 0.1;
};

struct DdpgLosses {
  double critic = 0.0;
  double actor = 0.0;
};

// Deterministic tanh actor with one critic and target copies of both.
class DdpgAgent {
 public:
  DdpgAgent(std::size_t state_dim, std::size_t action_dim, DdpgConfig config,
            std::uint64_t seed);

  std::size_t state_dim() const { return state_dim_; }
  std::size_t action_dim() const { return action_dim_; }
  const DdpgConfig& config() const { return config_; }

  // Gaussian exploration noise unless `deterministic`; clipped to [-1, 1].
  Eigen::VectorXd select_action(const Eigen::VectorXd& state, Rng& rng,
                                bool deterministic) const;
  double q_value(const Eigen::VectorXd& state, const Eigen::VectorXd& action) const;

  DdpgLosses update(const Batch& batch);

  Mlp& actor() { return actor_; }
  Mlp& critic() { return critic_; }
  const Mlp& actor() const { return actor_; }
  const Mlp& critic() const { return critic_; }
  const Mlp& target_actor() const { return target_actor_; }
  const Mlp& target_critic() const { return target_critic_; }

 private:
  std::size_t state_dim_;
  std::size_t action_dim_;
  DdpgConfig config_;
  Mlp actor_, critic_, target_actor_, target_critic_;
  Adam actor_opt_, critic_opt_;
};

}  // namespace softran::learn
