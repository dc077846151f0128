#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "softran/learn/adam.hpp"
#include "softran/learn/mlp.hpp"
#include "softran/learn/replay_buffer.hpp"
#include "softran/rng.hpp"

namespace softran::learn {

struct SacConfig {
  std::vector<std::size_t> hidden{64, 64};
  Activation activation = Activation::Tanh;
  double actor_lr = 3e-4;
  double critic_lr = 3e-4;
  double temperature_lr = 3e-4;
  double discount = 0.99;
  // Weight of the online critic in each target update.
  double target_rate = 0.005;
  double initial_temperature = 0.2;
  bool learn_temperature = true;
  // Defaults to -action_dim when unset (NaN).
  double target_entropy = std::numeric_limits<double>::quiet_NaN();
  double log_std_min = -20.0;
  double log_std_max = 2.0;
};

struct SacLosses {
  double critic1 = 0.0;
  double critic2 = 0.0;
  double actor = 0.0;
  double temperature = 0.0;
};

// Soft actor-critic with a tanh-squashed Gaussian policy, twin critics with
// target copies, and automatic temperature tuning. Actions live in [-1, 1]^d.
class SacAgent {
 public:
  SacAgent(std::size_t state_dim, std::size_t action_dim, SacConfig config, std::uint64_t seed);

  std::size_t state_dim() const { return state_dim_; }
  std::size_t action_dim() const { return action_dim_; }
  const SacConfig& config() const { return config_; }

  Eigen::VectorXd select_action(const Eigen::VectorXd& state, Rng& rng,
                                bool deterministic) const;

  // One gradient step on every network plus the temperature.
  SacLosses update(const Batch& batch);

  double temperature() const;
  double log_temperature() const { return log_temperature_(0); }
  void set_log_temperature(double v) { log_temperature_(0) = v; }

  // Critic value of (state, action); the minimum of the twin critics.
  double q_value(const Eigen::VectorXd& state, const Eigen::VectorXd& action) const;

  Mlp& actor() { return actor_; }
  Mlp& critic(int i) { return i == 0 ? critic1_ : critic2_; }
  Mlp& target_critic(int i) { return i == 0 ? target1_ : target2_; }
  const Mlp& actor() const { return actor_; }
  const Mlp& critic(int i) const { return i == 0 ? critic1_ : critic2_; }
  const Mlp& target_critic(int i) const { return i == 0 ? target1_ : target2_; }

  std::uint64_t updates() const { return updates_; }

 private:
  struct PolicySample {
    Eigen::MatrixXd action;    // tanh(u)
    Eigen::MatrixXd noise;     // epsilon
    Eigen::MatrixXd std;       // exp(clamped log std)
    Eigen::MatrixXd clamped;   // 1 where log std hit the band
    Eigen::VectorXd log_prob;  // per sample
  };
  PolicySample sample_policy(const Eigen::MatrixXd& actor_out, Rng& rng) const;

  std::size_t state_dim_;
  std::size_t action_dim_;
  SacConfig config_;
  Mlp actor_;
  Mlp critic1_, critic2_, target1_, target2_;
  Adam actor_opt_, critic1_opt_, critic2_opt_, temperature_opt_;
  Eigen::VectorXd log_temperature_;
  double target_entropy_;
  Rng update_rng_;
  std::uint64_t updates_ = 0;
};

Eigen::MatrixXd stack_rows(const Eigen::MatrixXd& top, const Eigen::MatrixXd& bottom);

}  // namespace softran::learn
