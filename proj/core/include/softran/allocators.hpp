#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "softran/learn/ddpg.hpp"
#include "softran/learn/dqn.hpp"
#include "softran/learn/replay_buffer.hpp"
#include "softran/learn/sac.hpp"
#include "softran/netmodel.hpp"
#include "softran/phy_metrics.hpp"

namespace softran {

// The users and subcarriers one RRS allocates.
struct AllocScope {
  std::size_t rrs = 0;
  std::vector<std::size_t> users;  // indices into UserSet::users
  std::size_t subcarriers = 0;
  double p_max = 0.0;

  std::size_t pair_count() const { return users.size() * subcarriers; }
  // Raw action layout: pair_count() user logits ordered k-major
  // (index k * users.size() + j), then pair_count() power scores.
  std::size_t action_size() const { return 2 * pair_count(); }
  bool empty() const { return users.empty(); }
};

std::vector<AllocScope> make_scopes(const Topology& topology, const UserSet& users);

// Decodes one scope's raw action into `out`. Per subcarrier the user with the
// largest logit wins (lowest index on ties); power is a softmax over the
// winners' scores, scaled so the scope spends exactly p_max.
void decode_action(std::span<const double> raw, const AllocScope& scope, Allocation& out);

// Centralized decode: the raw vector is the concatenation of every scope's
// fragment in RRS order.
Allocation decode_joint(std::span<const double> raw, std::span<const AllocScope> scopes,
                        Mode mode, std::size_t rrs_count, std::size_t user_count,
                        std::size_t subcarriers);

// Round-robin users over subcarriers, equal power per assigned pair.
void allocate_equal_power(const AllocScope& scope, Allocation& out);
Allocation equal_power_allocation(Mode mode, const Topology& topology, const UserSet& users);

// Channel features are per-subcarrier SNR in units of 10 dB.
Eigen::VectorXd centralized_observation(const ChannelTensor& h, const Topology& topology,
                                        double noise_power);
// Local features: per-pair worst-case SINR in units of 10 dB, using only the
// RRS's own links and the large-scale interference bound.
Eigen::VectorXd distributed_observation(const ChannelTensor& h, const Topology& topology,
                                        const UserSet& users, double noise_power, std::size_t b);

enum class LearnerKind { Sac, Dqn, Ddpg };

const char* to_string(LearnerKind kind);
LearnerKind learner_from_string(const std::string& name);

struct LearnerSettings {
  LearnerKind kind = LearnerKind::Sac;
  learn::SacConfig sac;
  learn::DqnConfig dqn;
  learn::DdpgConfig ddpg;
  std::size_t batch_size = 64;
  std::size_t buffer_capacity = 100000;
};

// One allocation agent together with its replay memory and random streams.
// Transitions are single-step: the allocation reward does not depend on the
// next slot's state.
class AllocLearner {
 public:
  AllocLearner(std::size_t obs_dim, std::vector<AllocScope> scopes, LearnerSettings settings,
               std::uint64_t key);

  std::size_t obs_dim() const { return obs_dim_; }
  std::size_t action_dim() const { return action_dim_; }
  LearnerKind kind() const { return settings_.kind; }

  // Raw action in [-1, 1]^action_dim.
  Eigen::VectorXd act(const Eigen::VectorXd& obs, bool deterministic);

  // Stores the transition and takes one gradient step once the buffer holds
  // a full batch. `branch_rewards` has one entry per (scope, subcarrier).
  void learn(const Eigen::VectorXd& obs, const Eigen::VectorXd& raw_action, double reward,
             const Eigen::VectorXd& branch_rewards);

  std::size_t updates() const { return updates_; }
  const learn::ReplayBuffer& buffer() const { return buffer_; }

  learn::SacAgent* sac() { return sac_.get(); }
  learn::DqnAgent* dqn() { return dqn_.get(); }
  learn::DdpgAgent* ddpg() { return ddpg_.get(); }

 private:
  std::vector<std::size_t> dqn_choices(const Eigen::VectorXd& raw) const;

  std::size_t obs_dim_;
  std::size_t action_dim_;
  std::vector<AllocScope> scopes_;
  LearnerSettings settings_;
  std::unique_ptr<learn::SacAgent> sac_;
  std::unique_ptr<learn::DqnAgent> dqn_;
  std::unique_ptr<learn::DdpgAgent> ddpg_;
  learn::ReplayBuffer buffer_;
  Rng act_rng_;
  Rng sample_rng_;
  std::size_t updates_ = 0;
};

struct AllocDecision {
  Allocation allocation;
  Eigen::VectorXd raw;  // centralized: the joint action
  std::vector<Eigen::VectorXd> local_raw;  // distributed: one per RRS (empty if idle)
};

AllocDecision allocate_centralized(AllocLearner& agent, const Eigen::VectorXd& obs,
                                   std::span<const AllocScope> scopes,
                                   const Topology& topology, std::size_t user_count,
                                   bool deterministic);

// `agents[b]` may be null for an RRS with no users; it then allocates nothing.
AllocDecision allocate_distributed(std::span<AllocLearner* const> agents,
                                   std::span<const Eigen::VectorXd> local_obs,
                                   std::span<const AllocScope> scopes,
                                   const Topology& topology, std::size_t user_count,
                                   bool deterministic);

}  // namespace softran
