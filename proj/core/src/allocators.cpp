#include "softran/allocators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace softran {

std::vector<AllocScope> make_scopes(const Topology& topology, const UserSet& users) {
  std::vector<AllocScope> scopes;
  scopes.reserve(topology.rrs_count());
  for (std::size_t b = 0; b < topology.rrs_count(); ++b) {
    scopes.push_back(AllocScope{b, users.per_rrs.at(b), topology.subcarrier_count,
                                topology.rrs[b].p_max});
  }
  return scopes;
}

void decode_action(std::span<const double> raw, const AllocScope& scope, Allocation& out) {
  if (raw.size() != scope.action_size()) {
    throw std::invalid_argument("decode_action: raw action has wrong length");
  }
  if (scope.empty()) return;
  const std::size_t n = scope.users.size();
  const std::size_t pairs = scope.pair_count();
  std::vector<std::size_t> winner(scope.subcarriers);
  double max_score = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < scope.subcarriers; ++k) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < n; ++j) {
      if (raw[k * n + j] > raw[k * n + best]) best = j;
    }
    winner[k] = best;
    max_score = std::max(max_score, raw[pairs + k * n + best]);
  }
  std::vector<double> weight(scope.subcarriers);
  double total = 0.0;
  for (std::size_t k = 0; k < scope.subcarriers; ++k) {
    weight[k] = std::exp(raw[pairs + k * n + winner[k]] - max_score);
    total += weight[k];
  }
  for (std::size_t k = 0; k < scope.subcarriers; ++k) {
    for (std::size_t j = 0; j < n; ++j) out.set(scope.rrs, scope.users[j], k, 0.0, false);
    out.set(scope.rrs, scope.users[winner[k]], k, scope.p_max * weight[k] / total, true);
  }
}

Allocation decode_joint(std::span<const double> raw, std::span<const AllocScope> scopes,
                        Mode mode, std::size_t rrs_count, std::size_t user_count,
                        std::size_t subcarriers) {
  Allocation alloc(mode, rrs_count, user_count, subcarriers);
  std::size_t offset = 0;
  for (const auto& scope : scopes) {
    const std::size_t len = scope.action_size();
    if (offset + len > raw.size()) throw std::invalid_argument("decode_joint: raw too short");
    decode_action(raw.subspan(offset, len), scope, alloc);
    offset += len;
  }
  if (offset != raw.size()) throw std::invalid_argument("decode_joint: raw too long");
  return alloc;
}

void allocate_equal_power(const AllocScope& scope, Allocation& out) {
  if (scope.empty()) return;
  const std::size_t n = scope.users.size();
  const std::size_t assigned = scope.subcarriers;
  const double share = scope.p_max / static_cast<double>(assigned);
  for (std::size_t k = 0; k < scope.subcarriers; ++k) {
    out.set(scope.rrs, scope.users[k % n], k, share, true);
  }
}

Allocation equal_power_allocation(Mode mode, const Topology& topology, const UserSet& users) {
  Allocation alloc(mode, topology.rrs_count(), users.size(), topology.subcarrier_count);
  for (const auto& scope : make_scopes(topology, users)) allocate_equal_power(scope, alloc);
  return alloc;
}

namespace {

double feature(double linear) { return std::log10(linear); }

// Zero mean, unit variance across the vector; a constant vector maps to 0.
void standardize(Eigen::VectorXd& obs) {
  if (obs.size() == 0) return;
  obs.array() -= obs.mean();
  const double sd = std::sqrt(obs.squaredNorm() / static_cast<double>(obs.size()));
  if (sd > 1e-12) obs /= sd;
}

}  // namespace

Eigen::VectorXd centralized_observation(const ChannelTensor& h, const Topology& topology,
                                        double noise_power) {
  const std::size_t B = h.rrs_count();
  const std::size_t U = h.user_count();
  const std::size_t K = h.subcarrier_count();
  Eigen::VectorXd obs(static_cast<Eigen::Index>(B * U * K));
  Eigen::Index i = 0;
  for (std::size_t b = 0; b < B; ++b) {
    const double share = topology.rrs[b].p_max / static_cast<double>(K);
    for (std::size_t u = 0; u < U; ++u) {
      for (std::size_t k = 0; k < K; ++k) obs(i++) = feature(h.gain(b, u, k) * share / noise_power);
    }
  }
  standardize(obs);
  return obs;
}

Eigen::VectorXd distributed_observation(const ChannelTensor& h, const Topology& topology,
                                        const UserSet& users, double noise_power, std::size_t b) {
  const auto counts = users.counts();
  const std::size_t K = topology.subcarrier_count;
  const double share = topology.rrs[b].p_max / static_cast<double>(K);
  const auto& members = users.per_rrs.at(b);
  Eigen::VectorXd obs(static_cast<Eigen::Index>(members.size() * K));
  Eigen::Index i = 0;
  for (std::size_t u : members) {
    const double interference = intercell_interference_distributed(h, topology, counts, b, u);
    for (std::size_t k = 0; k < K; ++k) {
      obs(i++) = feature(h.gain(b, u, k) * share / (noise_power + interference));
    }
  }
  standardize(obs);
  return obs;
}

const char* to_string(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::Sac: return "sac";
    case LearnerKind::Dqn: return "dqn";
    case LearnerKind::Ddpg: return "ddpg";
  }
  return "?";
}

LearnerKind learner_from_string(const std::string& name) {
  if (name == "sac") return LearnerKind::Sac;
  if (name == "dqn") return LearnerKind::Dqn;
  if (name == "ddpg") return LearnerKind::Ddpg;
  throw std::invalid_argument("unknown learner '" + name + "'");
}

AllocLearner::AllocLearner(std::size_t obs_dim, std::vector<AllocScope> scopes,
                           LearnerSettings settings, std::uint64_t key)
    : obs_dim_(obs_dim),
      action_dim_(0),
      scopes_(std::move(scopes)),
      settings_(std::move(settings)),
      buffer_(settings_.buffer_capacity),
      act_rng_(key, Stream::Evaluation, {1}),
      sample_rng_(key, Stream::Evaluation, {2}) {
  for (const auto& s : scopes_) action_dim_ += s.action_size();
  if (obs_dim_ == 0 || action_dim_ == 0) throw std::invalid_argument("allocation learner with no users");
  switch (settings_.kind) {
    case LearnerKind::Sac:
      sac_ = std::make_unique<learn::SacAgent>(obs_dim_, action_dim_, settings_.sac, key);
      break;
    case LearnerKind::Ddpg:
      ddpg_ = std::make_unique<learn::DdpgAgent>(obs_dim_, action_dim_, settings_.ddpg, key);
      break;
    case LearnerKind::Dqn: {
      std::vector<std::size_t> branches;
      for (const auto& s : scopes_) {
        for (std::size_t k = 0; k < s.subcarriers && !s.empty(); ++k) branches.push_back(s.users.size());
      }
      dqn_ = std::make_unique<learn::DqnAgent>(obs_dim_, branches, settings_.dqn, key);
      break;
    }
  }
}

Eigen::VectorXd AllocLearner::act(const Eigen::VectorXd& obs, bool deterministic) {
  if (static_cast<std::size_t>(obs.size()) != obs_dim_) {
    throw std::invalid_argument("AllocLearner::act: observation length mismatch");
  }
  switch (settings_.kind) {
    case LearnerKind::Sac: return sac_->select_action(obs, act_rng_, deterministic);
    case LearnerKind::Ddpg: return ddpg_->select_action(obs, act_rng_, deterministic);
    case LearnerKind::Dqn: break;
  }
  // Discrete choice per subcarrier; power is split equally by the decoder.
  const auto choice = dqn_->select_action(obs, act_rng_, deterministic ? 0.0 : settings_.dqn.epsilon);
  Eigen::VectorXd raw = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(action_dim_));
  std::size_t offset = 0;
  std::size_t branch = 0;
  for (const auto& s : scopes_) {
    const std::size_t n = s.users.size();
    for (std::size_t k = 0; k < s.subcarriers && n > 0; ++k, ++branch) {
      for (std::size_t j = 0; j < n; ++j) {
        raw(static_cast<Eigen::Index>(offset + k * n + j)) = j == choice[branch] ? 1.0 : -1.0;
      }
    }
    offset += s.action_size();
  }
  return raw;
}

std::vector<std::size_t> AllocLearner::dqn_choices(const Eigen::VectorXd& raw) const {
  std::vector<std::size_t> choice;
  std::size_t offset = 0;
  for (const auto& s : scopes_) {
    const std::size_t n = s.users.size();
    for (std::size_t k = 0; k < s.subcarriers && n > 0; ++k) {
      std::size_t best = 0;
      for (std::size_t j = 1; j < n; ++j) {
        if (raw(static_cast<Eigen::Index>(offset + k * n + j)) >
            raw(static_cast<Eigen::Index>(offset + k * n + best))) {
          best = j;
        }
      }
      choice.push_back(best);
    }
    offset += s.action_size();
  }
  return choice;
}

void AllocLearner::learn(const Eigen::VectorXd& obs, const Eigen::VectorXd& raw_action,
                         double reward, const Eigen::VectorXd& branch_rewards) {
  learn::Transition t;
  t.state = obs;
  t.reward = reward;
  t.done = true;
  t.next_state = Eigen::VectorXd(0);
  if (settings_.kind == LearnerKind::Dqn) {
    const auto choice = dqn_choices(raw_action);
    t.action.resize(static_cast<Eigen::Index>(choice.size()));
    for (std::size_t i = 0; i < choice.size(); ++i) {
      t.action(static_cast<Eigen::Index>(i)) = static_cast<double>(choice[i]);
    }
    if (static_cast<std::size_t>(branch_rewards.size()) != choice.size()) {
      throw std::invalid_argument("AllocLearner::learn: branch reward count mismatch");
    }
    t.branch_rewards = branch_rewards;
  } else {
    t.action = raw_action;
  }
  buffer_.push(std::move(t));
  if (buffer_.size() < settings_.batch_size) return;
  const learn::Batch batch = buffer_.sample(settings_.batch_size, sample_rng_);
  switch (settings_.kind) {
    case LearnerKind::Sac: sac_->update(batch); break;
    case LearnerKind::Dqn: dqn_->update(batch); break;
    case LearnerKind::Ddpg: ddpg_->update(batch); break;
  }
  ++updates_;
}

AllocDecision allocate_centralized(AllocLearner& agent, const Eigen::VectorXd& obs,
                                   std::span<const AllocScope> scopes,
                                   const Topology& topology, std::size_t user_count,
                                   bool deterministic) {
  AllocDecision decision;
  decision.raw = agent.act(obs, deterministic);
  decision.allocation =
      decode_joint(std::span<const double>(decision.raw.data(), static_cast<std::size_t>(decision.raw.size())),
                   scopes, Mode::Centralized, topology.rrs_count(), user_count,
                   topology.subcarrier_count);
  return decision;
}

AllocDecision allocate_distributed(std::span<AllocLearner* const> agents,
                                   std::span<const Eigen::VectorXd> local_obs,
                                   std::span<const AllocScope> scopes,
                                   const Topology& topology, std::size_t user_count,
                                   bool deterministic) {
  if (agents.size() != scopes.size() || local_obs.size() != scopes.size()) {
    throw std::invalid_argument("allocate_distributed: need one agent and observation per RRS");
  }
  AllocDecision decision;
  decision.allocation =
      Allocation(Mode::Distributed, topology.rrs_count(), user_count, topology.subcarrier_count);
  decision.local_raw.resize(scopes.size());
  for (std::size_t b = 0; b < scopes.size(); ++b) {
    if (scopes[b].empty()) continue;
    if (agents[b] == nullptr) throw std::invalid_argument("allocate_distributed: missing agent");
    Eigen::VectorXd raw = agents[b]->act(local_obs[b], deterministic);
    decode_action(std::span<const double>(raw.data(), static_cast<std::size_t>(raw.size())),
                  scopes[b], decision.allocation);
    decision.local_raw[b] = std::move(raw);
  }
  return decision;
}

}  // namespace softran
