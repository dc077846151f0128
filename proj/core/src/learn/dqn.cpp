#include "softran/learn/dqn.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace softran::learn {

DqnAgent::DqnAgent(std::size_t state_dim, std::vector<std::size_t> branch_sizes,
                   DqnConfig config, std::uint64_t seed)
    : state_dim_(state_dim), branches_(std::move(branch_sizes)), config_(std::move(config)) {
  if (state_dim == 0 || branches_.empty()) throw std::invalid_argument("DQN needs non-empty spaces");
  std::size_t total = 0;
  for (auto size : branches_) {
    if (size == 0) throw std::invalid_argument("DQN branch with no actions");
    offsets_.push_back(total);
    total += size;
  }
  std::vector<std::size_t> sizes{state_dim};
  sizes.insert(sizes.end(), config_.hidden.begin(), config_.hidden.end());
  sizes.push_back(total);
  Rng init(seed, Stream::Evaluation, {0xd9});
  online_ = Mlp(sizes, config_.activation, init);
  target_ = online_;
  opt_ = Adam(online_.params().size(), {.learning_rate = config_.learning_rate});
}

Eigen::VectorXd DqnAgent::q_values(const Eigen::VectorXd& state) const {
  return online_.forward(state);
}

std::vector<std::size_t> DqnAgent::greedy(const Eigen::VectorXd& state) const {
  const Eigen::VectorXd q = q_values(state);
  std::vector<std::size_t> choice(branches_.size());
  for (std::size_t br = 0; br < branches_.size(); ++br) {
    std::size_t best = 0;
    for (std::size_t a = 1; a < branches_[br]; ++a) {
      if (q(static_cast<Eigen::Index>(offsets_[br] + a)) >
          q(static_cast<Eigen::Index>(offsets_[br] + best))) {
        best = a;
      }
    }
    choice[br] = best;
  }
  return choice;
}

std::vector<std::size_t> DqnAgent::select_action(const Eigen::VectorXd& state, Rng& rng,
                                                 double epsilon) const {
  std::vector<std::size_t> choice = greedy(state);
  for (std::size_t br = 0; br < branches_.size(); ++br) {
    if (rng.uniform() < epsilon) choice[br] = rng.below(branches_[br]);
  }
  return choice;
}

double DqnAgent::update(const Batch& batch) {
  const Eigen::Index n = batch.size();
  if (n == 0) throw std::invalid_argument("DQN update on an empty batch");
  const auto n_branches = static_cast<Eigen::Index>(branches_.size());
  if (batch.actions.rows() != n_branches) throw std::invalid_argument("DQN action shape mismatch");
  const bool per_branch = batch.branch_rewards.size() > 0;

  Eigen::MatrixXd next_q;
  const bool bootstrap = (batch.dones.array() < 0.5).any();
  if (bootstrap) next_q = target_.forward(batch.next_states);

  ForwardCache cache;
  const Eigen::MatrixXd q = online_.forward(batch.states, &cache);
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(q.rows(), n);
  double loss = 0.0;
  const double scale = 1.0 / static_cast<double>(n * n_branches);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index br = 0; br < n_branches; ++br) {
      const auto offset = static_cast<Eigen::Index>(offsets_[static_cast<std::size_t>(br)]);
      const auto count = static_cast<Eigen::Index>(branches_[static_cast<std::size_t>(br)]);
      const auto a = static_cast<Eigen::Index>(std::lround(batch.actions(br, j)));
      if (a < 0 || a >= count) throw std::invalid_argument("DQN action index out of range");
      double y = per_branch ? batch.branch_rewards(br, j) : batch.rewards(j);
      if (bootstrap && batch.dones(j) < 0.5) {
        y += config_.discount * next_q.block(offset, j, count, 1).maxCoeff();
      }
      const double err = q(offset + a, j) - y;
      loss += err * err * scale;
      grad(offset + a, j) = 2.0 * err * scale;
    }
  }
  if (!std::isfinite(loss)) throw std::runtime_error("DQN update: loss is not finite");
  const MlpGradient g = online_.backward(cache, grad);
  opt_.step(online_.mutable_params(), g.params);
  polyak_update(target_, online_, config_.target_rate);
  return loss;
}

}  // namespace softran::learn
