#include "softran/learn/ddpg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "softran/learn/sac.hpp"

namespace softran::learn {

namespace {

std::vector<std::size_t> chain(std::size_t in, const std::vector<std::size_t>& hidden,
                               std::size_t out) {
  std::vector<std::size_t> sizes{in};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(out);
  return sizes;
}

}  // namespace

DdpgAgent::DdpgAgent(std::size_t state_dim, std::size_t action_dim, DdpgConfig config,
                     std::uint64_t seed)
    : state_dim_(state_dim), action_dim_(action_dim), config_(std::move(config)) {
  if (state_dim == 0 || action_dim == 0) throw std::invalid_argument("DDPG needs non-empty spaces");
  Rng init(seed, Stream::Evaluation, {0xdd});
  actor_ = Mlp(chain(state_dim, config_.hidden, action_dim), config_.activation, init);
  critic_ = Mlp(chain(state_dim + action_dim, config_.hidden, 1), config_.activation, init);
  target_actor_ = actor_;
  target_critic_ = critic_;
  actor_opt_ = Adam(actor_.params().size(), {.learning_rate = config_.actor_lr});
  critic_opt_ = Adam(critic_.params().size(), {.learning_rate = config_.critic_lr});
}

Eigen::VectorXd DdpgAgent::select_action(const Eigen::VectorXd& state, Rng& rng,
                                         bool deterministic) const {
  Eigen::VectorXd a = actor_.forward(state).array().tanh();
  if (deterministic || config_.exploration_noise <= 0.0) return a;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    a(i) = std::clamp(a(i) + config_.exploration_noise * rng.normal(), -1.0, 1.0);
  }
  return a;
}

double DdpgAgent::q_value(const Eigen::VectorXd& state, const Eigen::VectorXd& action) const {
  Eigen::VectorXd input(state.size() + action.size());
  input << state, action;
  return critic_.forward(input)(0);
}

DdpgLosses DdpgAgent::update(const Batch& batch) {
  const Eigen::Index n = batch.size();
  if (n == 0) throw std::invalid_argument("DDPG update on an empty batch");
  const auto d = static_cast<Eigen::Index>(action_dim_);
  DdpgLosses losses;

  Eigen::VectorXd target = batch.rewards;
  if ((batch.dones.array() < 0.5).any()) {
    const Eigen::MatrixXd next_action = target_actor_.forward(batch.next_states).array().tanh();
    const Eigen::RowVectorXd next_q =
        target_critic_.forward(stack_rows(batch.next_states, next_action)).row(0);
    for (Eigen::Index j = 0; j < n; ++j) {
      target(j) += config_.discount * (1.0 - batch.dones(j)) * next_q(j);
    }
  }

  {
    ForwardCache cache;
    const Eigen::RowVectorXd q =
        critic_.forward(stack_rows(batch.states, batch.actions), &cache).row(0);
    const Eigen::RowVectorXd err = q - target.transpose();
    losses.critic = err.squaredNorm() / static_cast<double>(n);
    if (!std::isfinite(losses.critic)) throw std::runtime_error("DDPG critic loss is not finite");
    const Eigen::MatrixXd grad_out = (2.0 / static_cast<double>(n)) * err;
    critic_opt_.step(critic_.mutable_params(), critic_.backward(cache, grad_out).params);
  }

  ForwardCache actor_cache;
  const Eigen::MatrixXd pre = actor_.forward(batch.states, &actor_cache);
  const Eigen::MatrixXd action = pre.array().tanh();
  ForwardCache critic_cache;
  const Eigen::RowVectorXd q =
      critic_.forward(stack_rows(batch.states, action), &critic_cache).row(0);
  losses.actor = -q.mean();
  if (!std::isfinite(losses.actor)) throw std::runtime_error("DDPG actor loss is not finite");
  const Eigen::MatrixXd ones = Eigen::MatrixXd::Constant(1, n, -1.0 / static_cast<double>(n));
  const Eigen::MatrixXd dq_da = critic_.backward(critic_cache, ones).input.bottomRows(d);
  const Eigen::MatrixXd grad_pre = dq_da.array() * (1.0 - action.array().square());
  actor_opt_.step(actor_.mutable_params(), actor_.backward(actor_cache, grad_pre).params);

  polyak_update(target_critic_, critic_, config_.target_rate);
  polyak_update(target_actor_, actor_, config_.target_rate);
  return losses;
}

}  // namespace softran::learn
