#include "softran/learn/sac.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace softran::learn {

namespace {

std::vector<std::size_t> chain(std::size_t in, const std::vector<std::size_t>& hidden,
                               std::size_t out) {
  std::vector<std::size_t> sizes{in};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(out);
  return sizes;
}

// log(1 - tanh(u)^2), stable for large |u|.
double log_one_minus_tanh_sq(double u) {
  const double x = -2.0 * u;
  const double softplus = x > 30.0 ? x : std::log1p(std::exp(x));
  return 2.0 * (std::numbers::ln2 - u - softplus);
}

void require_finite(double value, const char* what, std::uint64_t step) {
  if (!std::isfinite(value)) {
    std::ostringstream msg;
    msg << "SAC update " << step << ": " << what << " loss is not finite";
    throw std::runtime_error(msg.str());
  }
}

}  // namespace

Eigen::MatrixXd stack_rows(const Eigen::MatrixXd& top, const Eigen::MatrixXd& bottom) {
  Eigen::MatrixXd out(top.rows() + bottom.rows(), top.cols());
  out.topRows(top.rows()) = top;
  out.bottomRows(bottom.rows()) = bottom;
  return out;
}

SacAgent::SacAgent(std::size_t state_dim, std::size_t action_dim, SacConfig config,
                   std::uint64_t seed)
    : state_dim_(state_dim),
      action_dim_(action_dim),
      config_(std::move(config)),
      update_rng_(seed, Stream::Evaluation, {0x5ac}) {
  if (state_dim == 0 || action_dim == 0) throw std::invalid_argument("SAC needs non-empty spaces");
  Rng init(seed, Stream::Evaluation, {0x1417});
  actor_ = Mlp(chain(state_dim, config_.hidden, 2 * action_dim), config_.activation, init);
  critic1_ = Mlp(chain(state_dim + action_dim, config_.hidden, 1), config_.activation, init);
  critic2_ = Mlp(chain(state_dim + action_dim, config_.hidden, 1), config_.activation, init);
  target1_ = critic1_;
  target2_ = critic2_;
  actor_opt_ = Adam(actor_.params().size(), {.learning_rate = config_.actor_lr});
  critic1_opt_ = Adam(critic1_.params().size(), {.learning_rate = config_.critic_lr});
  critic2_opt_ = Adam(critic2_.params().size(), {.learning_rate = config_.critic_lr});
  temperature_opt_ = Adam(1, {.learning_rate = config_.temperature_lr});
  log_temperature_ = Eigen::VectorXd::Constant(1, std::log(config_.initial_temperature));
  target_entropy_ = std::isnan(config_.target_entropy) ? -static_cast<double>(action_dim)
                                                       : config_.target_entropy;
}

double SacAgent::temperature() const { return std::exp(log_temperature_(0)); }

SacAgent::PolicySample SacAgent::sample_policy(const Eigen::MatrixXd& actor_out, Rng& rng) const {
  const auto d = static_cast<Eigen::Index>(action_dim_);
  const Eigen::Index n = actor_out.cols();
  PolicySample s;
  s.action.resize(d, n);
  s.noise.resize(d, n);
  s.std.resize(d, n);
  s.clamped.resize(d, n);
  s.log_prob = Eigen::VectorXd::Zero(n);
  const double half_log_2pi = 0.5 * std::log(2.0 * std::numbers::pi);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) {
      const double mean = actor_out(i, j);
      const double raw = actor_out(d + i, j);
      const double log_std = std::clamp(raw, config_.log_std_min, config_.log_std_max);
      const double eps = rng.normal();
      const double sd = std::exp(log_std);
      const double u = mean + sd * eps;
      s.noise(i, j) = eps;
      s.std(i, j) = sd;
      s.clamped(i, j) = (raw < config_.log_std_min || raw > config_.log_std_max) ? 1.0 : 0.0;
      s.action(i, j) = std::tanh(u);
      s.log_prob(j) += -0.5 * eps * eps - log_std - half_log_2pi - log_one_minus_tanh_sq(u);
    }
  }
  return s;
}

Eigen::VectorXd SacAgent::select_action(const Eigen::VectorXd& state, Rng& rng,
                                        bool deterministic) const {
  const Eigen::VectorXd out = actor_.forward(state);
  const auto d = static_cast<Eigen::Index>(action_dim_);
  if (deterministic) return out.head(d).array().tanh();
  Eigen::MatrixXd batch = out;
  return sample_policy(batch, rng).action.col(0);
}

double SacAgent::q_value(const Eigen::VectorXd& state, const Eigen::VectorXd& action) const {
  Eigen::VectorXd input(state.size() + action.size());
  input << state, action;
  return std::min(critic1_.forward(input)(0), critic2_.forward(input)(0));
}

SacLosses SacAgent::update(const Batch& batch) {
  if (batch.size() == 0) throw std::invalid_argument("SAC update on an empty batch");
  const Eigen::Index n = batch.size();
  const auto d = static_cast<Eigen::Index>(action_dim_);
  const double alpha = temperature();
  SacLosses losses;

  // Soft TD targets from the target critics.
  Eigen::VectorXd target = batch.rewards;
  if ((batch.dones.array() < 0.5).any()) {
    const Eigen::MatrixXd next_out = actor_.forward(batch.next_states);
    const PolicySample next = sample_policy(next_out, update_rng_);
    const Eigen::MatrixXd next_in = stack_rows(batch.next_states, next.action);
    const Eigen::RowVectorXd q1 = target1_.forward(next_in).row(0);
    const Eigen::RowVectorXd q2 = target2_.forward(next_in).row(0);
    for (Eigen::Index j = 0; j < n; ++j) {
      const double soft = std::min(q1(j), q2(j)) - alpha * next.log_prob(j);
      target(j) += config_.discount * (1.0 - batch.dones(j)) * soft;
    }
  }

  const Eigen::MatrixXd critic_in = stack_rows(batch.states, batch.actions);
  auto critic_step = [&](Mlp& critic, Adam& opt) {
    ForwardCache cache;
    const Eigen::RowVectorXd q = critic.forward(critic_in, &cache).row(0);
    const Eigen::RowVectorXd err = q - target.transpose();
    const Eigen::MatrixXd grad_out = (2.0 / static_cast<double>(n)) * err;
    const MlpGradient g = critic.backward(cache, grad_out);
    opt.step(critic.mutable_params(), g.params);
    return err.squaredNorm() / static_cast<double>(n);
  };
  losses.critic1 = critic_step(critic1_, critic1_opt_);
  losses.critic2 = critic_step(critic2_, critic2_opt_);
  require_finite(losses.critic1, "critic1", updates_);
  require_finite(losses.critic2, "critic2", updates_);

  // Policy step through the reparameterised sample.
  ForwardCache actor_cache;
  const Eigen::MatrixXd actor_out = actor_.forward(batch.states, &actor_cache);
  const PolicySample pi = sample_policy(actor_out, update_rng_);
  const Eigen::MatrixXd policy_in = stack_rows(batch.states, pi.action);
  ForwardCache c1, c2;
  const Eigen::RowVectorXd q1 = critic1_.forward(policy_in, &c1).row(0);
  const Eigen::RowVectorXd q2 = critic2_.forward(policy_in, &c2).row(0);
  Eigen::MatrixXd pick1 = Eigen::MatrixXd::Zero(1, n);
  Eigen::MatrixXd pick2 = Eigen::MatrixXd::Zero(1, n);
  double actor_loss = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const bool first = q1(j) <= q2(j);
    (first ? pick1 : pick2)(0, j) = 1.0;
    actor_loss += alpha * pi.log_prob(j) - (first ? q1(j) : q2(j));
  }
  losses.actor = actor_loss / static_cast<double>(n);
  require_finite(losses.actor, "actor", updates_);
  const Eigen::MatrixXd dq_da = critic1_.backward(c1, pick1).input.bottomRows(d) +
                                critic2_.backward(c2, pick2).input.bottomRows(d);

  Eigen::MatrixXd grad_out(2 * d, n);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) {
      const double a = pi.action(i, j);
      const double g = dq_da(i, j);
      const double sigma_eps = pi.std(i, j) * pi.noise(i, j);
      const double squash = 1.0 - a * a;
      grad_out(i, j) = inv_n * (alpha * 2.0 * a - g * squash);
      const double d_log_std = alpha * (-1.0 + 2.0 * a * sigma_eps) - g * squash * sigma_eps;
      grad_out(d + i, j) = pi.clamped(i, j) > 0.5 ? 0.0 : inv_n * d_log_std;
    }
  }
  const MlpGradient actor_grad = actor_.backward(actor_cache, grad_out);
  actor_opt_.step(actor_.mutable_params(), actor_grad.params);

  if (config_.learn_temperature) {
    const double mean_gap = (pi.log_prob.array() + target_entropy_).mean();
    losses.temperature = -log_temperature_(0) * mean_gap;
    Eigen::VectorXd g(1);
    g(0) = -mean_gap;
    temperature_opt_.step(log_temperature_, g);
    require_finite(losses.temperature, "temperature", updates_);
  }

  polyak_update(target1_, critic1_, config_.target_rate);
  polyak_update(target2_, critic2_, config_.target_rate);
  ++updates_;
  return losses;
}

}  // namespace softran::learn
