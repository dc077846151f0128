#include <gtest/gtest.h>

#include <cmath>

#include "softran/learn/ddpg.hpp"
#include "softran/learn/dqn.hpp"
#include "softran/learn/sac.hpp"
#include "toys.hpp"

using namespace softran;
using namespace softran::learn;

TEST(Sac, ActionsStayInBox) {
  SacAgent agent(3, 4, SacConfig{}, 1);
  Rng rng(2, Stream::Evaluation);
  for (int i = 0; i < 10000; ++i) {
    const Eigen::VectorXd a = agent.select_action(Eigen::VectorXd::Random(3) * 5.0, rng, false);
    ASSERT_LE(a.cwiseAbs().maxCoeff(), 1.0);
  }
}

TEST(Sac, ZeroActorIsDeterministicZero) {
  SacAgent agent(3, 2, SacConfig{}, 1);
  agent.actor().mutable_params().setZero();
  Rng rng(2, Stream::Evaluation);
  EXPECT_EQ(agent.select_action(Eigen::VectorXd::Ones(3), rng, true).norm(), 0.0);
}

TEST(Sac, SampleMeanApproachesSquashedMeanAsStdShrinks) {
  SacConfig config;
  config.hidden = {4};
  SacAgent agent(1, 1, config, 1);
  // Zero weights; mean bias 0.7, log-std bias at the lower clamp.
  agent.actor().mutable_params().setZero();
  auto bias = agent.actor().mutable_bias(1);
  bias(0) = 0.7;
  bias(1) = -20.0;
  Rng rng(3, Stream::Evaluation);
  double sum = 0.0;
  for (int i = 0; i < 10000; ++i) sum += agent.select_action(Eigen::VectorXd::Zero(1), rng, false)(0);
  EXPECT_NEAR(sum / 10000.0, std::tanh(0.7), 1e-6);
}

TEST(Sac, FullTargetRateCopiesCritics) {
  SacConfig config;
  config.hidden = {8};
  config.target_rate = 1.0;
  SacAgent agent(2, 1, config, 4);
  ReplayBuffer buf(10);
  for (int i = 0; i < 10; ++i) {
    buf.push({Eigen::VectorXd::Random(2), Eigen::VectorXd::Constant(1, 0.1 * i), 1.0,
              Eigen::VectorXd::Random(2), false, {}});
  }
  Rng rng(5, Stream::Evaluation);
  agent.update(buf.sample(8, rng));
  EXPECT_EQ(agent.target_critic(0).params(), agent.critic(0).params());
  EXPECT_EQ(agent.target_critic(1).params(), agent.critic(1).params());
}

TEST(Sac, TemperatureMovesTowardTargetEntropy) {
  SacConfig config;
  config.hidden = {8};
  config.temperature_lr = 1e-2;
  SacAgent agent(1, 1, config, 6);
  ReplayBuffer buf(32);
  for (int i = 0; i < 32; ++i) {
    buf.push({Eigen::VectorXd::Zero(1), Eigen::VectorXd::Zero(1), 0.0, Eigen::VectorXd(0), true, {}});
  }
  Rng rng(7, Stream::Evaluation);
  const double before = agent.log_temperature();
  for (int i = 0; i < 20; ++i) agent.update(buf.sample(16, rng));
  EXPECT_NE(agent.log_temperature(), before);
  EXPECT_TRUE(std::isfinite(agent.log_temperature()));
}

TEST(Sac, CriticsMatchValueIteration) {
  const toys::MdpFit fit = toys::sac_on_toy_mdp(1, 5000);
  EXPECT_LE(fit.max_error, 0.05) << "Q(0,.)=" << fit.q[0][0] << "," << fit.q[0][1]
                                 << " Q(1,.)=" << fit.q[1][0] << "," << fit.q[1][1];
  EXPECT_LT(fit.late_loss, fit.early_loss);
}

TEST(Dqn, MatchesValueIterationAndGreedyOptimum) {
  const toys::MdpFit fit = toys::dqn_on_toy_mdp(1, 5000);
  EXPECT_LE(fit.max_error, 0.05);
  for (int s = 0; s < 2; ++s) {
    const int best = fit.optimum[s][1] > fit.optimum[s][0] ? 1 : 0;
    EXPECT_EQ(fit.greedy[s], best);
  }
}

TEST(Dqn, ZeroLearningRateFreezesParameters) {
  DqnConfig config;
  config.hidden = {8};
  config.learning_rate = 0.0;
  DqnAgent agent(2, {3}, config, 1);
  const Eigen::VectorXd before = agent.network().params();
  ReplayBuffer buf(8);
  for (int i = 0; i < 8; ++i) {
    buf.push({Eigen::VectorXd::Random(2), Eigen::VectorXd::Constant(1, i % 3), 1.0,
              Eigen::VectorXd::Random(2), false, {}});
  }
  Rng rng(2, Stream::Evaluation);
  agent.update(buf.sample(8, rng));
  EXPECT_EQ(agent.network().params(), before);
}

TEST(Dqn, FullExplorationIsUniform) {
  DqnAgent agent(2, {4}, DqnConfig{}, 1);
  Rng rng(3, Stream::Evaluation);
  std::array<int, 4> hist{};
  const int n = 10000;
  for (int i = 0; i < n; ++i) ++hist[agent.select_action(Eigen::VectorXd::Ones(2), rng, 1.0)[0]];
  const double expected = n / 4.0, sd = std::sqrt(n * 0.25 * 0.75);
  for (int c : hist) EXPECT_NEAR(c, expected, 3.0 * sd);
}

TEST(Dqn, GreedyTiesGoToLowestIndex) {
  DqnConfig config;
  config.hidden = {4};
  DqnAgent agent(1, {3, 2}, config, 1);
  agent.network().mutable_params().setZero();
  const auto choice = agent.greedy(Eigen::VectorXd::Ones(1));
  ASSERT_EQ(choice.size(), 2u);
  EXPECT_EQ(choice[0], 0u);
  EXPECT_EQ(choice[1], 0u);
}

TEST(Ddpg, BanditActorAndCritic) {
  const toys::BanditFit fit = toys::ddpg_on_bandit(1, 5000);
  EXPECT_NEAR(fit.action, 0.5, 0.05);
  EXPECT_LE(fit.max_critic_error, 0.02);
}

TEST(Ddpg, FrozenWithoutNoiseOrLearning) {
  DdpgConfig config;
  config.hidden = {8};
  config.actor_lr = 0.0;
  config.critic_lr = 0.0;
  config.exploration_noise = 0.0;
  DdpgAgent agent(2, 1, config, 1);
  Rng rng(1, Stream::Evaluation);
  const Eigen::VectorXd s = Eigen::VectorXd::Ones(2);
  const Eigen::VectorXd a = agent.select_action(s, rng, false);
  ReplayBuffer buf(8);
  for (int i = 0; i < 8; ++i) buf.push({s, a, 1.0, s, true, {}});
  agent.update(buf.sample(8, rng));
  EXPECT_EQ(agent.select_action(s, rng, false), a);
  EXPECT_EQ(agent.select_action(s, rng, true), a);
}
